//! The triple description format read by the command line tool.
//!
//! A file is a list of `[section]` headers followed by lines; `#` starts a
//! comment. Either the three explicit sections appear:
//!
//! ```text
//! [graph]
//! vertices = 1
//! edge e0 range=1 source=1
//! edge e1 range=1 source=1
//!
//! [group]
//! kind = integer            # or: cayley, automaton
//!
//! [action]
//! edge 1 e0 -> e1 cocycle 0
//! edge 1 e1 -> e0 cocycle 1
//! ```
//!
//! or exactly one builder section:
//!
//! ```text
//! [katsura]
//! A = 2 1 ; 0 3
//! B = 1 0 ; 0 2
//! ```
//!
//! ```text
//! [automaton]
//! alphabet = e0 e1
//! states = a
//! faithful = true
//! transition a e0 -> e1 / 1
//! transition a e1 -> e0 / a
//! ```
//!
//! Cayley groups list `elements = x y ...` and one `row <x> = ...` per element,
//! where `row x` holds the products `x·y`. Automaton groups list
//! `generators = a b ...` and optionally `faithful = true`.
//!
//! Action rows are `edge <g> <e> -> <e'> cocycle <h>` and, optionally,
//! `vertex <g> <v> -> <w>`; vertex images default to the ranges of edge
//! images. Integer actions are given by the generator `1` alone, automaton
//! actions by one row per generator and edge, Cayley actions by one row per
//! non-identity element and edge (the identity acts trivially unless listed).

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::action::{ActionData, SelfSimilarTriple};
use crate::build::{self, AutomatonData, KatsuraData};
use crate::graph::{EdgeId, EdgeSpec, Graph, VertexId};
use crate::group::{CayleyTable, Group, GroupElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
struct Line<'a> {
    number: usize,
    raw: &'a str,
    text: &'a str,
}

impl Line<'_> {
    fn err(&self, token: &str, message: impl Into<String>) -> SpecError {
        // column of the token inside the raw line, 1-based
        let column = if token.is_empty() {
            1
        } else {
            self.raw.find(token).map_or(1, |c| c + 1)
        };
        SpecError { line: self.number, column, message: message.into() }
    }
}

fn whole(message: impl Into<String>) -> SpecError {
    SpecError { line: 0, column: 0, message: message.into() }
}

/// Parses a description and builds its triple.
pub fn parse_spec(text: &str) -> Result<SelfSimilarTriple, SpecError> {
    let mut sections: Vec<(String, usize, Vec<Line<'_>>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let text = raw.split('#').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        let line = Line { number: i + 1, raw, text };
        if let Some(name) = text.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let name = name.trim().to_string();
            if !["graph", "group", "action", "katsura", "automaton"].contains(&name.as_str()) {
                return Err(line.err(&name, format!("unknown section `{name}`")));
            }
            if sections.iter().any(|(n, _, _)| *n == name) {
                return Err(line.err(&name, format!("section `{name}` appears twice")));
            }
            sections.push((name, line.number, Vec::new()));
            continue;
        }
        match sections.last_mut() {
            Some((_, _, body)) => body.push(line),
            None => return Err(line.err(text, "content before the first section")),
        }
    }
    let names: Vec<&str> = sections.iter().map(|(n, _, _)| n.as_str()).collect();
    let get = |name: &str| sections.iter().find(|(n, _, _)| n == name);
    match names.as_slice() {
        ["katsura"] => katsura(&get("katsura").unwrap().2),
        ["automaton"] => automaton(&get("automaton").unwrap().2),
        _ if names.iter().any(|n| *n == "katsura" || *n == "automaton") => {
            Err(whole("a builder section must be the only section"))
        }
        _ => {
            let graph_lines = &get("graph").ok_or_else(|| whole("missing [graph] section"))?.2;
            let group_lines = &get("group").ok_or_else(|| whole("missing [group] section"))?.2;
            let action_lines = get("action").map(|s| s.2.as_slice()).unwrap_or(&[]);
            let graph = graph(graph_lines)?;
            explicit(graph, group_lines, action_lines)
        }
    }
}

fn key_value<'a>(line: &Line<'a>) -> Option<(&'a str, &'a str)> {
    let (k, v) = line.text.split_once('=')?;
    Some((k.trim(), v.trim()))
}

fn graph(lines: &[Line<'_>]) -> Result<Graph, SpecError> {
    let mut vertices: Option<Vec<String>> = None;
    let mut edges: Vec<(Line<'_>, String, String, String)> = Vec::new();
    for line in lines {
        let words: Vec<&str> = line.text.split_whitespace().collect();
        if words.first() == Some(&"edge") {
            let label = words.get(1).ok_or_else(|| line.err("edge", "edge needs a label"))?;
            let mut range = None;
            let mut source = None;
            for w in &words[2..] {
                match w.split_once('=') {
                    Some(("range", v)) => range = Some(v.to_string()),
                    Some(("source", v)) => source = Some(v.to_string()),
                    _ => return Err(line.err(w, format!("expected range=<v> or source=<v>, got `{w}`"))),
                }
            }
            let range = range.ok_or_else(|| line.err(label, format!("edge {label} has no range")))?;
            let source = source.ok_or_else(|| line.err(label, format!("edge {label} has no source")))?;
            edges.push((line.clone(), label.to_string(), range, source));
        } else if let Some(("vertices", v)) = key_value(line) {
            vertices = Some(v.split_whitespace().map(str::to_string).collect());
        } else {
            return Err(line.err(line.text, "expected `vertices = ...` or `edge <label> range=<v> source=<v>`"));
        }
    }
    let vertices = vertices.ok_or_else(|| whole("[graph] needs a `vertices = ...` line"))?;
    let index: HashMap<&str, u32> = vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i as u32)).collect();
    let mut specs = Vec::new();
    for (line, label, range, source) in &edges {
        let lookup = |v: &str| {
            index.get(v).map(|&i| VertexId(i)).ok_or_else(|| line.err(v, format!("unknown vertex `{v}`")))
        };
        specs.push(EdgeSpec { label: label.clone(), range: lookup(range)?, source: lookup(source)? });
    }
    Graph::new(vertices, specs).map_err(|e| whole(e.to_string()))
}

enum GroupKind {
    Integer,
    Cayley(Arc<CayleyTable>),
    Automaton { names: Vec<String>, faithful: bool },
}

fn group(lines: &[Line<'_>]) -> Result<GroupKind, SpecError> {
    let mut kind = None;
    let mut elements: Option<Vec<String>> = None;
    let mut rows: HashMap<String, (Line<'_>, Vec<String>)> = HashMap::new();
    let mut generators: Option<Vec<String>> = None;
    let mut faithful = false;
    for line in lines {
        let (k, v) = key_value(line).ok_or_else(|| line.err(line.text, "expected `key = value`"))?;
        match k.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["kind"] => kind = Some((line.clone(), v.to_string())),
            ["elements"] => elements = Some(v.split_whitespace().map(str::to_string).collect()),
            ["generators"] => generators = Some(v.split_whitespace().map(str::to_string).collect()),
            ["faithful"] => faithful = parse_bool(line, v)?,
            ["row", x] => {
                rows.insert(x.to_string(), (line.clone(), v.split_whitespace().map(str::to_string).collect()));
            }
            _ => return Err(line.err(k, format!("unknown key `{k}` in [group]"))),
        }
    }
    let (kind_line, kind) = kind.ok_or_else(|| whole("[group] needs `kind = integer|cayley|automaton`"))?;
    match kind.as_str() {
        "integer" => Ok(GroupKind::Integer),
        "cayley" => {
            let names = elements.ok_or_else(|| kind_line.err("cayley", "cayley groups need `elements = ...`"))?;
            let index: HashMap<&str, u32> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i as u32)).collect();
            let mut table = Vec::new();
            for name in &names {
                let (line, row) =
                    rows.get(name).ok_or_else(|| kind_line.err("cayley", format!("missing `row {name} = ...`")))?;
                let row = row
                    .iter()
                    .map(|x| index.get(x.as_str()).copied().ok_or_else(|| line.err(x, format!("unknown element `{x}`"))))
                    .collect::<Result<Vec<_>, _>>()?;
                table.push(row);
            }
            let t = CayleyTable::new(names, table).map_err(|e| kind_line.err("cayley", e.to_string()))?;
            Ok(GroupKind::Cayley(Arc::new(t)))
        }
        "automaton" => {
            let names =
                generators.ok_or_else(|| kind_line.err("automaton", "automaton groups need `generators = ...`"))?;
            Ok(GroupKind::Automaton { names, faithful })
        }
        other => Err(kind_line.err(other, format!("unknown group kind `{other}`"))),
    }
}

fn parse_bool(line: &Line<'_>, v: &str) -> Result<bool, SpecError> {
    match v {
        "true" | "yes" => Ok(true),
        "false" | "no" => Ok(false),
        _ => Err(line.err(v, format!("expected true or false, got `{v}`"))),
    }
}

struct EdgeRow<'a> {
    line: Line<'a>,
    g: String,
    from: EdgeId,
    to: EdgeId,
    cocycle: String,
}

struct VertexRow<'a> {
    line: Line<'a>,
    g: String,
    from: VertexId,
    to: VertexId,
}

fn action_rows<'a>(graph: &Graph, lines: &[Line<'a>]) -> Result<(Vec<EdgeRow<'a>>, Vec<VertexRow<'a>>), SpecError> {
    let mut edges = Vec::new();
    let mut vertices = Vec::new();
    for line in lines {
        let w: Vec<&str> = line.text.split_whitespace().collect();
        match w.as_slice() {
            ["edge", g, e, "->", f, "cocycle", h] => {
                let edge = |x: &str| graph.edge_by_label(x).map_err(|_| line.err(x, format!("unknown edge `{x}`")));
                edges.push(EdgeRow { line: line.clone(), g: g.to_string(), from: edge(e)?, to: edge(f)?, cocycle: h.to_string() });
            }
            ["vertex", g, v, "->", u] => {
                let vertex =
                    |x: &str| graph.vertex_by_label(x).map_err(|_| line.err(x, format!("unknown vertex `{x}`")));
                vertices.push(VertexRow { line: line.clone(), g: g.to_string(), from: vertex(v)?, to: vertex(u)? });
            }
            _ => {
                return Err(line.err(
                    line.text,
                    "expected `edge <g> <e> -> <e'> cocycle <h>` or `vertex <g> <v> -> <w>`",
                ))
            }
        }
    }
    Ok((edges, vertices))
}

/// Collects `edge` rows for one acting symbol into full tables, checking that
/// every edge appears exactly once.
fn tables_for<'r, 'a>(
    graph: &Graph,
    rows: &[&'r EdgeRow<'a>],
    who: &str,
) -> Result<Vec<(EdgeId, &'r EdgeRow<'a>)>, SpecError> {
    let mut out: Vec<Option<&EdgeRow<'_>>> = vec![None; graph.edge_count()];
    for r in rows {
        if out[r.from.index()].replace(r).is_some() {
            let label = graph.edge_label(r.from);
            return Err(r.line.err(label, format!("edge {label} listed twice for {who}")));
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.map(|r| (r.to, r)).ok_or_else(|| {
                whole(format!("no action row for {who} on edge {}", graph.edge_label(EdgeId(i as u32))))
            })
        })
        .collect()
}

fn vertex_table(graph: &Graph, edge_image: &[EdgeId], rows: &[&VertexRow<'_>]) -> Result<Vec<VertexId>, SpecError> {
    let mut table: Vec<VertexId> =
        graph.vertices().map(|v| graph.range(edge_image[graph.incoming(v)[0].index()])).collect();
    for r in rows {
        if table[r.from.index()] != r.to {
            let label = graph.vertex_label(r.from);
            return Err(r.line.err(label, format!("vertex row for {label} disagrees with the ranges of edge images")));
        }
        table[r.from.index()] = r.to;
    }
    Ok(table)
}

fn explicit(graph: Graph, group_lines: &[Line<'_>], action_lines: &[Line<'_>]) -> Result<SelfSimilarTriple, SpecError> {
    let kind = group(group_lines)?;
    let (edge_rows, vertex_rows) = action_rows(&graph, action_lines)?;
    let acting = |g: &str| -> (Vec<&EdgeRow<'_>>, Vec<&VertexRow<'_>>) {
        (edge_rows.iter().filter(|r| r.g == g).collect(), vertex_rows.iter().filter(|r| r.g == g).collect())
    };
    let stray = |allowed: &dyn Fn(&str) -> bool| -> Result<(), SpecError> {
        for r in &edge_rows {
            if !allowed(&r.g) {
                return Err(r.line.err(&r.g, format!("`{}` is not an acting symbol here", r.g)));
            }
        }
        for r in &vertex_rows {
            if !allowed(&r.g) {
                return Err(r.line.err(&r.g, format!("`{}` is not an acting symbol here", r.g)));
            }
        }
        Ok(())
    };
    match kind {
        GroupKind::Integer => {
            stray(&|g| g == "1")?;
            let (e, v) = acting("1");
            let table = tables_for(&graph, &e, "1")?;
            let edge: Vec<EdgeId> = table.iter().map(|(t, _)| *t).collect();
            let mut cocycle = Vec::new();
            for (_, r) in &table {
                let k = r.cocycle.parse::<i64>().map_err(|_| r.line.err(&r.cocycle, "expected an integer cocycle"))?;
                cocycle.push(k);
            }
            let vertex = vertex_table(&graph, &edge, &v)?;
            let action = ActionData::integer_generator(vertex, edge, cocycle).map_err(|e| whole(e.to_string()))?;
            SelfSimilarTriple::new(graph, Group::Integers, action).map_err(|e| whole(e.to_string()))
        }
        GroupKind::Cayley(t) => {
            let grp = Group::Finite(t.clone());
            let names: HashSet<String> = (0..t.order() as u32).map(|i| t.name(i).to_string()).collect();
            stray(&|g| names.contains(g))?;
            let (mut vertex, mut edge, mut cocycle) = (Vec::new(), Vec::new(), Vec::new());
            for i in 0..t.order() as u32 {
                let name = t.name(i);
                let (e, v) = acting(name);
                if i == t.identity() && e.is_empty() && v.is_empty() {
                    vertex.push(graph.vertices().collect());
                    edge.push(graph.edges().collect());
                    cocycle.push(vec![i; graph.edge_count()]);
                    continue;
                }
                let table = tables_for(&graph, &e, name)?;
                let img: Vec<EdgeId> = table.iter().map(|(x, _)| *x).collect();
                let mut coc = Vec::new();
                for (_, r) in &table {
                    match grp.parse(&r.cocycle) {
                        Ok(GroupElement::Fin(h)) => coc.push(h),
                        _ => return Err(r.line.err(&r.cocycle, format!("unknown element `{}`", r.cocycle))),
                    }
                }
                vertex.push(vertex_table(&graph, &img, &v)?);
                edge.push(img);
                cocycle.push(coc);
            }
            SelfSimilarTriple::new(graph, grp, ActionData::FiniteTables { vertex, edge, cocycle })
                .map_err(|e| whole(e.to_string()))
        }
        GroupKind::Automaton { names, faithful } => {
            stray(&|g| names.iter().any(|n| n == g))?;
            let mut images = Vec::new();
            let mut restrictions = Vec::new();
            for name in &names {
                let (e, v) = acting(name);
                let table = tables_for(&graph, &e, name)?;
                let img: Vec<EdgeId> = table.iter().map(|(x, _)| *x).collect();
                vertex_table(&graph, &img, &v)?;
                restrictions.push(table.iter().map(|(_, r)| r.cocycle.clone()).collect());
                images.push(img);
            }
            build::automaton_on_graph(graph, names, images, &restrictions, faithful).map_err(|e| whole(e.to_string()))
        }
    }
}

fn parse_matrix(line: &Line<'_>, v: &str) -> Result<Vec<Vec<i64>>, SpecError> {
    v.split(';')
        .map(|row| {
            row.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<i64>().map_err(|_| line.err(x, format!("expected an integer, got `{x}`"))))
                .collect()
        })
        .collect()
}

fn katsura(lines: &[Line<'_>]) -> Result<SelfSimilarTriple, SpecError> {
    let mut a = None;
    let mut b = None;
    for line in lines {
        match key_value(line) {
            Some(("A", v)) => a = Some(parse_matrix(line, v)?),
            Some(("B", v)) => b = Some(parse_matrix(line, v)?),
            _ => return Err(line.err(line.text, "expected `A = ...` or `B = ...`")),
        }
    }
    let data = KatsuraData {
        a: a.ok_or_else(|| whole("[katsura] needs `A = ...`"))?,
        b: b.ok_or_else(|| whole("[katsura] needs `B = ...`"))?,
    };
    build::from_katsura(&data).map_err(|e| whole(e.to_string()))
}

fn automaton(lines: &[Line<'_>]) -> Result<SelfSimilarTriple, SpecError> {
    let mut alphabet: Option<Vec<String>> = None;
    let mut states: Option<Vec<String>> = None;
    let mut faithful = false;
    let mut transitions: Vec<(Line<'_>, String, String, String, String)> = Vec::new();
    for line in lines {
        let w: Vec<&str> = line.text.split_whitespace().collect();
        if let ["transition", s, x, "->", y, "/", r] = w.as_slice() {
            transitions.push((line.clone(), s.to_string(), x.to_string(), y.to_string(), r.to_string()));
            continue;
        }
        match key_value(line) {
            Some(("alphabet", v)) => alphabet = Some(v.split_whitespace().map(str::to_string).collect()),
            Some(("states", v)) => states = Some(v.split_whitespace().map(str::to_string).collect()),
            Some(("faithful", v)) => faithful = parse_bool(line, v)?,
            _ => {
                return Err(line.err(
                    line.text,
                    "expected `alphabet = ...`, `states = ...`, `faithful = ...` or `transition <s> <x> -> <y> / <word>`",
                ))
            }
        }
    }
    let alphabet = alphabet.ok_or_else(|| whole("[automaton] needs `alphabet = ...`"))?;
    let states = states.ok_or_else(|| whole("[automaton] needs `states = ...`"))?;
    let k = alphabet.len();
    let mut output = vec![vec![None; k]; states.len()];
    let mut restriction = vec![vec![None; k]; states.len()];
    for (line, s, x, y, r) in &transitions {
        let si = states.iter().position(|n| n == s).ok_or_else(|| line.err(s, format!("unknown state `{s}`")))?;
        let letter = |l: &str| alphabet.iter().position(|n| n == l).ok_or_else(|| line.err(l, format!("unknown letter `{l}`")));
        let (xi, yi) = (letter(x)?, letter(y)?);
        if output[si][xi].replace(yi).is_some() {
            return Err(line.err(x, format!("transition for state {s} on {x} given twice")));
        }
        restriction[si][xi] = Some(r.clone());
    }
    let missing = |s: usize, x: usize| whole(format!("no transition for state {} on {}", states[s], alphabet[x]));
    let output = (0..states.len())
        .map(|s| (0..k).map(|x| output[s][x].ok_or_else(|| missing(s, x))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let restriction = (0..states.len())
        .map(|s| (0..k).map(|x| restriction[s][x].clone().ok_or_else(|| missing(s, x))).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    build::from_automaton(&AutomatonData { alphabet, states, output, restriction, faithful })
        .map_err(|e| whole(e.to_string()))
}
