//! Oracles shared by the integration tests. None of them calls the closed
//! formulas under test: products are computed by rewriting words in the
//! generators `s_e`, `s_e*`, `u_g`, `p_v`, and the odometer by binary addition.

#![allow(dead_code)]

pub mod golden;

use rand::Rng;

use selfsim::action::SelfSimilarTriple;
use selfsim::germ::{Germ, Groupoid};
use selfsim::graph::{EdgeId, Graph, VertexId};
use selfsim::group::GroupElement;
use selfsim::path::{InfPath, Path};
use selfsim::semigroup::SemigroupElement;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Letter {
    S(EdgeId),
    SStar(EdgeId),
    U(GroupElement),
    P(VertexId),
}

/// Rewrites `w` to the normal form `s_α (p_v) u_g s_β*`; `None` means zero.
fn normalize(t: &SelfSimilarTriple, mut w: Vec<Letter>) -> Option<Vec<Letter>> {
    let graph = t.graph();
    let grp = t.group();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i + 1 < w.len() {
            use Letter::*;
            let replacement: Option<Option<Vec<Letter>>> = match (&w[i], &w[i + 1]) {
                (U(g), U(h)) => Some(Some(vec![U(grp.mul(g, h))])),
                (U(g), S(e)) => {
                    let (f, phi) = t.act_edge(g, *e);
                    Some(Some(vec![S(f), U(phi)]))
                }
                (SStar(e), U(g)) => {
                    let gi = grp.inv(g);
                    let (f, phi) = t.act_edge(&gi, *e);
                    Some(Some(vec![U(grp.inv(&phi)), SStar(f)]))
                }
                (SStar(e), S(f)) => Some((e == f).then(|| vec![P(graph.source(*e))])),
                (P(v), S(e)) => Some((graph.range(*e) == *v).then(|| vec![S(*e)])),
                (S(e), P(v)) => Some((graph.source(*e) == *v).then(|| vec![S(*e)])),
                (SStar(e), P(v)) => Some((graph.range(*e) == *v).then(|| vec![SStar(*e)])),
                (P(v), SStar(e)) => Some((graph.source(*e) == *v).then(|| vec![SStar(*e)])),
                (P(v), P(u)) => Some((v == u).then(|| vec![P(*v)])),
                (U(g), P(v)) => Some(Some(vec![P(t.act_vertex(g, *v)), U(g.clone())])),
                _ => None,
            };
            match replacement {
                Some(None) => return None,
                Some(Some(r)) => {
                    w.splice(i..i + 2, r);
                    changed = true;
                }
                None => i += 1,
            }
        }
        if !changed {
            return Some(w);
        }
    }
}

/// The word `s_α u_g s_β*` with every generator flanked by its projections,
/// `s_e = p_{r(e)} s_e p_{d(e)}`, so that absorbing a projection checks the
/// endpoints.
fn word_of(t: &SelfSimilarTriple, s: &SemigroupElement) -> Option<Vec<Letter>> {
    let SemigroupElement::Triple { alpha, g, beta } = s else { return None };
    let graph = t.graph();
    let mut w = vec![Letter::P(alpha.range())];
    for &e in alpha.edges() {
        w.extend([Letter::S(e), Letter::P(graph.source(e))]);
    }
    w.push(Letter::U(g.clone()));
    w.push(Letter::P(beta.source()));
    for &e in beta.edges().iter().rev() {
        w.extend([Letter::SStar(e), Letter::P(graph.range(e))]);
    }
    Some(w)
}

fn element_of(t: &SelfSimilarTriple, w: Vec<Letter>) -> SemigroupElement {
    let graph = t.graph();
    let mut alpha_edges = Vec::new();
    let mut vertex = None;
    let mut g = t.group().identity();
    let mut beta_rev = Vec::new();
    for l in w {
        match l {
            Letter::S(e) => alpha_edges.push(e),
            Letter::P(v) => vertex = Some(v),
            Letter::U(h) => g = h,
            Letter::SStar(e) => beta_rev.push(e),
        }
    }
    let alpha = if alpha_edges.is_empty() {
        Path::vertex(vertex.expect("a vertex projection survives on the left"))
    } else {
        Path::from_edges(graph, &alpha_edges).expect("normal form is a path")
    };
    beta_rev.reverse();
    let beta = if beta_rev.is_empty() {
        Path::vertex(t.act_vertex(&t.group().inv(&g), alpha.source()))
    } else {
        Path::from_edges(graph, &beta_rev).expect("normal form is a path")
    };
    SemigroupElement::Triple { alpha, g, beta }
}

/// Product of two semigroup elements by rewriting generator words.
pub fn rewrite_product(t: &SelfSimilarTriple, a: &SemigroupElement, b: &SemigroupElement) -> SemigroupElement {
    let (Some(mut w), Some(v)) = (word_of(t, a), word_of(t, b)) else {
        return SemigroupElement::Zero;
    };
    w.extend(v);
    match normalize(t, w) {
        Some(n) => element_of(t, n),
        None => SemigroupElement::Zero,
    }
}

/// Adding `m` to the binary number read least significant digit first
/// (`e0` = 0, `e1` = 1): returns the digits of the sum and the carry out.
pub fn binary_add(m: i64, digits: &[u8]) -> (Vec<u8>, i64) {
    let l = digits.len() as u32;
    let val: i64 = digits.iter().enumerate().map(|(i, &d)| (d as i64) << i).sum();
    let total = m + val;
    let modulus = 1i64 << l;
    let low = total.rem_euclid(modulus);
    let carry = total.div_euclid(modulus);
    ((0..l).map(|i| ((low >> i) & 1) as u8).collect(), carry)
}

/// A path from vertex `start % N` extended at the source end by `choices`.
pub fn walk(graph: &Graph, start: usize, choices: &[usize]) -> Path {
    let mut p = Path::vertex(VertexId((start % graph.vertex_count()) as u32));
    for &c in choices {
        let inc = graph.incoming(p.source());
        p.push(graph, inc[c % inc.len()]).expect("r(e) = d(p)");
    }
    p
}

/// A path ending at `end`, grown at the range end while outgoing edges exist.
pub fn walk_to(graph: &Graph, end: VertexId, choices: &[usize]) -> Path {
    let mut p = Path::vertex(end);
    for &c in choices {
        let out: Vec<EdgeId> = graph.edges().filter(|&e| graph.source(e) == p.range()).collect();
        if out.is_empty() {
            break;
        }
        p = Path::edge(graph, out[c % out.len()]).concat(&p).expect("d(e) = r(p)");
    }
    p
}

/// Every path of length `≤ extra` beyond `beta`, extended at the source end.
pub fn extensions_up_to(graph: &Graph, beta: &Path, extra: usize) -> Vec<Path> {
    let mut out = vec![beta.clone()];
    let mut layer = vec![beta.clone()];
    for _ in 0..extra {
        let mut next = Vec::new();
        for p in &layer {
            for &e in graph.incoming(p.source()) {
                let mut q = p.clone();
                q.push(graph, e).unwrap();
                next.push(q);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Brute-force cover test: members not below the target are dropped; the
/// remaining set covers when every idempotent `e_γ ≤ e_β` with
/// `|γ| ≤ max |αᵢ|` has nonzero product with some member. Longer `γ` inherit
/// the answer of their prefix of that length.
pub fn cover_oracle(t: &SelfSimilarTriple, members: &[Path], target: &Path) -> bool {
    let graph = t.graph();
    let one = t.group().identity();
    let e = |p: &Path| SemigroupElement::Triple { alpha: p.clone(), g: one.clone(), beta: p.clone() };
    let below: Vec<&Path> = members
        .iter()
        .filter(|a| rewrite_product(t, &e(a), &e(target)) == e(a))
        .collect();
    if below.is_empty() {
        return false;
    }
    let l = below.iter().map(|a| a.len()).max().unwrap();
    extensions_up_to(graph, target, l - target.len())
        .iter()
        .all(|g| below.iter().any(|a| rewrite_product(t, &e(g), &e(a)) != SemigroupElement::Zero))
}

/// Small graphs with no sources: at most 3 vertices and 5 edges.
pub fn small_graphs() -> Vec<Graph> {
    use selfsim::graph::EdgeSpec;
    let mut out = Vec::new();
    let spec = |label: &str, r: u32, s: u32| EdgeSpec { label: label.into(), range: VertexId(r), source: VertexId(s) };
    for n in 1..=3u32 {
        let pairs: Vec<(u32, u32)> = (0..n).flat_map(|r| (0..n).map(move |s| (r, s))).collect();
        // all multisets of edges up to size 5 are too many for n = 3; take
        // subsets of distinct pairs plus one doubled loop
        let k = pairs.len();
        for mask in 1u32..(1 << k) {
            let chosen: Vec<(u32, u32)> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            if chosen.len() > 5 {
                continue;
            }
            for doubled in [None, Some(0usize)] {
                let mut edges: Vec<_> = chosen.iter().enumerate().map(|(i, &(r, s))| spec(&format!("e{i}"), r, s)).collect();
                if let Some(i) = doubled {
                    if edges.len() == 5 {
                        continue;
                    }
                    let (r, s) = chosen[i];
                    edges.push(spec("f", r, s));
                }
                let labels = (0..n).map(|v| format!("v{v}")).collect();
                if let Ok(g) = Graph::new(labels, edges) {
                    out.push(g);
                }
            }
        }
    }
    out
}

/// `μ(ν)*` with `μ` a walk from `start` and `ν` a closed walk, if one exists
/// along the chosen edges.
pub fn eventually_periodic(t: &SelfSimilarTriple, start: usize, pre: &[usize], cyc: &[usize]) -> Option<InfPath> {
    let graph = t.graph();
    let mu = walk(graph, start, pre);
    // follow the choices until a vertex repeats, then close the loop there
    let mut p = Path::vertex(mu.source());
    let mut seen = vec![(p.source(), 0usize)];
    for i in 0..(cyc.len() + graph.vertex_count() * 2) {
        let inc = graph.incoming(p.source());
        p.push(graph, inc[cyc[i % cyc.len()] % inc.len()]).ok()?;
        if let Some(&(_, at)) = seen.iter().find(|(v, _)| *v == p.source()) {
            let (head, cycle) = p.split_at(at);
            let mu = mu.concat(&head).ok()?;
            return InfPath::periodic(mu, cycle).ok();
        }
        seen.push((p.source(), p.len()));
    }
    None
}

fn choices<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<usize> {
    let n = rng.gen_range(min..=max);
    (0..n).map(|_| rng.gen_range(0..64)).collect()
}

/// A germ `[α, g, β; ξ]` with `g` from `window`, `|α|, |β| ≤ 3` and `ξ`
/// eventually periodic with a prefix of length `≤ 2`.
pub fn random_germ<R: Rng>(gd: &Groupoid<'_>, window: &[GroupElement], rng: &mut R) -> Germ {
    let t = gd.triple();
    let graph = t.graph();
    loop {
        let g = window[rng.gen_range(0..window.len())].clone();
        let beta = walk(graph, rng.gen_range(0..graph.vertex_count()), &choices(rng, 0, 3));
        let (pre, cyc) = (choices(rng, 0, 2), choices(rng, 1, 3));
        let Some(xi) = eventually_periodic(t, beta.source().index(), &pre, &cyc) else { continue };
        if xi.range() != beta.source() {
            continue;
        }
        let alpha = walk_to(graph, t.act_vertex(&g, beta.source()), &choices(rng, 0, 3));
        if let Ok(u) = gd.make_germ(alpha, g, beta, xi) {
            return u;
        }
    }
}

/// A germ `u₁` with `d(u₁) = r(u₂)`: its `β` is a prefix of `r(u₂)`.
pub fn composable_partner<R: Rng>(gd: &Groupoid<'_>, window: &[GroupElement], u2: &Germ, rng: &mut R) -> Germ {
    let t = gd.triple();
    let eta = gd.range(u2);
    let beta = gd.range_prefix(u2, rng.gen_range(0..=3)).expect("within depth");
    let g = window[rng.gen_range(0..window.len())].clone();
    let alpha = walk_to(t.graph(), t.act_vertex(&g, beta.source()), &choices(rng, 0, 3));
    gd.germ_at(alpha, g, beta, &eta).expect("beta is a prefix of the point")
}
