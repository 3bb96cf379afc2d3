//! Finite paths, the prefix order, and eventually periodic infinite paths.

use std::cmp::Ordering;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, VertexId};
use crate::verdict::Equality;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PathError {
    #[error("illegal composition: source {left} does not match range {right}")]
    NotComposable { left: String, right: String },
    #[error("edges {0} and {1} do not form a path")]
    Broken(String, String),
    #[error("empty edge sequence; use a vertex path")]
    Empty,
    #[error("cycle must be a nonempty closed path starting where the prefix ends")]
    BadCycle,
    #[error("depth exceeded: asked for {requested} letters, only {available} known")]
    DepthExceeded { requested: usize, available: usize },
    #[error("cannot parse path `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A finite path. Length-0 paths are vertices.
///
/// Stores the vertex sequence `r(α₁), d(α₁), d(α₂), …, d(αₙ)` next to the
/// edges so that range, source and every sub-path are available without a
/// graph lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixOrder {
    Equal,
    AProperPrefix,
    BProperPrefix,
    Incomparable,
}

impl Path {
    pub fn vertex(v: VertexId) -> Path {
        Path { vertices: vec![v], edges: Vec::new() }
    }

    pub fn edge(graph: &Graph, e: EdgeId) -> Path {
        Path { vertices: vec![graph.range(e), graph.source(e)], edges: vec![e] }
    }

    pub fn from_edges(graph: &Graph, edges: &[EdgeId]) -> Result<Path, PathError> {
        let (first, rest) = edges.split_first().ok_or(PathError::Empty)?;
        let mut vertices = Vec::with_capacity(edges.len() + 1);
        vertices.push(graph.range(*first));
        vertices.push(graph.source(*first));
        let mut prev = *first;
        for &e in rest {
            if graph.range(e) != graph.source(prev) {
                return Err(PathError::Broken(graph.edge_label(prev).into(), graph.edge_label(e).into()));
            }
            vertices.push(graph.source(e));
            prev = e;
        }
        Ok(Path { vertices, edges: edges.to_vec() })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_vertex(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn range(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn source(&self) -> VertexId {
        self.vertices[self.edges.len()]
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// The `i`-th edge, 1-based.
    pub fn letter(&self, i: usize) -> EdgeId {
        self.edges[i - 1]
    }

    /// Sub-path of edges `start..end` (0-based, half open). Empty ranges give a vertex.
    pub fn slice(&self, start: usize, end: usize) -> Path {
        Path { vertices: self.vertices[start..=end].to_vec(), edges: self.edges[start..end].to_vec() }
    }

    /// First `n` edges; the range vertex when `n == 0`.
    pub fn truncate(&self, n: usize) -> Path {
        self.slice(0, n.min(self.len()))
    }

    pub fn split_at(&self, n: usize) -> (Path, Path) {
        (self.slice(0, n), self.slice(n, self.len()))
    }

    pub fn concat(&self, other: &Path) -> Result<Path, PathError> {
        if self.source() != other.range() {
            return Err(PathError::NotComposable {
                left: format!("#{}", self.source().0),
                right: format!("#{}", other.range().0),
            });
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Ok(Path { vertices, edges })
    }

    pub fn push(&mut self, graph: &Graph, e: EdgeId) -> Result<(), PathError> {
        if graph.range(e) != self.source() {
            return Err(PathError::NotComposable {
                left: format!("#{}", self.source().0),
                right: graph.edge_label(e).into(),
            });
        }
        self.vertices.push(graph.source(e));
        self.edges.push(e);
        Ok(())
    }

    pub fn is_prefix_of(&self, other: &Path) -> bool {
        self.range() == other.range() && other.edges.starts_with(&self.edges)
    }

    /// Returns `ε` with `prefix · ε = self`, if `prefix ⪯ self`.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        prefix.is_prefix_of(self).then(|| self.slice(prefix.len(), self.len()))
    }

    pub fn prefix_compare(&self, other: &Path) -> PrefixOrder {
        match self.len().cmp(&other.len()) {
            Ordering::Equal if self == other => PrefixOrder::Equal,
            Ordering::Less if self.is_prefix_of(other) => PrefixOrder::AProperPrefix,
            Ordering::Greater if other.is_prefix_of(self) => PrefixOrder::BProperPrefix,
            _ => PrefixOrder::Incomparable,
        }
    }

    /// All paths `δ` with `self ⪯ δ` and `|δ| = |self| + extra`, built by
    /// appending edges at the source end.
    pub fn extensions(&self, graph: &Graph, extra: usize) -> Vec<Path> {
        let mut layer = vec![self.clone()];
        for _ in 0..extra {
            let mut next = Vec::new();
            for p in &layer {
                for &e in graph.incoming(p.source()) {
                    let mut q = p.clone();
                    q.vertices.push(graph.source(e));
                    q.edges.push(e);
                    next.push(q);
                }
            }
            layer = next;
        }
        layer
    }

    pub fn parse(graph: &Graph, text: &str) -> Result<Path, PathError> {
        let text = text.trim();
        if let Some(v) = text.strip_prefix('@') {
            return Ok(Path::vertex(graph.vertex_by_label(v)?));
        }
        if text.is_empty() {
            return Err(PathError::Syntax(text.into()));
        }
        let edges = text
            .split('.')
            .map(|l| graph.edge_by_label(l.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Path::from_edges(graph, &edges)
    }

    pub fn render(&self, graph: &Graph) -> String {
        if self.is_vertex() {
            format!("@{}", graph.vertex_label(self.range()))
        } else {
            self.edges.iter().map(|&e| graph.edge_label(e)).collect::<Vec<_>>().join(".")
        }
    }
}

/// All paths of length at most `max_len`, ordered by length.
pub fn paths_up_to(graph: &Graph, max_len: usize) -> Vec<Path> {
    let mut out: Vec<Path> = graph.vertices().map(Path::vertex).collect();
    let mut layer = out.clone();
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|p| p.extensions(graph, 1)).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// An infinite path `ξ = ξ₁ξ₂…`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum InfPath {
    /// `μ ν ν ν …`, kept in canonical form: `ν` is primitive and `μ` is as short
    /// as possible, so structural equality is equality of infinite words.
    Periodic { prefix: Path, cycle: Path },
    /// Only the first `known.len()` letters are available.
    Stream { known: Path },
}

impl InfPath {
    pub fn periodic(prefix: Path, cycle: Path) -> Result<InfPath, PathError> {
        if cycle.is_vertex() || cycle.range() != cycle.source() || prefix.source() != cycle.range() {
            return Err(PathError::BadCycle);
        }
        Ok(normalize(prefix, cycle))
    }

    pub fn stream(known: Path) -> InfPath {
        InfPath::Stream { known }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, InfPath::Periodic { .. })
    }

    /// `r(ξ₁)`.
    pub fn range(&self) -> VertexId {
        match self {
            InfPath::Periodic { prefix, .. } => prefix.range(),
            InfPath::Stream { known } => known.range(),
        }
    }

    /// Number of known letters, `None` when all letters are known.
    pub fn depth(&self) -> Option<usize> {
        match self {
            InfPath::Periodic { .. } => None,
            InfPath::Stream { known } => Some(known.len()),
        }
    }

    /// The `n`-th letter, 1-based.
    pub fn letter(&self, n: usize) -> Result<EdgeId, PathError> {
        assert!(n >= 1, "letters are 1-based");
        match self {
            InfPath::Periodic { prefix, cycle } => {
                if n <= prefix.len() {
                    Ok(prefix.letter(n))
                } else {
                    Ok(cycle.edges[(n - prefix.len() - 1) % cycle.len()])
                }
            }
            InfPath::Stream { known } => {
                if n <= known.len() {
                    Ok(known.letter(n))
                } else {
                    Err(PathError::DepthExceeded { requested: n, available: known.len() })
                }
            }
        }
    }

    /// `ξ|ₙ`: the first `n` letters, or `r(ξ₁)` when `n == 0`.
    pub fn truncate(&self, n: usize) -> Result<Path, PathError> {
        match self {
            InfPath::Periodic { prefix, cycle } => {
                if n <= prefix.len() {
                    return Ok(prefix.truncate(n));
                }
                let mut rest = n - prefix.len();
                let mut out = prefix.clone();
                while rest >= cycle.len() {
                    out = out.concat(cycle).expect("cycle closes at prefix source");
                    rest -= cycle.len();
                }
                Ok(out.concat(&cycle.truncate(rest)).expect("cycle closes"))
            }
            InfPath::Stream { known } => {
                if n <= known.len() {
                    Ok(known.truncate(n))
                } else {
                    Err(PathError::DepthExceeded { requested: n, available: known.len() })
                }
            }
        }
    }

    /// `p ξ`, defined when `d(p) = r(ξ)`.
    pub fn prepend(&self, p: &Path) -> Result<InfPath, PathError> {
        Ok(match self {
            InfPath::Periodic { prefix, cycle } => normalize(p.concat(prefix)?, cycle.clone()),
            InfPath::Stream { known } => InfPath::Stream { known: p.concat(known)? },
        })
    }

    /// The tail `ξ_{n+1} ξ_{n+2} …`.
    pub fn drop_prefix(&self, n: usize) -> Result<InfPath, PathError> {
        match self {
            InfPath::Periodic { prefix, cycle } => {
                if n <= prefix.len() {
                    return Ok(InfPath::Periodic { prefix: prefix.slice(n, prefix.len()), cycle: cycle.clone() });
                }
                let shift = (n - prefix.len()) % cycle.len();
                let rotated = cycle.slice(shift, cycle.len()).concat(&cycle.slice(0, shift)).expect("rotation");
                Ok(InfPath::Periodic { prefix: Path::vertex(rotated.range()), cycle: rotated })
            }
            InfPath::Stream { known } => {
                if n <= known.len() {
                    Ok(InfPath::Stream { known: known.slice(n, known.len()) })
                } else {
                    Err(PathError::DepthExceeded { requested: n, available: known.len() })
                }
            }
        }
    }

    /// If `p ⪯ ξ`, the tail after `p`. Tri-state for streams that are too short.
    pub fn strip_prefix(&self, p: &Path) -> Result<Option<InfPath>, PathError> {
        let head = self.truncate(p.len())?;
        if &head == p {
            self.drop_prefix(p.len()).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Equality of infinite words: exact for two periodic paths, otherwise
    /// decided only when the known letters differ.
    pub fn compare(&self, other: &InfPath) -> Equality {
        if self.is_periodic() && other.is_periodic() {
            return Equality::from_bool(self == other);
        }
        if self.range() != other.range() {
            return Equality::Distinct;
        }
        let depth = self.depth().unwrap_or(usize::MAX).min(other.depth().unwrap_or(usize::MAX));
        for n in 1..=depth {
            if self.letter(n).expect("within depth") != other.letter(n).expect("within depth") {
                return Equality::Distinct;
            }
        }
        Equality::UnknownAtDepth(depth)
    }

    /// Accepts `μ(ν)*` where `μ` and `ν` are dot-separated edge labels;
    /// `μ` may be empty.
    pub fn parse(graph: &Graph, text: &str) -> Result<InfPath, PathError> {
        let text = text.trim();
        let body = text.strip_suffix(")*").ok_or_else(|| PathError::Syntax(text.into()))?;
        let open = body.rfind('(').ok_or_else(|| PathError::Syntax(text.into()))?;
        let cycle = Path::parse(graph, &body[open + 1..])?;
        let head = body[..open].trim().trim_end_matches('.');
        let prefix = if head.is_empty() { Path::vertex(cycle.range()) } else { Path::parse(graph, head)? };
        InfPath::periodic(prefix, cycle)
    }

    pub fn render(&self, graph: &Graph) -> String {
        match self {
            InfPath::Periodic { prefix, cycle } => {
                let mut s = String::new();
                if !prefix.is_vertex() {
                    s.push_str(&prefix.render(graph));
                }
                let _ = write!(s, "({})*", cycle.render(graph));
                s
            }
            InfPath::Stream { known } => format!("{}...", known.render(graph)),
        }
    }
}

fn normalize(prefix: Path, cycle: Path) -> InfPath {
    let n = cycle.len();
    let root = (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| cycle.edges[i] == cycle.edges[i - d]))
        .unwrap_or(n);
    let mut cycle = cycle.slice(0, root);
    let mut prefix = prefix;
    while !prefix.is_vertex() && prefix.edges.last() == cycle.edges.last() {
        let k = cycle.len();
        cycle = cycle.slice(k - 1, k).concat(&cycle.slice(0, k - 1)).expect("rotation");
        prefix = prefix.truncate(prefix.len() - 1);
    }
    InfPath::Periodic { prefix, cycle }
}
