//! Finite directed graphs with range and source maps.
//!
//! Edges point from their source to their range; paths compose right to left,
//! so a path `e1 e2` requires `source(e1) == range(e2)`.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSpec {
    pub label: String,
    pub range: VertexId,
    pub source: VertexId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphViolation {
    /// A vertex receives no edge (`range⁻¹(v)` is empty).
    Source { vertex: String },
    DanglingRange { edge: String, vertex: VertexId },
    DanglingSource { edge: String, vertex: VertexId },
    DuplicateVertexLabel(String),
    DuplicateEdgeLabel(String),
    Empty,
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::Source { vertex } => write!(f, "no sources: vertex {vertex} has no incoming edge"),
            GraphViolation::DanglingRange { edge, vertex } => {
                write!(f, "dangling endpoint: range of edge {edge} is unknown vertex #{}", vertex.0)
            }
            GraphViolation::DanglingSource { edge, vertex } => {
                write!(f, "dangling endpoint: source of edge {edge} is unknown vertex #{}", vertex.0)
            }
            GraphViolation::DuplicateVertexLabel(l) => write!(f, "duplicate vertex label {l}"),
            GraphViolation::DuplicateEdgeLabel(l) => write!(f, "duplicate edge label {l}"),
            GraphViolation::Empty => write!(f, "graph has no vertices"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GraphReport {
    pub violations: Vec<GraphViolation>,
}

impl GraphReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<GraphViolation>),
    #[error("unknown vertex label `{0}`")]
    UnknownVertex(String),
    #[error("unknown edge label `{0}`")]
    UnknownEdge(String),
}

/// A finite directed graph. Ids are dense indices; labels are used for I/O.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_labels: Vec<String>,
    edge_labels: Vec<String>,
    range: Vec<VertexId>,
    source: Vec<VertexId>,
    incoming: Vec<Vec<EdgeId>>,
    vertex_index: HashMap<String, VertexId>,
    edge_index: HashMap<String, EdgeId>,
}

impl Graph {
    /// Builds a graph without checking the standing conditions; see [`Graph::validate`].
    pub fn from_parts(vertex_labels: Vec<String>, edges: Vec<EdgeSpec>) -> Graph {
        let nv = vertex_labels.len();
        let mut incoming = vec![Vec::new(); nv];
        let mut edge_labels = Vec::with_capacity(edges.len());
        let mut range = Vec::with_capacity(edges.len());
        let mut source = Vec::with_capacity(edges.len());
        for (i, e) in edges.into_iter().enumerate() {
            if e.range.index() < nv {
                incoming[e.range.index()].push(EdgeId(i as u32));
            }
            edge_labels.push(e.label);
            range.push(e.range);
            source.push(e.source);
        }
        let vertex_index = vertex_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), VertexId(i as u32)))
            .collect();
        let edge_index = edge_labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), EdgeId(i as u32)))
            .collect();
        Graph { vertex_labels, edge_labels, range, source, incoming, vertex_index, edge_index }
    }

    /// Builds a graph and rejects it unless [`Graph::validate`] reports no violation.
    pub fn new(vertex_labels: Vec<String>, edges: Vec<EdgeSpec>) -> Result<Graph, GraphError> {
        let g = Graph::from_parts(vertex_labels, edges);
        let report = g.validate();
        if report.is_ok() {
            Ok(g)
        } else {
            Err(GraphError::Invalid(report.violations))
        }
    }

    /// Single vertex `v` with one loop per label.
    pub fn bouquet<S: AsRef<str>>(loops: &[S]) -> Graph {
        let edges = loops
            .iter()
            .map(|l| EdgeSpec { label: l.as_ref().to_string(), range: VertexId(0), source: VertexId(0) })
            .collect();
        Graph::from_parts(vec!["v".to_string()], edges)
    }

    pub fn validate(&self) -> GraphReport {
        let mut violations = Vec::new();
        let nv = self.vertex_labels.len();
        if nv == 0 {
            violations.push(GraphViolation::Empty);
        }
        if self.vertex_index.len() != nv {
            let mut seen = std::collections::HashSet::new();
            for l in &self.vertex_labels {
                if !seen.insert(l) {
                    violations.push(GraphViolation::DuplicateVertexLabel(l.clone()));
                }
            }
        }
        if self.edge_index.len() != self.edge_labels.len() {
            let mut seen = std::collections::HashSet::new();
            for l in &self.edge_labels {
                if !seen.insert(l) {
                    violations.push(GraphViolation::DuplicateEdgeLabel(l.clone()));
                }
            }
        }
        for (i, label) in self.edge_labels.iter().enumerate() {
            if self.range[i].index() >= nv {
                violations.push(GraphViolation::DanglingRange { edge: label.clone(), vertex: self.range[i] });
            }
            if self.source[i].index() >= nv {
                violations.push(GraphViolation::DanglingSource { edge: label.clone(), vertex: self.source[i] });
            }
        }
        for (v, inc) in self.incoming.iter().enumerate() {
            if inc.is_empty() {
                violations.push(GraphViolation::Source { vertex: self.vertex_labels[v].clone() });
            }
        }
        GraphReport { violations }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_labels.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertex_labels.len() as u32).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_labels.len() as u32).map(EdgeId)
    }

    pub fn range(&self, e: EdgeId) -> VertexId {
        self.range[e.index()]
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.source[e.index()]
    }

    /// Edges whose range is `v`.
    pub fn incoming(&self, v: VertexId) -> &[EdgeId] {
        &self.incoming[v.index()]
    }

    pub fn vertex_label(&self, v: VertexId) -> &str {
        &self.vertex_labels[v.index()]
    }

    pub fn edge_label(&self, e: EdgeId) -> &str {
        &self.edge_labels[e.index()]
    }

    pub fn vertex_by_label(&self, label: &str) -> Result<VertexId, GraphError> {
        self.vertex_index.get(label).copied().ok_or_else(|| GraphError::UnknownVertex(label.to_string()))
    }

    pub fn edge_by_label(&self, label: &str) -> Result<EdgeId, GraphError> {
        self.edge_index.get(label).copied().ok_or_else(|| GraphError::UnknownEdge(label.to_string()))
    }
}
