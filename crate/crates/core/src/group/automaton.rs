//! Groups generated by a finite set of states acting on a graph with restrictions,
//! kept as free reduced words.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::graph::{EdgeId, Graph, VertexId};

use super::GroupError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: u16,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { generator: self.generator, inverse: !self.inverse }
    }
}

/// A freely reduced word; the product `w₁ w₂ … wₖ` acts right to left.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn generator(g: u16) -> Word {
        Word(vec![Letter { generator: g, inverse: false }])
    }

    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inv(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    /// Sum of exponents; an isomorphism onto `Z` for a single generator.
    pub fn exponent_sum(&self) -> i64 {
        self.0.iter().map(|l| if l.inverse { -1 } else { 1 }).sum()
    }
}

/// Generator tables: for every state `s` and edge `e`, the image `s·e`, the
/// restriction `φ(s, e)`, and the induced permutation of vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonGroup {
    graph: Graph,
    names: Vec<String>,
    edge_image: Vec<Vec<EdgeId>>,
    edge_preimage: Vec<Vec<EdgeId>>,
    vertex_image: Vec<Vec<VertexId>>,
    vertex_preimage: Vec<Vec<VertexId>>,
    restriction: Vec<Vec<Word>>,
    faithful_to_depth: bool,
    index: HashMap<String, u16>,
}

/// Upper bound on the number of (word, vertex) states explored by an equality test.
const EXPLORATION_CAP: usize = 200_000;

impl AutomatonGroup {
    pub fn new(
        graph: Graph,
        names: Vec<String>,
        edge_image: Vec<Vec<EdgeId>>,
        vertex_image: Vec<Vec<VertexId>>,
        restriction: Vec<Vec<Word>>,
    ) -> Result<AutomatonGroup, GroupError> {
        let k = names.len();
        if edge_image.len() != k || vertex_image.len() != k || restriction.len() != k {
            return Err(GroupError::InvalidAutomaton("one table row per generator required".into()));
        }
        let ne = graph.edge_count();
        let nv = graph.vertex_count();
        let mut edge_preimage = Vec::with_capacity(k);
        let mut vertex_preimage = Vec::with_capacity(k);
        for s in 0..k {
            let name = &names[s];
            if edge_image[s].len() != ne || restriction[s].len() != ne || vertex_image[s].len() != nv {
                return Err(GroupError::InvalidAutomaton(format!("incomplete table for {name}")));
            }
            let mut pre = vec![None; ne];
            for (e, img) in edge_image[s].iter().enumerate() {
                if img.index() >= ne || pre[img.index()].replace(EdgeId(e as u32)).is_some() {
                    return Err(GroupError::NonBijective(name.clone()));
                }
            }
            let mut vpre = vec![None; nv];
            for (v, img) in vertex_image[s].iter().enumerate() {
                if img.index() >= nv || vpre[img.index()].replace(VertexId(v as u32)).is_some() {
                    return Err(GroupError::NonBijective(name.clone()));
                }
            }
            if restriction[s].iter().flat_map(|w| w.letters()).any(|l| l.generator as usize >= k) {
                return Err(GroupError::InvalidAutomaton(format!("restriction of {name} uses an unknown state")));
            }
            edge_preimage.push(pre.into_iter().map(|x| x.expect("bijection")).collect());
            vertex_preimage.push(vpre.into_iter().map(|x| x.expect("bijection")).collect());
        }
        let index: HashMap<String, u16> = names.iter().enumerate().map(|(i, s)| (s.clone(), i as u16)).collect();
        if index.len() != k {
            return Err(GroupError::InvalidAutomaton("duplicate state names".into()));
        }
        Ok(AutomatonGroup {
            graph,
            names,
            edge_image,
            edge_preimage,
            vertex_image,
            vertex_preimage,
            restriction,
            faithful_to_depth: false,
            index,
        })
    }

    /// Declares that agreement of actions up to the test depth counts as equality.
    pub fn with_faithful_to_depth(mut self, flag: bool) -> Self {
        self.faithful_to_depth = flag;
        self
    }

    pub fn faithful_to_depth(&self) -> bool {
        self.faithful_to_depth
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, g: u16) -> &str {
        &self.names[g as usize]
    }

    pub fn lookup(&self, name: &str) -> Option<u16> {
        self.index.get(name).copied()
    }

    fn letter_edge(&self, l: Letter, e: EdgeId) -> (EdgeId, Word) {
        let s = l.generator as usize;
        if l.inverse {
            // φ(s⁻¹, e) = φ(s, s⁻¹e)⁻¹
            let pre = self.edge_preimage[s][e.index()];
            (pre, self.restriction[s][pre.index()].inv())
        } else {
            (self.edge_image[s][e.index()], self.restriction[s][e.index()].clone())
        }
    }

    fn letter_vertex(&self, l: Letter, v: VertexId) -> VertexId {
        let s = l.generator as usize;
        if l.inverse {
            self.vertex_preimage[s][v.index()]
        } else {
            self.vertex_image[s][v.index()]
        }
    }

    /// `(w·e, φ(w, e))`, via `φ(gh, e) = φ(g, h·e) φ(h, e)` letter by letter.
    pub fn act_edge(&self, w: &Word, e: EdgeId) -> (EdgeId, Word) {
        let mut edge = e;
        let mut cocycle = Word::identity();
        for &l in w.letters().iter().rev() {
            let (img, r) = self.letter_edge(l, edge);
            cocycle = r.mul(&cocycle);
            edge = img;
        }
        (edge, cocycle)
    }

    pub fn act_vertex(&self, w: &Word, v: VertexId) -> VertexId {
        w.letters().iter().rev().fold(v, |x, &l| self.letter_vertex(l, x))
    }

    /// Whether `w` acts trivially on every path of length `≤ depth`.
    /// `None` when the exploration cap was hit before reaching the depth.
    pub fn acts_trivially(&self, w: &Word, depth: usize) -> Option<bool> {
        let mut layer: HashSet<(Word, VertexId)> = self.graph.vertices().map(|v| (w.clone(), v)).collect();
        let mut seen: HashSet<(Word, VertexId)> = layer.clone();
        for level in 0..=depth {
            let mut next = HashSet::new();
            for (u, v) in &layer {
                if self.act_vertex(u, *v) != *v {
                    return Some(false);
                }
                if level == depth {
                    continue;
                }
                for &e in self.graph.incoming(*v) {
                    let (img, r) = self.act_edge(u, e);
                    if img != e {
                        return Some(false);
                    }
                    let state = (r, self.graph.source(e));
                    if !seen.contains(&state) {
                        seen.insert(state.clone());
                        next.insert(state);
                    }
                }
            }
            if seen.len() > EXPLORATION_CAP {
                return None;
            }
            if next.is_empty() {
                // every reachable restriction was already checked at a smaller level
                return Some(true);
            }
            layer = next;
        }
        Some(true)
    }

    pub fn render(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".to_string();
        }
        w.letters()
            .iter()
            .map(|l| format!("{}{}", self.names[l.generator as usize], if l.inverse { "'" } else { "" }))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse(&self, text: &str) -> Result<Word, GroupError> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for token in text.split('.') {
            let token = token.trim();
            let (name, inverse) = match token.strip_suffix('\'') {
                Some(n) => (n, true),
                None => (token, false),
            };
            let generator = self.lookup(name).ok_or_else(|| GroupError::UnknownElement(token.to_string()))?;
            letters.push(Letter { generator, inverse });
        }
        Ok(Word::from_letters(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| format!("s{}{}", l.generator, if l.inverse { "'" } else { "" }))
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Letter {
        Letter { generator: 0, inverse: false }
    }

    #[test]
    fn free_reduction() {
        let w = Word::from_letters([a(), a().inv(), a()]);
        assert_eq!(w, Word::generator(0));
        assert!(w.mul(&w.inv()).is_identity());
        assert_eq!(Word::from_letters([a(), a(), a().inv()]).exponent_sum(), 1);
    }
}
