//! Builders for the two example families: two-matrix (Katsura) data over the
//! integers, and automata over a single-vertex graph.

use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::action::{ActionData, ActionError, KatsuraEdge, SelfSimilarTriple};
use crate::graph::{EdgeId, EdgeSpec, Graph, GraphError, VertexId};
use crate::group::{AutomatonGroup, CayleyTable, Group, GroupError, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("invalid matrices: {}", .0.join("; "))]
    InvalidMatrices(Vec<String>),
    #[error("output of state {0} is not a bijection of the alphabet")]
    NonBijectiveOutput(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Action(#[from] ActionError),
}

/// Two `N×N` integer matrices; `A` counts edges `i ← j`, `B` twists the action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KatsuraData {
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
}

impl KatsuraData {
    pub fn check(&self) -> Result<(), BuildError> {
        let n = self.a.len();
        let mut problems = Vec::new();
        if n == 0 {
            problems.push("matrices are empty".to_string());
        }
        if self.b.len() != n || self.a.iter().chain(&self.b).any(|row| row.len() != n) {
            problems.push(format!("A and B must both be {n}x{n}"));
            return Err(BuildError::InvalidMatrices(problems));
        }
        for i in 0..n {
            if self.a[i].iter().all(|&x| x == 0) {
                problems.push(format!("row {} of A is zero", i + 1));
            }
            for j in 0..n {
                if self.a[i][j] < 0 {
                    problems.push(format!("A[{},{}] is negative", i + 1, j + 1));
                }
                if self.a[i][j] == 0 && self.b[i][j] != 0 {
                    problems.push(format!("A[{},{}] = 0 but B[{},{}] != 0", i + 1, j + 1, i + 1, j + 1));
                }
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(BuildError::InvalidMatrices(problems))
        }
    }
}

fn katsura_label(n_vertices: usize, i: usize, j: usize, k: i64) -> String {
    if n_vertices == 1 {
        format!("e{k}")
    } else {
        format!("e{i}_{j}_{k}")
    }
}

/// Vertices `1..=N`; `A_{ij}` edges `e_{i,j,n}` with range `i` and source `j`;
/// `m·e_{i,j,n} = e_{i,j,n̂}` and `φ(m, e_{i,j,n}) = k̂` where
/// `m·B_{ij} + n = k̂·A_{ij} + n̂`, `0 ≤ n̂ < A_{ij}`.
pub fn from_katsura(data: &KatsuraData) -> Result<SelfSimilarTriple, BuildError> {
    data.check()?;
    let n = data.a.len();
    let vertices: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let mut specs = Vec::new();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let base = specs.len() as u32;
            for k in 0..data.a[i][j] {
                specs.push(EdgeSpec {
                    label: katsura_label(n, i + 1, j + 1, k),
                    range: VertexId(i as u32),
                    source: VertexId(j as u32),
                });
                edges.push(KatsuraEdge { i: i + 1, j: j + 1, n: k, a: data.a[i][j], b: data.b[i][j], base });
            }
        }
    }
    let graph = Graph::new(vertices, specs)?;
    Ok(SelfSimilarTriple::new(graph, Group::Integers, ActionData::Katsura(edges))?)
}

pub fn katsura(a: Vec<Vec<i64>>, b: Vec<Vec<i64>>) -> Result<SelfSimilarTriple, BuildError> {
    from_katsura(&KatsuraData { a, b })
}

/// The same integer action described only through the generator `1`.
pub fn katsura_as_generator(t: &SelfSimilarTriple) -> Result<SelfSimilarTriple, BuildError> {
    let one = crate::group::int(1);
    let vertex = t.graph().vertices().map(|v| t.act_vertex(&one, v)).collect();
    let mut edge = Vec::new();
    let mut cocycle = Vec::new();
    for e in t.graph().edges() {
        let (img, phi) = t.act_edge(&one, e);
        edge.push(img);
        match phi.as_int().and_then(|k| k.to_i64()) {
            Some(k) => cocycle.push(k),
            None => return Err(BuildError::Action(ActionError::BackendMismatch)),
        }
    }
    Ok(t.with_action(ActionData::integer_generator(vertex, edge, cocycle)?)?)
}

/// A Mealy automaton over a single-vertex graph whose loops form the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomatonData {
    pub alphabet: Vec<String>,
    pub states: Vec<String>,
    /// `output[s][x]`: index of the letter `s` writes on reading letter `x`.
    pub output: Vec<Vec<usize>>,
    /// `restriction[s][x]`: the word `s|_x`, in the `a.b'` syntax.
    pub restriction: Vec<Vec<String>>,
    /// Treat agreement of actions up to the test depth as equality.
    pub faithful: bool,
}

pub fn from_automaton(data: &AutomatonData) -> Result<SelfSimilarTriple, BuildError> {
    let graph = Graph::new(
        vec!["v".to_string()],
        data.alphabet
            .iter()
            .map(|l| EdgeSpec { label: l.clone(), range: VertexId(0), source: VertexId(0) })
            .collect(),
    )?;
    let k = data.alphabet.len();
    if data.output.len() != data.states.len() {
        return Err(GroupError::InvalidAutomaton("one table row per state required".into()).into());
    }
    for (s, row) in data.output.iter().enumerate() {
        let mut seen = vec![false; k];
        if row.len() != k || row.iter().any(|&x| x >= k || std::mem::replace(&mut seen[x], true)) {
            return Err(BuildError::NonBijectiveOutput(data.states[s].clone()));
        }
    }
    let edge_image = data.output.iter().map(|row| row.iter().map(|&x| EdgeId(x as u32)).collect()).collect();
    automaton_on_graph(graph, data.states.clone(), edge_image, &data.restriction, data.faithful)
}

/// An automaton group on an arbitrary graph. `edge_image[s][e]` is `s·e` and
/// `restriction[s][e]` the word `s|_e`; vertex images follow from ranges.
pub fn automaton_on_graph(
    graph: Graph,
    names: Vec<String>,
    edge_image: Vec<Vec<EdgeId>>,
    restriction: &[Vec<String>],
    faithful: bool,
) -> Result<SelfSimilarTriple, BuildError> {
    let k = graph.edge_count();
    if edge_image.len() != names.len() || restriction.len() != names.len() {
        return Err(GroupError::InvalidAutomaton("one table row per state required".into()).into());
    }
    if edge_image.iter().any(|row| row.len() != k || row.iter().any(|e| e.index() >= k)) {
        return Err(GroupError::InvalidAutomaton("one edge image per edge required".into()).into());
    }
    let vertex_image: Vec<Vec<VertexId>> = edge_image
        .iter()
        .map(|row| graph.vertices().map(|v| graph.range(row[graph.incoming(v)[0].index()])).collect())
        .collect();
    // Parse restrictions against a placeholder with trivial tables, so that
    // state names resolve before the real tables exist.
    let placeholder = AutomatonGroup::new(
        graph.clone(),
        names.clone(),
        vec![graph.edges().collect(); names.len()],
        vec![graph.vertices().collect(); names.len()],
        vec![vec![Word::identity(); k]; names.len()],
    )?;
    let mut words = Vec::new();
    for row in restriction {
        if row.len() != k {
            return Err(GroupError::InvalidAutomaton("one restriction per edge required".into()).into());
        }
        words.push(row.iter().map(|w| placeholder.parse(w)).collect::<Result<Vec<_>, _>>()?);
    }
    let aut = AutomatonGroup::new(graph.clone(), names, edge_image, vertex_image, words)?.with_faithful_to_depth(faithful);
    Ok(SelfSimilarTriple::new(graph, Group::Automaton(Arc::new(aut)), ActionData::Automaton)?)
}

/// Binary odometer: `A = [[2]]`, `B = [[1]]`.
pub fn odometer() -> SelfSimilarTriple {
    katsura(vec![vec![2]], vec![vec![1]]).expect("valid matrices")
}

/// `A = [[3]]`, `B = [[2]]`.
pub fn katsura_3_2() -> SelfSimilarTriple {
    katsura(vec![vec![3]], vec![vec![2]]).expect("valid matrices")
}

/// `A = [[2]]`, `B = [[0]]`: every integer acts trivially with cocycle `0`.
pub fn katsura_2_0() -> SelfSimilarTriple {
    katsura(vec![vec![2]], vec![vec![0]]).expect("valid matrices")
}

/// `Z/2` swapping the two loops of a single vertex, with trivial cocycle.
pub fn z2_edge_swap() -> SelfSimilarTriple {
    let graph = Graph::bouquet(&["e0", "e1"]);
    let group = Group::Finite(Arc::new(CayleyTable::cyclic(2)));
    let action = ActionData::FiniteTables {
        vertex: vec![vec![VertexId(0)], vec![VertexId(0)]],
        edge: vec![vec![EdgeId(0), EdgeId(1)], vec![EdgeId(1), EdgeId(0)]],
        cocycle: vec![vec![0, 0], vec![0, 0]],
    };
    SelfSimilarTriple::new(graph, group, action).expect("consistent tables")
}

/// The binary adding machine: `a` reads 0, writes 1, and becomes the identity;
/// it reads 1, writes 0, and stays `a`.
pub fn adding_machine() -> SelfSimilarTriple {
    from_automaton(&AutomatonData {
        alphabet: vec!["e0".into(), "e1".into()],
        states: vec!["a".into()],
        output: vec![vec![1, 0]],
        restriction: vec![vec!["1".into(), "a".into()]],
        faithful: true,
    })
    .expect("valid automaton")
}

/// Any finite group acting trivially on the odometer graph with trivial cocycle.
pub fn trivial_action(group: Group) -> SelfSimilarTriple {
    let graph = Graph::bouquet(&["e0", "e1"]);
    let action = match &group {
        Group::Finite(t) => {
            let n = t.order();
            let id = t.identity();
            ActionData::FiniteTables {
                vertex: vec![vec![VertexId(0)]; n],
                edge: vec![vec![EdgeId(0), EdgeId(1)]; n],
                cocycle: vec![vec![id, id]; n],
            }
        }
        Group::Integers => ActionData::integer_generator(vec![VertexId(0)], vec![EdgeId(0), EdgeId(1)], vec![0, 0])
            .expect("identity permutation"),
        Group::Automaton(_) => panic!("use from_automaton for automaton groups"),
    };
    SelfSimilarTriple::new(graph, group, action).expect("trivial tables fit")
}

/// Every builtin triple with a short name.
pub fn builtins() -> Vec<(&'static str, SelfSimilarTriple)> {
    vec![
        ("odometer", odometer()),
        ("katsura-3-2", katsura_3_2()),
        ("z2-swap", z2_edge_swap()),
        ("adding-machine", adding_machine()),
        ("katsura-2-0", katsura_2_0()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{int, GroupElement};
    use crate::path::{paths_up_to, Path};

    #[test]
    fn euclidean_division_instances() {
        let t = odometer();
        let e0 = t.graph().edge_by_label("e0").unwrap();
        let e1 = t.graph().edge_by_label("e1").unwrap();
        assert_eq!(t.act_edge(&int(1), e1), (e0, int(1)));
        let t = katsura_3_2();
        let e0 = t.graph().edge_by_label("e0").unwrap();
        let e1 = t.graph().edge_by_label("e1").unwrap();
        assert_eq!(t.act_edge(&int(1), e1), (e0, int(1)));
        for e in t.graph().edges() {
            assert_eq!(t.act_edge(&int(0), e), (e, int(0)));
        }
        // floored division keeps the remainder in range for negative m
        assert_eq!(t.act_edge(&int(-1), e0), (t.graph().edge_by_label("e1").unwrap(), int(-1)));
    }

    #[test]
    fn matrix_conditions_are_enforced() {
        assert!(matches!(katsura(vec![vec![0]], vec![vec![0]]), Err(BuildError::InvalidMatrices(_))));
        assert!(matches!(
            katsura(vec![vec![1, 0], vec![1, 1]], vec![vec![0, 3], vec![0, 0]]),
            Err(BuildError::InvalidMatrices(_))
        ));
        assert!(katsura(vec![vec![1, 1], vec![1, 1]], vec![vec![0, 3], vec![0, 0]]).is_ok());
    }

    #[test]
    fn two_vertex_labels_and_names() {
        let t = katsura(vec![vec![1, 2], vec![1, 1]], vec![vec![0, 1], vec![0, 0]]).unwrap();
        assert_eq!(t.graph().edge_count(), 5);
        let e = t.graph().edge_by_label("e1_2_1").unwrap();
        assert_eq!(t.edge_name(e), "(1,2,1)");
        assert_eq!(t.graph().vertex_label(t.graph().range(e)), "1");
        assert_eq!(t.graph().vertex_label(t.graph().source(e)), "2");
        assert_eq!(katsura_2_0().edge_name(EdgeId(0)), "(1,1,0)");
    }

    #[test]
    fn adding_machine_on_short_words() {
        let t = adding_machine();
        let a = t.group().parse("a").unwrap();
        let (img, r) = t.act_and_cocycle(&a, &Path::parse(t.graph(), "e0.e0").unwrap());
        assert_eq!(img.render(t.graph()), "e1.e0");
        assert!(t.group().is_identity(&r));
    }

    #[test]
    fn swap_automaton_has_trivial_restrictions() {
        let t = from_automaton(&AutomatonData {
            alphabet: vec!["0".into(), "1".into()],
            states: vec!["s".into()],
            output: vec![vec![1, 0]],
            restriction: vec![vec!["1".into(), "1".into()]],
            faithful: false,
        })
        .unwrap();
        let s = t.group().parse("s").unwrap();
        for e in t.graph().edges() {
            let (img, r) = t.act_edge(&s, e);
            assert_ne!(img, e);
            assert_eq!(r, GroupElement::Word(Word::identity()));
        }
        assert!(t.verify_axioms(&t.group().window(3)).is_ok());
    }

    #[test]
    fn identity_state_passes_axioms() {
        let t = from_automaton(&AutomatonData {
            alphabet: vec!["0".into(), "1".into()],
            states: vec!["i".into()],
            output: vec![vec![0, 1]],
            restriction: vec![vec!["i".into(), "i".into()]],
            faithful: false,
        })
        .unwrap();
        assert!(t.verify_axioms(&t.group().window(3)).is_ok());
    }

    #[test]
    fn non_bijective_output_is_rejected() {
        let r = from_automaton(&AutomatonData {
            alphabet: vec!["0".into(), "1".into()],
            states: vec!["a".into()],
            output: vec![vec![1, 1]],
            restriction: vec![vec!["1".into(), "a".into()]],
            faithful: false,
        });
        assert_eq!(r.unwrap_err(), BuildError::NonBijectiveOutput("a".into()));
    }

    #[test]
    fn adding_machine_matches_odometer_to_depth_ten() {
        let odo = odometer();
        let am = adding_machine();
        for m in -8i64..=8 {
            let w = am.group().parse(&vec![if m >= 0 { "a" } else { "a'" }; m.unsigned_abs() as usize].join(".")).unwrap();
            for alpha in paths_up_to(odo.graph(), 10) {
                let (i1, c1) = odo.act_and_cocycle(&int(m), &alpha);
                let beta = Path::from_edges(am.graph(), alpha.edges()).unwrap_or_else(|_| Path::vertex(VertexId(0)));
                let (i2, c2) = am.act_and_cocycle(&w, &beta);
                assert_eq!(i1.edges(), i2.edges());
                match c2 {
                    GroupElement::Word(word) => assert_eq!(c1, int(word.exponent_sum())),
                    _ => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn negative_elements_invert_the_action() {
        for t in [odometer(), katsura_3_2()] {
            for m in -4i64..=4 {
                for e in t.graph().edges() {
                    let (img, _) = t.act_edge(&int(m), e);
                    assert_eq!(t.act_edge(&int(-m), img).0, e);
                    // φ(-m, e) = φ(m, σ_{-m} e)⁻¹
                    let (back, phi) = t.act_edge(&int(-m), e);
                    assert_eq!(phi, int(-as_i64(&t.act_edge(&int(m), back).1)));
                }
            }
        }
    }

    fn as_i64(g: &GroupElement) -> i64 {
        match g {
            GroupElement::Int(x) => x.to_i64().unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn builtins_pass_their_axiom_windows() {
        for (name, t) in builtins() {
            let w = match t.group() {
                Group::Automaton(_) => t.group().window(3),
                _ => t.group().window(4),
            };
            let r = t.verify_axioms(&w);
            assert!(r.is_ok(), "{name}: {:?}", r.violations.first());
        }
    }
}
