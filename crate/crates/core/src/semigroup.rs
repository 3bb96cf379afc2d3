//! The inverse semigroup of triples `(α, g, β)` with `d(α) = g·d(β)`, plus zero.

use std::fmt;

use thiserror::Error;

use crate::action::SelfSimilarTriple;
use crate::graph::VertexId;
use crate::group::GroupElement;
use crate::path::{paths_up_to, Path, PathError, PrefixOrder};
use crate::verdict::Equality;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemigroupError {
    #[error("source condition violated: d(alpha) = {alpha_source} but g.d(beta) = {moved}")]
    SourceConditionViolated { alpha_source: String, moved: String },
    #[error("{0} is not an idempotent")]
    NotIdempotent(String),
    #[error(transparent)]
    Path(#[from] PathError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemigroupElement {
    Zero,
    Triple { alpha: Path, g: GroupElement, beta: Path },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdempotentOrder {
    Leq,
    Geq,
    Equal,
    Orthogonal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EStarVerdict {
    Holds { window: usize },
    CounterExample { s: SemigroupElement, e: SemigroupElement },
    Unknown { window: usize, bound: usize },
}

/// Semigroup operations over a fixed triple.
#[derive(Debug, Clone, Copy)]
pub struct InverseSemigroup<'t> {
    triple: &'t SelfSimilarTriple,
}

impl<'t> InverseSemigroup<'t> {
    pub fn new(triple: &'t SelfSimilarTriple) -> Self {
        InverseSemigroup { triple }
    }

    pub fn triple(&self) -> &'t SelfSimilarTriple {
        self.triple
    }

    pub fn make_triple(&self, alpha: Path, g: GroupElement, beta: Path) -> Result<SemigroupElement, SemigroupError> {
        let moved = self.triple.act_vertex(&g, beta.source());
        if alpha.source() != moved {
            let graph = self.triple.graph();
            return Err(SemigroupError::SourceConditionViolated {
                alpha_source: graph.vertex_label(alpha.source()).to_string(),
                moved: graph.vertex_label(moved).to_string(),
            });
        }
        Ok(SemigroupElement::Triple { alpha, g, beta })
    }

    /// `e_α = (α, 1, α)`.
    pub fn idempotent(&self, alpha: Path) -> SemigroupElement {
        SemigroupElement::Triple { g: self.triple.group().identity(), beta: alpha.clone(), alpha }
    }

    /// The vertex idempotent `e_v = (v, 1, v)`.
    pub fn vertex_idempotent(&self, v: VertexId) -> SemigroupElement {
        self.idempotent(Path::vertex(v))
    }

    /// `(α, g, β)(γ, h, δ)`:
    /// `(α·gε, φ(g, ε)h, δ)` if `γ = βε`,
    /// `(α, g·φ(h⁻¹, ε)⁻¹, δ·h⁻¹ε)` if `β = γε`, and `0` otherwise.
    pub fn mul(&self, s: &SemigroupElement, u: &SemigroupElement) -> SemigroupElement {
        let (SemigroupElement::Triple { alpha, g, beta }, SemigroupElement::Triple { alpha: gamma, g: h, beta: delta }) =
            (s, u)
        else {
            return SemigroupElement::Zero;
        };
        let grp = self.triple.group();
        match beta.prefix_compare(gamma) {
            PrefixOrder::Equal | PrefixOrder::AProperPrefix => {
                let eps = gamma.strip_prefix(beta).expect("beta is a prefix of gamma");
                let (g_eps, phi) = self.triple.act_and_cocycle(g, &eps);
                SemigroupElement::Triple {
                    alpha: alpha.concat(&g_eps).expect("d(alpha) = g r(eps)"),
                    g: grp.mul(&phi, h),
                    beta: delta.clone(),
                }
            }
            PrefixOrder::BProperPrefix => {
                let eps = beta.strip_prefix(gamma).expect("gamma is a prefix of beta");
                let h_inv = grp.inv(h);
                let (h_eps, phi) = self.triple.act_and_cocycle(&h_inv, &eps);
                SemigroupElement::Triple {
                    alpha: alpha.clone(),
                    g: grp.mul(g, &grp.inv(&phi)),
                    beta: delta.concat(&h_eps).expect("d(delta) = h^-1 r(eps)"),
                }
            }
            PrefixOrder::Incomparable => SemigroupElement::Zero,
        }
    }

    /// `(α, g, β)* = (β, g⁻¹, α)`.
    pub fn star(&self, s: &SemigroupElement) -> SemigroupElement {
        match s {
            SemigroupElement::Zero => SemigroupElement::Zero,
            SemigroupElement::Triple { alpha, g, beta } => SemigroupElement::Triple {
                alpha: beta.clone(),
                g: self.triple.group().inv(g),
                beta: alpha.clone(),
            },
        }
    }

    pub fn equal(&self, s: &SemigroupElement, u: &SemigroupElement) -> Equality {
        match (s, u) {
            (SemigroupElement::Zero, SemigroupElement::Zero) => Equality::Equal,
            (
                SemigroupElement::Triple { alpha: a1, g: g1, beta: b1 },
                SemigroupElement::Triple { alpha: a2, g: g2, beta: b2 },
            ) => {
                if a1 != a2 || b1 != b2 {
                    Equality::Distinct
                } else {
                    self.triple.group().equal(g1, g2)
                }
            }
            _ => Equality::Distinct,
        }
    }

    pub fn is_idempotent(&self, s: &SemigroupElement) -> Equality {
        match s {
            SemigroupElement::Zero => Equality::Equal,
            SemigroupElement::Triple { alpha, g, beta } => {
                if alpha != beta {
                    Equality::Distinct
                } else {
                    self.triple.group().equal(g, &self.triple.group().identity())
                }
            }
        }
    }

    fn idempotent_path<'a>(&self, e: &'a SemigroupElement) -> Result<Option<&'a Path>, SemigroupError> {
        match e {
            SemigroupElement::Zero => Ok(None),
            SemigroupElement::Triple { alpha, .. } if self.is_idempotent(e).is_equal() => Ok(Some(alpha)),
            other => Err(SemigroupError::NotIdempotent(self.render(other))),
        }
    }

    /// Order between idempotents: `e_α ≤ e_β` iff `β ⪯ α`; distinct
    /// non-comparable idempotents are orthogonal. Zero is orthogonal to every
    /// nonzero idempotent.
    pub fn idempotent_order(&self, e: &SemigroupElement, f: &SemigroupElement) -> Result<IdempotentOrder, SemigroupError> {
        let (a, b) = (self.idempotent_path(e)?, self.idempotent_path(f)?);
        Ok(match (a, b) {
            (None, None) => IdempotentOrder::Equal,
            (None, Some(_)) | (Some(_), None) => IdempotentOrder::Orthogonal,
            (Some(a), Some(b)) => match a.prefix_compare(b) {
                PrefixOrder::Equal => IdempotentOrder::Equal,
                PrefixOrder::AProperPrefix => IdempotentOrder::Geq,
                PrefixOrder::BProperPrefix => IdempotentOrder::Leq,
                PrefixOrder::Incomparable => IdempotentOrder::Orthogonal,
            },
        })
    }

    /// Whether `{e_{α₁}, …}` covers `e_β`.
    ///
    /// Members not below `e_β` are discarded. Every nonzero idempotent below
    /// `e_β` is some `e_δ` with `β ⪯ δ`, and it meets `e_{αᵢ}` iff `δ` and `αᵢ`
    /// are comparable, so it suffices to check that every extension of `β` to
    /// the length of the longest member has a member as a prefix.
    pub fn is_cover(&self, members: &[Path], target: &Path) -> bool {
        let below: Vec<&Path> = members.iter().filter(|a| target.is_prefix_of(a)).collect();
        let Some(longest) = below.iter().map(|a| a.len()).max() else {
            return false;
        };
        target
            .extensions(self.triple.graph(), longest - target.len())
            .iter()
            .all(|d| below.iter().any(|a| a.is_prefix_of(d)))
    }

    /// `{e_e : r(e) = v}`, the cover of `e_v` by its incoming edges.
    pub fn vertex_cover(&self, v: VertexId) -> Vec<Path> {
        Path::vertex(v).extensions(self.triple.graph(), 1)
    }

    /// Searches `s = (α, g, β)` and `e = e_γ` with paths of length `≤ bound`
    /// and `g` in `window` such that `s·e = e` while `s` is not idempotent.
    ///
    /// `s·e_γ = e_γ` forces `γ = βε`, `α = β`, `gε = ε` and `φ(g, ε) = 1`, which
    /// residual freeness rules out one edge at a time; so an empty search over a
    /// whole finite group with `bound ≥ 1` proves the property.
    pub fn check_e_star_unitary(&self, window: &[GroupElement], bound: usize) -> EStarVerdict {
        let graph = self.triple.graph();
        let paths = paths_up_to(graph, bound);
        for g in window {
            for alpha in &paths {
                for beta in &paths {
                    let Ok(s) = self.make_triple(alpha.clone(), g.clone(), beta.clone()) else {
                        continue;
                    };
                    if !self.is_idempotent(&s).is_distinct() {
                        continue;
                    }
                    for gamma in &paths {
                        if !beta.is_prefix_of(gamma) {
                            continue;
                        }
                        let e = self.idempotent(gamma.clone());
                        if self.equal(&self.mul(&s, &e), &e).is_equal() {
                            return EStarVerdict::CounterExample { s, e };
                        }
                    }
                }
            }
        }
        let grp = self.triple.group();
        let covered = grp
            .order()
            .is_some_and(|n| (0..n as u32).all(|i| window.contains(&GroupElement::Fin(i))));
        if covered && bound >= 1 {
            EStarVerdict::Holds { window: window.len() }
        } else {
            EStarVerdict::Unknown { window: window.len(), bound }
        }
    }

    pub fn render(&self, s: &SemigroupElement) -> String {
        match s {
            SemigroupElement::Zero => "0".to_string(),
            SemigroupElement::Triple { alpha, g, beta } => {
                let graph = self.triple.graph();
                format!("({}, {}, {})", alpha.render(graph), self.triple.group().render(g), beta.render(graph))
            }
        }
    }

    /// Parses `0` or `(α, g, β)`.
    pub fn parse(&self, text: &str) -> Result<SemigroupElement, ParseError> {
        let text = text.trim();
        if text == "0" {
            return Ok(SemigroupElement::Zero);
        }
        let inner = text
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| ParseError(format!("expected (alpha, g, beta), got `{text}`")))?;
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let [a, g, b] = parts[..] else {
            return Err(ParseError(format!("expected three components in `{text}`")));
        };
        let graph = self.triple.graph();
        let alpha = Path::parse(graph, a).map_err(|e| ParseError(e.to_string()))?;
        let beta = Path::parse(graph, b).map_err(|e| ParseError(e.to_string()))?;
        let g = self.triple.group().parse(g).map_err(|e| ParseError(e.to_string()))?;
        self.make_triple(alpha, g, beta).map_err(|e| ParseError(e.to_string()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{0}")]
pub struct ParseError(pub String);

impl fmt::Display for IdempotentOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdempotentOrder::Leq => "leq",
            IdempotentOrder::Geq => "geq",
            IdempotentOrder::Equal => "equal",
            IdempotentOrder::Orthogonal => "orthogonal",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build;
    use crate::graph::{EdgeSpec, Graph};
    use crate::group::int;

    fn odo() -> SelfSimilarTriple {
        build::odometer()
    }

    fn p(t: &SelfSimilarTriple, s: &str) -> Path {
        Path::parse(t.graph(), s).unwrap()
    }

    #[test]
    fn make_triple_checks_the_source_condition() {
        let t = odo();
        let s = InverseSemigroup::new(&t);
        assert!(s.make_triple(p(&t, "e0"), int(1), p(&t, "e1")).is_ok());
        assert!(s.make_triple(p(&t, "@1"), int(0), p(&t, "@1")).is_ok());

        // two vertices fixed by the trivial integer action; d(alpha) = b, d(beta) = a
        let graph = Graph::new(
            vec!["a".into(), "b".into()],
            vec![
                EdgeSpec { label: "f".into(), range: VertexId(1), source: VertexId(0) },
                EdgeSpec { label: "h".into(), range: VertexId(0), source: VertexId(1) },
            ],
        )
        .unwrap();
        let action = crate::action::ActionData::integer_generator(
            vec![VertexId(0), VertexId(1)],
            vec![crate::graph::EdgeId(0), crate::graph::EdgeId(1)],
            vec![0, 0],
        )
        .unwrap();
        let t2 = SelfSimilarTriple::new(graph, crate::group::Group::Integers, action).unwrap();
        let s2 = InverseSemigroup::new(&t2);
        let err = s2.make_triple(p(&t2, "h"), int(0), p(&t2, "f"));
        assert!(matches!(err, Err(SemigroupError::SourceConditionViolated { .. })));
    }

    #[test]
    fn product_examples() {
        let t = odo();
        let s = InverseSemigroup::new(&t);
        let x = s.parse("(e0, 1, e1)").unwrap();
        let y = s.parse("(e1.e1, 0, e0)").unwrap();
        assert_eq!(s.render(&s.mul(&x, &y)), "(e0.e0, 1, e0)");
        assert_eq!(s.mul(&s.idempotent(p(&t, "e0")), &s.idempotent(p(&t, "e1"))), SemigroupElement::Zero);
        let a = s.parse("(e1.e0, 3, e1)").unwrap();
        let b = s.parse("(e1, -2, e0.e0)").unwrap();
        assert_eq!(s.render(&s.mul(&a, &b)), "(e1.e0, 1, e0.e0)");
        assert_eq!(s.render(&s.star(&x)), "(e1, -1, e0)");
        assert_eq!(s.star(&SemigroupElement::Zero), SemigroupElement::Zero);
    }

    #[test]
    fn idempotent_order_examples() {
        let t = odo();
        let s = InverseSemigroup::new(&t);
        let e = |x: &str| s.idempotent(p(&t, x));
        assert_eq!(s.idempotent_order(&e("e0.e1"), &e("e0")).unwrap(), IdempotentOrder::Leq);
        assert_eq!(s.idempotent_order(&e("e0"), &e("e0.e1")).unwrap(), IdempotentOrder::Geq);
        assert_eq!(s.idempotent_order(&e("e0"), &e("e1")).unwrap(), IdempotentOrder::Orthogonal);
        assert_eq!(s.idempotent_order(&e("e1"), &e("e1")).unwrap(), IdempotentOrder::Equal);
        assert_eq!(
            s.idempotent_order(&SemigroupElement::Zero, &e("e1")).unwrap(),
            IdempotentOrder::Orthogonal
        );
        let not = s.parse("(e0, 1, e1)").unwrap();
        assert!(matches!(s.idempotent_order(&not, &e("e1")), Err(SemigroupError::NotIdempotent(_))));
    }

    #[test]
    fn cover_examples() {
        let t = odo();
        let s = InverseSemigroup::new(&t);
        let v = p(&t, "@1");
        assert!(s.is_cover(&[p(&t, "e0"), p(&t, "e1")], &v));
        assert!(!s.is_cover(&[p(&t, "e0")], &v));
        assert!(s.is_cover(&[p(&t, "e1")], &p(&t, "e1")));
        assert!(s.is_cover(&[p(&t, "e0"), p(&t, "e1.e0"), p(&t, "e1.e1")], &v));
        assert!(!s.is_cover(&[p(&t, "e0"), p(&t, "e1.e0")], &v));
        assert!(s.is_cover(&s.vertex_cover(VertexId(0)), &v));
    }

    #[test]
    fn e_star_unitarity_matches_residual_freeness() {
        let bad = build::katsura_2_0();
        let s = InverseSemigroup::new(&bad);
        let verdict = s.check_e_star_unitary(&bad.group().window(4), 2);
        let EStarVerdict::CounterExample { s: x, e } = verdict else { panic!("expected a counterexample") };
        assert_eq!(s.render(&x), "(@1, 1, @1)");
        assert_eq!(s.render(&e), "(e0, 0, e0)");

        let odo = odo();
        let s = InverseSemigroup::new(&odo);
        assert_eq!(s.check_e_star_unitary(&odo.group().window(3), 4), EStarVerdict::Unknown { window: 7, bound: 4 });

        let z2 = build::z2_edge_swap();
        let s = InverseSemigroup::new(&z2);
        assert_eq!(s.check_e_star_unitary(&z2.group().window(0), 2), EStarVerdict::Holds { window: 2 });
        let triv = build::trivial_action(crate::group::Group::Finite(std::sync::Arc::new(
            crate::group::CayleyTable::cyclic(1),
        )));
        let s = InverseSemigroup::new(&triv);
        assert_eq!(s.check_e_star_unitary(&triv.group().window(0), 2), EStarVerdict::Holds { window: 1 });
    }
}
