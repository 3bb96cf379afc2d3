//! Sequences in `G^∞` modulo eventually trivial ones, the shift maps, and the
//! lag group `Ğ ⋊ Z`.

use num_integer::lcm;
use thiserror::Error;

use crate::group::{Group, GroupElement, GroupError};
use crate::verdict::Equality;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoronaError {
    #[error("depth exceeded: position {requested} of a sequence known to {available}")]
    DepthExceeded { requested: usize, available: usize },
    #[error("cannot parse sequence `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A concrete sequence `g₁ g₂ …` in `G^∞`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Sequence {
    Periodic { prefix: Vec<GroupElement>, cycle: Vec<GroupElement> },
    /// Only the first `len` terms are known.
    Bounded(Vec<GroupElement>),
}

impl Sequence {
    pub fn get(&self, n: usize) -> Result<&GroupElement, CoronaError> {
        assert!(n >= 1, "sequence positions are 1-based");
        match self {
            Sequence::Periodic { prefix, cycle } => {
                if n <= prefix.len() {
                    Ok(&prefix[n - 1])
                } else {
                    Ok(&cycle[(n - prefix.len() - 1) % cycle.len()])
                }
            }
            Sequence::Bounded(v) => {
                v.get(n - 1).ok_or(CoronaError::DepthExceeded { requested: n, available: v.len() })
            }
        }
    }

    pub fn known_len(&self) -> Option<usize> {
        match self {
            Sequence::Periodic { .. } => None,
            Sequence::Bounded(v) => Some(v.len()),
        }
    }

    /// The first `n` terms (fewer for a short bounded sequence).
    pub fn head(&self, n: usize) -> Vec<GroupElement> {
        let n = self.known_len().map_or(n, |k| k.min(n));
        (1..=n).map(|i| self.get(i).expect("within bound").clone()).collect()
    }

    /// `g₁,g₂(c₁,c₂)*` for periodic sequences, `g₁,g₂,...` for bounded ones.
    pub fn render(&self, group: &Group) -> String {
        let list = |v: &[GroupElement]| v.iter().map(|x| group.render(x)).collect::<Vec<_>>().join(",");
        match self {
            Sequence::Periodic { prefix, cycle } => format!("{}({})*", list(prefix), list(cycle)),
            Sequence::Bounded(v) => format!("{},...", list(v)),
        }
    }
}

/// A class in the corona `Ğ`.
///
/// Periodic classes are stored by a purely periodic representative whose
/// cycle is aligned with absolute positions (`c[(n-1) mod p]` at position `n`)
/// and has primitive length, so two such classes coincide iff their
/// representatives agree pointwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoronaElement {
    Periodic(Vec<GroupElement>),
    Bounded(Vec<GroupElement>),
}

fn primitive(cycle: Vec<GroupElement>) -> Vec<GroupElement> {
    let n = cycle.len();
    let d = (1..=n)
        .find(|&d| n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]))
        .unwrap_or(n);
    cycle[..d].to_vec()
}

impl CoronaElement {
    pub fn identity(group: &Group) -> CoronaElement {
        CoronaElement::Periodic(vec![group.identity()])
    }

    pub fn from_sequence(seq: &Sequence) -> CoronaElement {
        match seq {
            Sequence::Periodic { prefix, cycle } => {
                let p = cycle.len();
                let shift = prefix.len() % p;
                let aligned = (0..p).map(|k| cycle[(k + p - shift) % p].clone()).collect();
                CoronaElement::Periodic(primitive(aligned))
            }
            Sequence::Bounded(v) => CoronaElement::Bounded(v.clone()),
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, CoronaElement::Periodic(_))
    }

    /// Term at position `n` of the stored representative.
    pub fn term(&self, n: usize) -> Result<&GroupElement, CoronaError> {
        match self {
            CoronaElement::Periodic(c) => Ok(&c[(n - 1) % c.len()]),
            CoronaElement::Bounded(v) => {
                v.get(n - 1).ok_or(CoronaError::DepthExceeded { requested: n, available: v.len() })
            }
        }
    }

    pub fn representative(&self) -> Sequence {
        match self {
            CoronaElement::Periodic(c) => Sequence::Periodic { prefix: Vec::new(), cycle: c.clone() },
            CoronaElement::Bounded(v) => Sequence::Bounded(v.clone()),
        }
    }

    fn zip_with(&self, other: &CoronaElement, f: impl Fn(&GroupElement, &GroupElement) -> GroupElement) -> CoronaElement {
        match (self, other) {
            (CoronaElement::Periodic(a), CoronaElement::Periodic(b)) => {
                let l = lcm(a.len(), b.len());
                CoronaElement::Periodic(primitive((0..l).map(|k| f(&a[k % a.len()], &b[k % b.len()])).collect()))
            }
            _ => {
                let n = self.known_len().min(other.known_len());
                CoronaElement::Bounded(
                    (1..=n).map(|i| f(self.term(i).expect("known"), other.term(i).expect("known"))).collect(),
                )
            }
        }
    }

    fn known_len(&self) -> usize {
        match self {
            CoronaElement::Periodic(_) => usize::MAX,
            CoronaElement::Bounded(v) => v.len(),
        }
    }

    pub fn mul(&self, group: &Group, other: &CoronaElement) -> CoronaElement {
        self.zip_with(other, |a, b| group.mul(a, b))
    }

    pub fn inv(&self, group: &Group) -> CoronaElement {
        match self {
            CoronaElement::Periodic(c) => CoronaElement::Periodic(c.iter().map(|x| group.inv(x)).collect()),
            CoronaElement::Bounded(v) => CoronaElement::Bounded(v.iter().map(|x| group.inv(x)).collect()),
        }
    }

    /// `λ`: `(λg)ₙ = gₙ₊₁`.
    pub fn left_shift(&self) -> CoronaElement {
        match self {
            CoronaElement::Periodic(c) => {
                let p = c.len();
                CoronaElement::Periodic((0..p).map(|k| c[(k + 1) % p].clone()).collect())
            }
            CoronaElement::Bounded(v) => CoronaElement::Bounded(v.iter().skip(1).cloned().collect()),
        }
    }

    /// `ρ`: prepends the identity, `(ρg)ₙ = gₙ₋₁`.
    pub fn right_shift(&self, group: &Group) -> CoronaElement {
        match self {
            CoronaElement::Periodic(c) => {
                let p = c.len();
                CoronaElement::Periodic((0..p).map(|k| c[(k + p - 1) % p].clone()).collect())
            }
            CoronaElement::Bounded(v) => {
                let mut out = Vec::with_capacity(v.len() + 1);
                out.push(group.identity());
                out.extend(v.iter().cloned());
                CoronaElement::Bounded(out)
            }
        }
    }

    /// `ρ^m`, read as `λ^{-m}` for negative `m`.
    pub fn shift(&self, group: &Group, m: i64) -> CoronaElement {
        let mut out = self.clone();
        if m >= 0 {
            for _ in 0..m {
                out = out.right_shift(group);
            }
        } else {
            for _ in 0..(-m) {
                out = out.left_shift();
            }
        }
        out
    }

    /// Equality of classes. Exact when both sides are periodic (up to the
    /// group backend's own equality); bounded representatives never decide,
    /// since any finite disagreement may still vanish later.
    pub fn equal(&self, group: &Group, other: &CoronaElement, depth: usize) -> Equality {
        match (self, other) {
            (CoronaElement::Periodic(a), CoronaElement::Periodic(b)) => {
                if a == b {
                    return Equality::Equal;
                }
                let l = lcm(a.len(), b.len());
                Equality::all((0..l).map(|k| group.equal_at(&a[k % a.len()], &b[k % b.len()], depth)))
            }
            _ => Equality::UnknownAtDepth(self.known_len().min(other.known_len()).min(depth)),
        }
    }

    pub fn render(&self, group: &Group) -> String {
        match self {
            CoronaElement::Periodic(c) => {
                format!("({})*", c.iter().map(|x| group.render(x)).collect::<Vec<_>>().join(","))
            }
            CoronaElement::Bounded(v) => {
                format!("{},...", v.iter().map(|x| group.render(x)).collect::<Vec<_>>().join(","))
            }
        }
    }
}

/// Parses `g₁,g₂(c₁,c₂)*`; the prefix may be empty.
pub fn parse_sequence(group: &Group, text: &str) -> Result<Sequence, CoronaError> {
    let text = text.trim();
    let body = text.strip_suffix(")*").ok_or_else(|| CoronaError::Syntax(text.into()))?;
    let open = body.rfind('(').ok_or_else(|| CoronaError::Syntax(text.into()))?;
    let list = |s: &str| -> Result<Vec<GroupElement>, CoronaError> {
        let s = s.trim().trim_end_matches(',');
        if s.is_empty() {
            return Ok(Vec::new());
        }
        s.split(',').map(|x| group.parse(x).map_err(CoronaError::from)).collect()
    };
    let prefix = list(&body[..open])?;
    let cycle = list(&body[open + 1..])?;
    if cycle.is_empty() {
        return Err(CoronaError::Syntax(text.into()));
    }
    Ok(Sequence::Periodic { prefix, cycle })
}

/// An element `(ǧ, m)` of the lag group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LagValue {
    pub corona: CoronaElement,
    pub shift: i64,
}

impl LagValue {
    pub fn identity(group: &Group) -> LagValue {
        LagValue { corona: CoronaElement::identity(group), shift: 0 }
    }

    /// `(a, m)(b, n) = (a·ρ^m(b), m + n)`.
    pub fn mul(&self, group: &Group, other: &LagValue) -> LagValue {
        LagValue {
            corona: self.corona.mul(group, &other.corona.shift(group, self.shift)),
            shift: self.shift + other.shift,
        }
    }

    pub fn inv(&self, group: &Group) -> LagValue {
        LagValue { corona: self.corona.inv(group).shift(group, -self.shift), shift: -self.shift }
    }

    pub fn equal(&self, group: &Group, other: &LagValue, depth: usize) -> Equality {
        if self.shift != other.shift {
            return Equality::Distinct;
        }
        self.corona.equal(group, &other.corona, depth)
    }

    pub fn render(&self, group: &Group) -> String {
        format!("corona {} ; shift {}", self.corona.render(group), self.shift)
    }
}
