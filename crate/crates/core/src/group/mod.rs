//! Group backends behind one element type.
//!
//! Integer and Cayley-table groups have exact equality. Automaton groups keep
//! free reduced words and compare them through their action on paths, which
//! only yields `Equal` when the backend is declared faithful to the test depth.

mod automaton;
mod cayley;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use thiserror::Error;

use crate::verdict::Equality;

pub use automaton::{AutomatonGroup, Letter, Word};
pub use cayley::CayleyTable;

pub const DEFAULT_DEPTH_HINT: usize = 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),
    #[error("output of state {0} is not a bijection")]
    NonBijective(String),
    #[error("unknown group element `{0}`")]
    UnknownElement(String),
    #[error("operands belong to different group backends")]
    BackendMismatch,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Int(BigInt),
    Fin(u32),
    Word(Word),
}

/// An element of the integer group.
pub fn int(x: i64) -> GroupElement {
    GroupElement::Int(BigInt::from(x))
}

impl From<i64> for GroupElement {
    fn from(x: i64) -> Self {
        int(x)
    }
}

impl GroupElement {
    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            GroupElement::Int(x) => Some(x),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub enum Group {
    Integers,
    Finite(Arc<CayleyTable>),
    Automaton(Arc<AutomatonGroup>),
}

#[derive(Debug, Clone, Copy)]
pub enum GroupOp<'a> {
    Mul(&'a GroupElement, &'a GroupElement),
    Inv(&'a GroupElement),
    Id,
    Eq(&'a GroupElement, &'a GroupElement),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupValue {
    Element(GroupElement),
    Equality(Equality),
}

impl Group {
    pub fn identity(&self) -> GroupElement {
        match self {
            Group::Integers => GroupElement::Int(BigInt::ZERO),
            Group::Finite(t) => GroupElement::Fin(t.identity()),
            Group::Automaton(_) => GroupElement::Word(Word::identity()),
        }
    }

    pub fn contains(&self, a: &GroupElement) -> bool {
        match (self, a) {
            (Group::Integers, GroupElement::Int(_)) => true,
            (Group::Finite(t), GroupElement::Fin(i)) => (*i as usize) < t.order(),
            (Group::Automaton(aut), GroupElement::Word(w)) => {
                w.letters().iter().all(|l| (l.generator as usize) < aut.generator_count())
            }
            _ => false,
        }
    }

    /// Product `ab`. Panics on elements of another backend; use [`Group::eval`]
    /// for a checked version.
    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        match (self, a, b) {
            (Group::Integers, GroupElement::Int(x), GroupElement::Int(y)) => GroupElement::Int(x + y),
            (Group::Finite(t), GroupElement::Fin(x), GroupElement::Fin(y)) => GroupElement::Fin(t.mul(*x, *y)),
            (Group::Automaton(_), GroupElement::Word(x), GroupElement::Word(y)) => GroupElement::Word(x.mul(y)),
            _ => panic!("group element from a different backend"),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        match (self, a) {
            (Group::Integers, GroupElement::Int(x)) => GroupElement::Int(-x),
            (Group::Finite(t), GroupElement::Fin(x)) => GroupElement::Fin(t.inv(*x)),
            (Group::Automaton(_), GroupElement::Word(w)) => GroupElement::Word(w.inv()),
            _ => panic!("group element from a different backend"),
        }
    }

    /// Structural identity test; exact for every backend because words are reduced.
    pub fn is_identity(&self, a: &GroupElement) -> bool {
        *a == self.identity()
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Equality {
        self.equal_at(a, b, DEFAULT_DEPTH_HINT)
    }

    /// Equality, exact for integers and finite groups; for automaton groups the
    /// actions of `a` and `b` are compared on all paths up to `depth`.
    pub fn equal_at(&self, a: &GroupElement, b: &GroupElement, depth: usize) -> Equality {
        match (self, a, b) {
            (Group::Automaton(aut), GroupElement::Word(x), GroupElement::Word(y)) => {
                if x == y {
                    return Equality::Equal;
                }
                match aut.acts_trivially(&x.inv().mul(y), depth) {
                    Some(false) => Equality::Distinct,
                    Some(true) if aut.faithful_to_depth() => Equality::Equal,
                    _ => Equality::UnknownAtDepth(depth),
                }
            }
            _ => Equality::from_bool(a == b),
        }
    }

    pub fn eval(&self, op: GroupOp<'_>, depth_hint: Option<usize>) -> Result<GroupValue, GroupError> {
        let check = |x: &GroupElement| if self.contains(x) { Ok(()) } else { Err(GroupError::BackendMismatch) };
        Ok(match op {
            GroupOp::Id => GroupValue::Element(self.identity()),
            GroupOp::Inv(a) => {
                check(a)?;
                GroupValue::Element(self.inv(a))
            }
            GroupOp::Mul(a, b) => {
                check(a)?;
                check(b)?;
                GroupValue::Element(self.mul(a, b))
            }
            GroupOp::Eq(a, b) => {
                check(a)?;
                check(b)?;
                GroupValue::Equality(self.equal_at(a, b, depth_hint.unwrap_or(DEFAULT_DEPTH_HINT)))
            }
        })
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Group::Finite(_))
    }

    pub fn order(&self) -> Option<usize> {
        match self {
            Group::Finite(t) => Some(t.order()),
            _ => None,
        }
    }

    /// A finite test window: `0, 1, -1, …, r, -r` for the integers, every element of a
    /// finite group, and all reduced words of length `≤ r` for automaton groups.
    /// Always contains the identity and is closed under inverses.
    pub fn window(&self, radius: usize) -> Vec<GroupElement> {
        match self {
            Group::Integers => std::iter::once(0)
                .chain((1..=radius as i64).flat_map(|m| [m, -m]))
                .map(int)
                .collect(),
            Group::Finite(t) => (0..t.order() as u32).map(GroupElement::Fin).collect(),
            Group::Automaton(aut) => {
                let letters: Vec<Letter> = (0..aut.generator_count() as u16)
                    .flat_map(|g| [Letter { generator: g, inverse: false }, Letter { generator: g, inverse: true }])
                    .collect();
                let mut out = vec![Word::identity()];
                let mut layer = vec![Word::identity()];
                for _ in 0..radius {
                    let mut next = Vec::new();
                    for w in &layer {
                        for &l in &letters {
                            if w.letters().last() != Some(&l.inv()) {
                                next.push(w.mul(&Word::from_letters([l])));
                            }
                        }
                    }
                    out.extend(next.iter().cloned());
                    layer = next;
                }
                out.into_iter().map(GroupElement::Word).collect()
            }
        }
    }

    pub fn render(&self, a: &GroupElement) -> String {
        match (self, a) {
            (Group::Finite(t), GroupElement::Fin(i)) => t.name(*i).to_string(),
            (Group::Automaton(aut), GroupElement::Word(w)) => aut.render(w),
            (_, other) => other.to_string(),
        }
    }

    pub fn parse(&self, text: &str) -> Result<GroupElement, GroupError> {
        let text = text.trim();
        match self {
            Group::Integers => text
                .parse::<BigInt>()
                .map(GroupElement::Int)
                .map_err(|_| GroupError::UnknownElement(text.to_string())),
            Group::Finite(t) => t
                .lookup(text)
                .map(GroupElement::Fin)
                .ok_or_else(|| GroupError::UnknownElement(text.to_string())),
            Group::Automaton(aut) => aut.parse(text).map(GroupElement::Word),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Int(x) => write!(f, "{x}"),
            GroupElement::Fin(i) => write!(f, "#{i}"),
            GroupElement::Word(w) => write!(f, "{w}"),
        }
    }
}
