//! Tri-state answers for questions that are only decidable up to a depth.

use std::fmt;

/// Outcome of an equality test whose answer may depend on an exploration depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Equality {
    Equal,
    Distinct,
    /// No difference was found up to the given depth, but equality is not proven.
    UnknownAtDepth(usize),
}

impl Equality {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Equality::Equal
        } else {
            Equality::Distinct
        }
    }

    pub fn is_equal(self) -> bool {
        self == Equality::Equal
    }

    pub fn is_distinct(self) -> bool {
        self == Equality::Distinct
    }

    pub fn is_decided(self) -> bool {
        !matches!(self, Equality::UnknownAtDepth(_))
    }

    /// Conjunction: `Distinct` dominates, then `UnknownAtDepth` (smallest depth wins).
    pub fn and(self, other: Equality) -> Equality {
        use Equality::*;
        match (self, other) {
            (Distinct, _) | (_, Distinct) => Distinct,
            (UnknownAtDepth(a), UnknownAtDepth(b)) => UnknownAtDepth(a.min(b)),
            (UnknownAtDepth(a), Equal) | (Equal, UnknownAtDepth(a)) => UnknownAtDepth(a),
            (Equal, Equal) => Equal,
        }
    }

    /// Conjunction over an iterator, stopping at the first `Distinct`.
    pub fn all<I: IntoIterator<Item = Equality>>(iter: I) -> Equality {
        let mut acc = Equality::Equal;
        for e in iter {
            acc = acc.and(e);
            if acc.is_distinct() {
                break;
            }
        }
        acc
    }
}

impl fmt::Display for Equality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Equality::Equal => write!(f, "equal"),
            Equality::Distinct => write!(f, "distinct"),
            Equality::UnknownAtDepth(d) => write!(f, "unknown at depth {d}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::Equality::*;
    use super::*;

    #[test]
    fn conjunction_table() {
        assert_eq!(Equal.and(Equal), Equal);
        assert_eq!(Equal.and(Distinct), Distinct);
        assert_eq!(UnknownAtDepth(5).and(Distinct), Distinct);
        assert_eq!(UnknownAtDepth(5).and(UnknownAtDepth(3)), UnknownAtDepth(3));
        assert_eq!(Equal.and(UnknownAtDepth(7)), UnknownAtDepth(7));
        assert_eq!(Equality::all(vec![Equal, Distinct, UnknownAtDepth(1)]), Distinct);
        assert_eq!(Equality::all(Vec::new()), Equal);
    }
}
