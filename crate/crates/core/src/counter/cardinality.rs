use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

/// Number of subsets achieving a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cardinality {
    Fin(u64),
    Omega,
    Continuum,
    /// Lower bound from a budget-limited search.
    AtLeast(u64),
}

use Cardinality::*;

impl Cardinality {
    pub fn is_exact(&self) -> bool {
        !matches!(self, AtLeast(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Omega | Continuum)
    }

    /// Key for listing values deterministically: finite values by size,
    /// then lower bounds, then the infinite cardinals.
    pub fn sort_key(&self) -> (u8, u64) {
        match *self {
            Fin(k) => (0, k),
            AtLeast(k) => (1, k),
            Omega => (2, 0),
            Continuum => (3, 0),
        }
    }

    /// Rendering with the glyphs for the infinite cardinals.
    pub fn pretty(&self) -> String {
        match self {
            Omega => "ω".to_string(),
            Continuum => "𝔠".to_string(),
            other => other.to_string(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "omega" | "ω" => Some(Omega),
            "continuum" | "𝔠" => Some(Continuum),
            t => match t.strip_prefix(">=") {
                Some(k) => k.parse().ok().map(AtLeast),
                None => t.parse().ok().map(Fin),
            },
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fin(k) => write!(f, "{k}"),
            Omega => write!(f, "omega"),
            Continuum => write!(f, "continuum"),
            AtLeast(k) => write!(f, ">={k}"),
        }
    }
}

impl PartialOrd for Cardinality {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let rank = |c: &Cardinality| match c {
            Fin(_) => 0,
            Omega => 1,
            Continuum => 2,
            AtLeast(_) => 3,
        };
        match (self, other) {
            (Fin(a), Fin(b)) => Some(a.cmp(b)),
            (AtLeast(a), AtLeast(b)) => (a == b).then_some(Ordering::Equal),
            (AtLeast(a), Fin(b)) => (b <= a).then_some(Ordering::Greater),
            (Fin(a), AtLeast(b)) => (a <= b).then_some(Ordering::Less),
            (AtLeast(_), _) | (_, AtLeast(_)) => None,
            (a, b) => Some(rank(a).cmp(&rank(b))),
        }
    }
}

impl Add for Cardinality {
    type Output = Cardinality;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Continuum, _) | (_, Continuum) => Continuum,
            (AtLeast(a), Fin(b) | AtLeast(b)) | (Fin(b), AtLeast(a)) => AtLeast(a.saturating_add(b)),
            (AtLeast(a), Omega) | (Omega, AtLeast(a)) => AtLeast(a),
            (Omega, _) | (_, Omega) => Omega,
            (Fin(a), Fin(b)) => a.checked_add(b).map_or(AtLeast(u64::MAX), Fin),
        }
    }
}

impl Mul for Cardinality {
    type Output = Cardinality;

    fn mul(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Fin(0), _) | (_, Fin(0)) => Fin(0),
            (AtLeast(a), Fin(b) | AtLeast(b)) | (Fin(b), AtLeast(a)) => AtLeast(a.saturating_mul(b)),
            (AtLeast(a), _) | (_, AtLeast(a)) => AtLeast(a),
            (Continuum, _) | (_, Continuum) => Continuum,
            (Omega, _) | (_, Omega) => Omega,
            (Fin(a), Fin(b)) => a.checked_mul(b).map_or(AtLeast(u64::MAX), Fin),
        }
    }
}

impl std::iter::Sum for Cardinality {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Fin(0), Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_order() {
        assert!(Fin(0) < Fin(1));
        assert!(Fin(1_000_000) < Omega);
        assert!(Omega < Continuum);
        assert!(AtLeast(3) >= Fin(3));
        assert!(AtLeast(3) >= Fin(1));
        assert_eq!(AtLeast(3).partial_cmp(&Fin(4)), None);
        assert_eq!(AtLeast(3).partial_cmp(&Omega), None);
    }

    #[test]
    fn arithmetic() {
        assert_eq!(Fin(2) + Fin(3), Fin(5));
        assert_eq!(Fin(2) * Fin(3), Fin(6));
        assert_eq!(Fin(5) * Omega, Omega);
        assert_eq!(Fin(5) * Continuum, Continuum);
        assert_eq!(Fin(0) * Continuum, Fin(0));
        assert_eq!(Omega + Fin(7), Omega);
        assert_eq!(Omega + Continuum, Continuum);
    }

    #[test]
    fn render_roundtrip() {
        for c in [Fin(0), Fin(12), Omega, Continuum, AtLeast(4)] {
            assert_eq!(Cardinality::parse(&c.to_string()), Some(c));
            assert_eq!(Cardinality::parse(&c.pretty()), Some(c));
        }
    }
}
