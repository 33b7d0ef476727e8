//! Exhaustive ranges of finite measures and bounded searches for prescribed
//! ranges.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::ConstructionError;
use crate::series::{fmt_rat, Rat, SeriesSpec, SpecError};

pub const MAX_FINITE_ATOMS: usize = 22;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteMeasure {
    pub atoms: Vec<Rat>,
}

impl FiniteMeasure {
    pub fn new(atoms: Vec<Rat>) -> Result<Self, ConstructionError> {
        if atoms.is_empty() {
            return Err(ConstructionError::Unsupported("empty finite measure"));
        }
        if let Some(i) = atoms.iter().position(|a| !a.is_positive()) {
            return Err(SpecError::NonPositiveTerm { index: i + 1 }.into());
        }
        Ok(FiniteMeasure { atoms })
    }

    pub fn from_integers(atoms: &[i64]) -> Result<Self, ConstructionError> {
        Self::new(atoms.iter().map(|&a| Rat::from_integer(a.into())).collect())
    }

    pub fn spec(&self) -> SeriesSpec {
        SeriesSpec::finite(self.atoms.clone())
    }
}

impl fmt::Display for FiniteMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.atoms.iter().map(fmt_rat).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRange {
    /// Number of subsets attaining each subsum.
    pub counts: BTreeMap<Rat, u64>,
    /// Distinct counts.
    pub range: BTreeSet<u64>,
}

fn lcm_of_denominators(atoms: &[Rat]) -> BigInt {
    atoms.iter().fold(BigInt::one(), |l, a| l.lcm(a.denom()))
}

/// Subsum multiplicities of nonnegative integer atoms.
fn integer_counts(atoms: &[u128]) -> HashMap<u128, u64> {
    let mut counts: HashMap<u128, u64> = HashMap::from([(0, 1)]);
    for &a in atoms {
        let shifted: Vec<(u128, u64)> = counts.iter().map(|(&s, &c)| (s + a, c)).collect();
        for (s, c) in shifted {
            *counts.entry(s).or_insert(0) += c;
        }
    }
    counts
}

fn range_of(counts: impl IntoIterator<Item = u64>) -> BTreeSet<u64> {
    counts.into_iter().collect()
}

/// All `2^j` subsets, grouped by sum.
pub fn finite_range(tau: &FiniteMeasure) -> Result<FiniteRange, ConstructionError> {
    let j = tau.atoms.len();
    if j > MAX_FINITE_ATOMS {
        return Err(ConstructionError::SizeLimit(j, MAX_FINITE_ATOMS));
    }
    let l = lcm_of_denominators(&tau.atoms);
    let scaled: Option<Vec<u128>> = tau.atoms.iter().map(|a| (a * &l).to_integer().to_u128()).collect();
    let total_fits = scaled.as_ref().is_some_and(|v| v.iter().try_fold(0u128, |s, &a| s.checked_add(a)).is_some());
    let counts: BTreeMap<Rat, u64> = if total_fits {
        let lr = Rat::from_integer(l);
        integer_counts(&scaled.expect("checked"))
            .into_iter()
            .map(|(s, c)| (Rat::from_integer(BigInt::from(s)) / &lr, c))
            .collect()
    } else {
        let mut counts: BTreeMap<Rat, u64> = BTreeMap::from([(Rat::zero(), 1)]);
        for a in &tau.atoms {
            let shifted: Vec<(Rat, u64)> = counts.iter().map(|(s, &c)| (s + a, c)).collect();
            for (s, c) in shifted {
                *counts.entry(s).or_insert(0) += c;
            }
        }
        counts
    };
    let range = range_of(counts.values().copied());
    Ok(FiniteRange { counts, range })
}

/// Fractions `p/q` in `(0, 1]` with `q <= d`, scaled by `lcm(1..=d)`,
/// descending.
fn farey_atoms(d: u64) -> (Vec<u64>, u64) {
    let l = (1..=d.max(1)).fold(1u64, |l, q| l.lcm(&q));
    let mut atoms: BTreeSet<u64> = BTreeSet::new();
    for q in 1..=d.max(1) {
        for p in 1..=q {
            atoms.insert(l / q * p);
        }
    }
    (atoms.into_iter().rev().collect(), l)
}

fn gcd_all(v: &[u64]) -> u64 {
    v.iter().fold(0, |g, &a| g.gcd(&a))
}

fn range_matches(atoms: &[u64], target: &BTreeSet<u64>) -> bool {
    let a: Vec<u128> = atoms.iter().map(|&x| u128::from(x)).collect();
    let counts = integer_counts(&a);
    let mut seen = BTreeSet::new();
    for c in counts.values() {
        if !target.contains(c) {
            return false;
        }
        seen.insert(*c);
    }
    seen == *target
}

/// Measures on at most `max_atoms` atoms with denominators at most
/// `denominator_bound` whose range is exactly `target`. For the target
/// `{1, 4}` candidates with a repeated atom are skipped.
pub fn search_finite_ranges(target: &BTreeSet<u64>, max_atoms: usize, denominator_bound: u64) -> Vec<FiniteMeasure> {
    let prune = *target == BTreeSet::from([1, 4]);
    search_finite_ranges_with(target, max_atoms, denominator_bound, prune)
}

/// As [`search_finite_ranges`], with the repeated-atom pruning under the
/// caller's control.
///
/// Candidates are nonincreasing multisets whose largest atom is 1, so no two
/// candidates are rescalings of each other. Matches are reported in lowest
/// integer terms.
pub fn search_finite_ranges_with(
    target: &BTreeSet<u64>,
    max_atoms: usize,
    denominator_bound: u64,
    distinct_atoms: bool,
) -> Vec<FiniteMeasure> {
    if max_atoms == 0 || max_atoms > MAX_FINITE_ATOMS {
        return Vec::new();
    }
    let (atoms, one) = farey_atoms(denominator_bound);
    // Second atom index (or none) splits the work.
    let starts: Vec<Option<usize>> = std::iter::once(None).chain((0..atoms.len()).map(Some)).collect();
    let mut found: Vec<Vec<u64>> = starts
        .into_par_iter()
        .flat_map_iter(|second| {
            let mut out = Vec::new();
            let mut cur = vec![one];
            match second {
                None => {
                    if range_matches(&cur, target) {
                        out.push(cur.clone());
                    }
                }
                Some(i) if max_atoms >= 2 => {
                    if !(distinct_atoms && atoms[i] == one) {
                        cur.push(atoms[i]);
                        extend(&atoms, i, max_atoms, distinct_atoms, target, &mut cur, &mut out);
                    }
                }
                Some(_) => {}
            }
            out
        })
        .collect();
    for v in &mut found {
        let g = gcd_all(v);
        for a in v.iter_mut() {
            *a /= g;
        }
    }
    found.sort();
    found.dedup();
    found
        .into_iter()
        .map(|v| FiniteMeasure { atoms: v.into_iter().map(|a| Rat::from_integer(a.into())).collect() })
        .collect()
}

fn extend(
    atoms: &[u64],
    last: usize,
    max_atoms: usize,
    distinct: bool,
    target: &BTreeSet<u64>,
    cur: &mut Vec<u64>,
    out: &mut Vec<Vec<u64>>,
) {
    if range_matches(cur, target) {
        out.push(cur.clone());
    }
    if cur.len() == max_atoms {
        return;
    }
    let from = if distinct { last + 1 } else { last };
    for i in from..atoms.len() {
        cur.push(atoms[i]);
        extend(atoms, i, max_atoms, distinct, target, cur, out);
        cur.pop();
    }
}
