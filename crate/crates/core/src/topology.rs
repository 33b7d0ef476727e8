//! Convergence properties, topological type of the achievement set, and
//! finite-depth interval covers.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::series::{Mass, Periodic, Rat, SeriesSpec, SpecError, TailSpec, Undecidable};

/// Default refinement cap for enclosure comparisons.
pub const REFINE_CAP: usize = 64;
/// Default maximum depth for covers and component counts.
pub const MAX_DEPTH: usize = 24;
/// Blocks tails are inspected over this many blocks.
const BLOCKS_SAMPLE: u64 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    Undecided,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlowFrom {
    /// `x_n <= r_n` for every `n >= N`.
    From(usize),
    Never,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProfileWitnesses {
    /// First index with `x_n <= r_n`.
    pub quick_fails_at: Option<usize>,
    pub a_fails_at: Option<usize>,
    pub b_fails_at: Option<usize>,
    /// Last index with `x_n > r_n` before the slow region.
    pub last_strict: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceProfile {
    pub quick: Decision,
    pub slow_from: SlowFrom,
    pub property_a: Decision,
    pub property_b: Decision,
    pub witnesses: ProfileWitnesses,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TopologyClass {
    FiniteSet,
    CantorSet,
    /// Components of the range, in increasing order.
    IntervalUnion(Vec<(Rat, Rat)>),
    CantorvalCandidate,
}

impl TopologyClass {
    pub fn name(&self) -> &'static str {
        match self {
            TopologyClass::FiniteSet => "finite-set",
            TopologyClass::CantorSet => "cantor-set",
            TopologyClass::IntervalUnion(_) => "interval-union",
            TopologyClass::CantorvalCandidate => "cantorval-candidate",
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TopologyError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("terms are not eventually nonincreasing")]
    NotEventuallySorted,
    #[error("depth {0} exceeds the configured maximum")]
    DepthTooLarge(usize),
    #[error(transparent)]
    Undecidable(#[from] Undecidable),
}

/// `x_n` against `r_n` for each prefix index and, for self-similar tails,
/// each tail offset (the comparison is the same in every block).
#[derive(Clone, Debug)]
pub(crate) struct Dominance {
    pub prefix: Vec<Ordering>,
    pub tail: Vec<Ordering>,
}

impl Dominance {
    pub fn of(spec: &SeriesSpec) -> Result<Self, TopologyError> {
        let p = spec.prefix.len();
        let mut prefix = Vec::with_capacity(p);
        for n in 1..=p {
            let mut r = spec.remainder(n);
            let x = spec.term(n);
            prefix.push(r.cmp_value(&x, REFINE_CAP)?);
        }
        let tail = match &spec.tail {
            TailSpec::Zero => Vec::new(),
            TailSpec::Blocks(b) => {
                // Position pattern of the last sampled block.
                let start: u64 = (1..BLOCKS_SAMPLE).map(|n| b.block_len(n)).sum();
                let len = b.block_len(BLOCKS_SAMPLE);
                let mut out = Vec::with_capacity(len as usize);
                for i in 0..len {
                    let n = p + (start + i) as usize + 1;
                    out.push(spec.remainder(n).cmp_value(&spec.term(n), REFINE_CAP)?);
                }
                out
            }
            _ => {
                let per = spec.periodic().expect("self-similar tail");
                (0..per.period()).map(|s| per.coeffs[s].cmp(&per.mass[s + 1])).collect()
            }
        };
        Ok(Dominance { prefix, tail })
    }

    pub fn tail_strict(&self) -> bool {
        self.tail.iter().all(|o| *o == Ordering::Greater)
    }

    pub fn tail_slow(&self) -> bool {
        self.tail.iter().all(|o| *o != Ordering::Greater)
    }

    /// First index `N` with `x_n <= r_n` for all `n >= N`, when the tail is slow.
    pub fn slow_from(&self) -> Option<usize> {
        if !self.tail_slow() || self.tail.is_empty() {
            return None;
        }
        let last = self.prefix.iter().rposition(|o| *o == Ordering::Greater);
        Some(last.map_or(1, |i| i + 2))
    }
}

/// `sum_{m >= i} r_m` for a self-similar or finite series.
fn remainder_mass_sum(spec: &SeriesSpec, per: Option<&Periodic>, i: usize) -> Rat {
    let p = spec.prefix.len();
    let tail_sum = |tau0: usize| -> Rat {
        let Some(per) = per else { return Rat::zero() };
        let k = per.period();
        let (j, s0) = (tau0 / k, tau0 % k);
        let all: Rat = per.mass[..k].iter().cloned().sum();
        let head: Rat = per.mass[s0..k].iter().cloned().sum();
        let g = head + &per.q / (Rat::one() - &per.q) * all;
        g * crate::series::pow(&per.q, j as u64)
    };
    if i >= p {
        return tail_sum(i - p);
    }
    let mut acc = tail_sum(0);
    for m in i..p {
        acc += spec.remainder(m).exact().expect("exact remainder").clone();
    }
    acc
}

pub fn convergence_profile(spec: &SeriesSpec) -> Result<ConvergenceProfile, TopologyError> {
    spec.validate()?;
    let dom = Dominance::of(spec)?;
    let p = spec.prefix.len();
    let quick_fails_at = dom
        .prefix
        .iter()
        .position(|o| *o != Ordering::Greater)
        .map(|i| i + 1)
        .or_else(|| dom.tail.iter().position(|o| *o != Ordering::Greater).map(|s| p + s + 1));
    let mut w = ProfileWitnesses { quick_fails_at, ..ProfileWitnesses::default() };
    let slow = dom.slow_from();
    if let Some(n) = slow {
        w.last_strict = (n > 1).then_some(n - 1);
    }

    if let TailSpec::Blocks(_) = spec.tail {
        let quick = if w.quick_fails_at.is_some() { Decision::No } else { Decision::Undecided };
        let derived = if quick == Decision::No { Decision::No } else { Decision::Undecided };
        if quick == Decision::No {
            w.a_fails_at = w.quick_fails_at;
            w.b_fails_at = w.quick_fails_at;
        }
        return Ok(ConvergenceProfile {
            quick,
            slow_from: SlowFrom::Undecided,
            property_a: derived,
            property_b: derived,
            witnesses: w,
        });
    }

    let per = spec.periodic();
    // Prefix indices are checked directly, tail offsets once per period.
    for i in 1..=p {
        let x = spec.term(i);
        let r_prev = spec.remainder(i - 1).exact().expect("exact").clone();
        let r_i = spec.remainder(i).exact().expect("exact").clone();
        let rhs = &r_i + remainder_mass_sum(spec, per.as_ref(), i);
        if w.a_fails_at.is_none() && x <= rhs {
            w.a_fails_at = Some(i);
        }
        if w.b_fails_at.is_none() && r_prev <= rhs {
            w.b_fails_at = Some(i);
        }
    }
    if let Some(per) = per.as_ref() {
        for s in 0..per.period() {
            let i = p + s + 1;
            let g = remainder_mass_sum(spec, Some(per), i);
            let rhs = &per.mass[s + 1] + &g;
            if w.a_fails_at.is_none() && per.coeffs[s] <= rhs {
                w.a_fails_at = Some(i);
            }
            if w.b_fails_at.is_none() && per.mass[s] <= rhs {
                w.b_fails_at = Some(i);
            }
        }
    }
    let yes_no = |f: Option<usize>| if f.is_none() { Decision::Yes } else { Decision::No };
    Ok(ConvergenceProfile {
        quick: yes_no(w.quick_fails_at),
        slow_from: match (spec.is_finite(), slow) {
            (true, _) | (false, None) => SlowFrom::Never,
            (false, Some(n)) => SlowFrom::From(n),
        },
        property_a: yes_no(w.a_fails_at),
        property_b: yes_no(w.b_fails_at),
        witnesses: w,
    })
}

/// Index from which the series is nonincreasing and satisfies `x_n <= r_n`;
/// from there on the subsums fill `[0, r_{n-1}]`.
pub fn interval_filling_from(spec: &SeriesSpec) -> Option<usize> {
    let report = spec.validate().ok()?;
    let sorted = report.sorted_from?;
    if spec.is_finite() || matches!(spec.tail, TailSpec::Blocks(_)) {
        return None;
    }
    let slow = Dominance::of(spec).ok()?.slow_from()?;
    Some(slow.max(sorted))
}

pub fn classify(spec: &SeriesSpec) -> Result<TopologyClass, TopologyError> {
    let report = spec.validate()?;
    if spec.is_finite() {
        return Ok(TopologyClass::FiniteSet);
    }
    let sorted_from = report.sorted_from.ok_or(TopologyError::NotEventuallySorted)?;
    let dom = Dominance::of(spec)?;
    if dom.tail_strict() {
        return Ok(TopologyClass::CantorSet);
    }
    if !dom.tail_slow() {
        return Ok(TopologyClass::CantorvalCandidate);
    }
    let n = dom.slow_from().expect("slow tail").max(sorted_from);
    if n - 1 > MAX_DEPTH {
        return Err(TopologyError::DepthTooLarge(n - 1));
    }
    let r = spec.remainder(n - 1).hi().clone();
    Ok(TopologyClass::IntervalUnion(merge(subset_sums(spec, n - 1), &r)))
}

/// Distinct subset sums of the first `depth` terms.
pub fn subset_sums(spec: &SeriesSpec, depth: usize) -> BTreeSet<Rat> {
    let mut sums = BTreeSet::from([Rat::zero()]);
    for n in 1..=depth {
        let x = spec.term(n);
        if x.is_zero() {
            continue;
        }
        let shifted: Vec<Rat> = sums.iter().map(|s| s + &x).collect();
        sums.extend(shifted);
    }
    sums
}

fn merge(points: BTreeSet<Rat>, width: &Rat) -> Vec<(Rat, Rat)> {
    let mut out: Vec<(Rat, Rat)> = Vec::new();
    for s in points {
        let hi = &s + width;
        match out.last_mut() {
            Some(last) if s <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((s, hi)),
        }
    }
    out
}

/// Merged intervals `[sigma_F, sigma_F + r_depth]` over `F` within the first
/// `depth` indices. For enclosed remainders the upper bound is used.
pub fn cover(spec: &SeriesSpec, depth: usize) -> Result<Vec<(Rat, Rat)>, TopologyError> {
    spec.validate()?;
    if depth > MAX_DEPTH {
        return Err(TopologyError::DepthTooLarge(depth));
    }
    let r = spec.remainder(depth).hi().clone();
    Ok(merge(subset_sums(spec, depth), &r))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gap {
    pub lo: Rat,
    pub hi: Rat,
    /// Wider than twice the depth remainder.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub depth: usize,
    pub gaps: Vec<Gap>,
    /// Position of the leftmost among the longest gaps.
    pub leftmost_longest: Option<usize>,
    /// `k` with `(r_k, x_k)` equal to that gap.
    pub matches_index: Option<usize>,
}

pub fn gaps(spec: &SeriesSpec, depth: usize) -> Result<GapReport, TopologyError> {
    let intervals = cover(spec, depth)?;
    let r = spec.remainder(depth).hi().clone();
    let twice = &r + &r;
    let gaps: Vec<Gap> = intervals
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0].1.clone(), w[1].0.clone());
            let certified = &hi - &lo > twice;
            Gap { lo, hi, certified }
        })
        .collect();
    let mut best: Option<usize> = None;
    for (i, g) in gaps.iter().enumerate() {
        let wider = match best {
            None => true,
            Some(b) => &g.hi - &g.lo > &gaps[b].hi - &gaps[b].lo,
        };
        if wider {
            best = Some(i);
        }
    }
    let matches_index = best.and_then(|b| {
        let g = &gaps[b];
        (1..=depth).find(|&k| {
            spec.term(k) == g.hi && matches!(spec.remainder(k), Mass::Exact(ref rk) if *rk == g.lo)
        })
    });
    Ok(GapReport { depth, gaps, leftmost_longest: best, matches_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn geo(q: Rat) -> SeriesSpec {
        SeriesSpec::geometric(Rat::one(), q)
    }

    #[test]
    fn merge_joins_touching_intervals() {
        let pts = BTreeSet::from([rat(0, 1), rat(1, 2), rat(2, 1)]);
        assert_eq!(merge(pts, &rat(1, 2)), vec![(rat(0, 1), rat(1, 1)), (rat(2, 1), rat(5, 2))]);
    }

    #[test]
    fn remainder_sum_matches_partial_sums() {
        let spec = SeriesSpec::new(vec![rat(1, 1)], TailSpec::Multigeometric { coeffs: vec![rat(1, 3), rat(1, 4)], q: rat(1, 5) });
        let per = spec.periodic().unwrap();
        for i in 0..5 {
            let direct: Rat = (i..i + 160).map(|m| spec.remainder(m).exact().unwrap().clone()).sum();
            let closed = remainder_mass_sum(&spec, Some(&per), i);
            assert!(closed >= direct);
            assert!(&closed - &direct < rat(1, 1_000_000_000));
        }
    }

    #[test]
    fn geometric_half_is_slow_from_one() {
        let p = convergence_profile(&geo(rat(1, 2))).unwrap();
        assert_eq!(p.quick, Decision::No);
        assert_eq!(p.slow_from, SlowFrom::From(1));
        assert_eq!(interval_filling_from(&geo(rat(1, 2))), Some(1));
        assert_eq!(interval_filling_from(&geo(rat(1, 3))), None);
    }
}
