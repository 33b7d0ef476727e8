//! Digit expansions: the quasiregular (greedy from below) expansion and the
//! segment-greedy representation used for slowly convergent series.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::{CountError, Representation, TailAction};
use crate::series::{pow, Rat, SeriesSpec, TailSpec};
use crate::topology::{convergence_profile, SlowFrom};

/// Index horizon used when a caller does not choose one.
pub const DEFAULT_HORIZON: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    /// Decisions for indices `first..first + digits.len()`.
    pub first: usize,
    pub digits: Vec<bool>,
    /// The whole decision stream, when it closed within the horizon.
    pub closure: Option<Representation>,
    /// Residual after the last computed digit.
    pub residual: Rat,
}

impl Expansion {
    /// Maximal runs of consecutive taken indices among the computed digits.
    pub fn segments(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for (k, &d) in self.digits.iter().enumerate() {
            if !d {
                continue;
            }
            let n = self.first + k;
            match out.last_mut() {
                Some(seg) if seg.1 + 1 == n => seg.1 = n,
                _ => out.push((n, n)),
            }
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Rule {
    /// Take `x_n` iff it is strictly below the residual.
    Strict,
    /// Inside a segment take while `x_n <= v`; between segments wait for
    /// `x_n < v`.
    Segments { inside: bool },
}

/// Key for detecting a repeated state in the self-similar tail.
fn tail_key(spec: &SeriesSpec, n: usize, v: &Rat) -> Option<(usize, Rat)> {
    let per = spec.periodic()?;
    let p = spec.prefix.len();
    if n <= p {
        return None;
    }
    let tau = n - p - 1;
    let k = per.period();
    Some((tau % k, v / pow(&per.q, (tau / k) as u64)))
}

fn run(spec: &SeriesSpec, x: &Rat, first: usize, horizon: usize, mut rule: Rule) -> Expansion {
    let mut v = x.clone();
    let mut digits: Vec<bool> = Vec::new();
    let mut seen: HashMap<(usize, Rat, Rule), usize> = HashMap::new();
    let support = |digits: &[bool], upto: usize| -> Vec<usize> {
        digits[..upto].iter().enumerate().filter(|(_, &d)| d).map(|(k, _)| first + k).collect()
    };
    let len = spec.len();
    let mut closure = None;
    let mut n = first;
    while n < first + horizon {
        if v.is_zero() {
            closure = Some(Representation::finite(support(&digits, digits.len())));
            break;
        }
        if let Some(r) = spec.remainder(n - 1).exact() {
            if &v == r {
                closure = Some(Representation::all_from(support(&digits, digits.len()), n));
                break;
            }
        }
        if len.is_some_and(|l| n > l) {
            break;
        }
        if let Some((s, u)) = tail_key(spec, n, &v) {
            if let Some(&m) = seen.get(&(s, u.clone(), rule)) {
                let k0 = m - first;
                let word = digits[k0..].to_vec();
                closure = Some(Representation {
                    support: support(&digits, k0).into_iter().collect(),
                    tail: TailAction::Cycle { start: m, word },
                });
                break;
            }
            seen.insert((s, u, rule), n);
        }
        let xn = spec.term(n);
        let take = match rule {
            Rule::Strict => xn < v,
            Rule::Segments { inside: true } => {
                let t = xn <= v;
                if !t {
                    rule = Rule::Segments { inside: false };
                }
                t
            }
            Rule::Segments { inside: false } => {
                let t = xn < v;
                if t {
                    rule = Rule::Segments { inside: true };
                }
                t
            }
        };
        if take {
            v -= xn;
        }
        digits.push(take);
        n += 1;
    }
    if let Some(c) = &closure {
        while digits.len() < horizon {
            digits.push(c.contains(first + digits.len()));
        }
        // Residual after the horizon, recomputed from the closed form.
        let taken: Rat = (first..first + horizon).filter(|&m| c.contains(m)).map(|m| spec.term(m)).sum();
        v = x - taken;
    }
    Expansion { first, digits, closure, residual: v }
}

/// Greedy-from-below digits of `x`: take `x_n` iff the partial sum plus
/// `x_n` stays strictly below `x`.
pub fn quasiregular_expand(spec: &SeriesSpec, x: &Rat, horizon: usize) -> Result<Expansion, CountError> {
    spec.validate()?;
    if !x.is_positive() || spec.total().cmp_value(x, 64)? == std::cmp::Ordering::Greater {
        return Err(CountError::TargetOutOfRange);
    }
    Ok(run(spec, x, 1, horizon, Rule::Strict))
}

/// Segment-greedy representation of `t` over the indices after `after`.
pub fn greedy_segments(spec: &SeriesSpec, t: &Rat, after: usize) -> Result<Expansion, CountError> {
    greedy_segments_with(spec, t, after, DEFAULT_HORIZON)
}

pub fn greedy_segments_with(spec: &SeriesSpec, t: &Rat, after: usize, horizon: usize) -> Result<Expansion, CountError> {
    if let TailSpec::Blocks(_) = spec.tail {
        return Err(CountError::Unsupported("blocks tails"));
    }
    let profile = convergence_profile(spec)?;
    match profile.slow_from {
        SlowFrom::From(n) if n <= after + 1 => {}
        _ => return Err(CountError::Precondition("series is not slowly convergent there".into())),
    }
    let r = spec.remainder(after).exact().expect("exact remainder").clone();
    if t.is_negative() || *t > r {
        return Err(CountError::TargetOutOfRange);
    }
    Ok(run(spec, t, after + 1, horizon, Rule::Segments { inside: true }))
}
