//! Points with infinitely many representations.

use num_traits::{One, Signed, Zero};

use super::{count, graph, node_classes, CountError, CountOptions, CountResult, Representation};
use crate::series::{pow, Rat, SeriesSpec, TailSpec};
use crate::topology::{convergence_profile, subset_sums, Decision, SlowFrom};

/// `t = sum_j x_{first + j * stride}` with the selected indices satisfying
/// `x_{k_p} < r_{k_l} - sum_{j=l}^{p-1} x_{k_j}` for all `l < p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWitness {
    pub t: Rat,
    pub first: usize,
    pub stride: usize,
}

impl OmegaWitness {
    /// The `j`-th selected index.
    pub fn index(&self, j: usize) -> usize {
        self.first + j * self.stride
    }

    pub fn as_representation(&self) -> Representation {
        let word = (0..self.stride).map(|i| i == 0).collect();
        Representation {
            support: Default::default(),
            tail: super::TailAction::Cycle { start: self.first, word },
        }
    }
}

/// Selects indices along an arithmetic progression in the self-similar tail
/// so that the resulting sum has infinitely many representations.
pub fn omega_witness(spec: &SeriesSpec) -> Result<OmegaWitness, CountError> {
    let Some(per) = spec.periodic() else {
        return Err(CountError::Unsupported("witness needs a geometric or multigeometric tail"));
    };
    let profile = convergence_profile(spec)?;
    if profile.slow_from != SlowFrom::From(1) {
        return Err(CountError::Precondition("x_n <= r_n fails for some n".into()));
    }
    let p = per.period();
    let Some(s0) = (0..p).find(|&s| per.coeffs[s] < per.mass[s + 1]) else {
        return Err(CountError::Precondition("x_n < r_n holds for only finitely many n".into()));
    };
    let first = spec.prefix.len() + s0 + 1;
    let x = &per.coeffs[s0];
    let r = &per.mass[s0 + 1];
    // Smallest d with x / (1 - q^d) <= r.
    let mut d = 1u64;
    while x / (Rat::one() - pow(&per.q, d)) > *r {
        d += 1;
    }
    let t = spec.term(first) / (Rat::one() - pow(&per.q, d));
    Ok(OmegaWitness { t, first, stride: d as usize * p })
}

#[derive(Clone, Debug)]
pub struct DenseWitness {
    pub u: Rat,
    /// The point with infinitely many representations the walk started from.
    pub source: Rat,
    pub result: CountResult,
}

fn infinite(r: &CountResult) -> bool {
    r.cardinality.is_infinite() || r.diagnostics.infinite_lower_bound
}

/// A point `u` within `epsilon` of `v` with infinitely many representations.
///
/// Starting from some known such point, the walk keeps to states with
/// infinitely many completions until it has passed the support of `v` and the
/// residual is at most `epsilon`; then `u` is `v` plus that residual.
pub fn omega_dense_witness(spec: &SeriesSpec, v: &Rat, epsilon: &Rat) -> Result<DenseWitness, CountError> {
    if let TailSpec::Blocks(_) = spec.tail {
        return Err(CountError::Unsupported("blocks tails"));
    }
    if !epsilon.is_positive() {
        return Err(CountError::Precondition("epsilon must be positive".into()));
    }
    if convergence_profile(spec)?.quick == Decision::Yes || spec.is_finite() {
        return Err(CountError::NoOmegaPoint);
    }
    let opts = CountOptions::default();
    let at_v = count(spec, v, &opts)?;
    if infinite(&at_v) {
        return Ok(DenseWitness { u: v.clone(), source: v.clone(), result: at_v });
    }
    let Some(finite_rep) = at_v.witnesses.iter().find(|r| !r.is_infinite()) else {
        return Err(CountError::Precondition("v is not a finite subsum".into()));
    };
    let reach = finite_rep.support.iter().next_back().copied().unwrap_or(0);
    let source = find_source(spec, &opts)?;

    let machine = graph::Machine::new(spec)?;
    let g = graph::trim(&graph::explore(&machine, &source, opts.limits)?);
    let classes = node_classes(&g);
    let mut node = g.start.ok_or(CountError::NoOmegaPoint)?;
    let mut residual = source.clone();
    let mut len = 0usize;
    while len < reach || residual > *epsilon {
        if len > 100_000 {
            return Err(CountError::Precondition("walk did not reach epsilon".into()));
        }
        let Some(e) = g.edges[node].iter().find(|e| classes[e.to].is_infinite()) else {
            return Err(CountError::NoOmegaPoint);
        };
        len += 1;
        if e.take {
            residual -= spec.term(len);
        }
        node = e.to;
    }
    let u = v + &residual;
    let result = count(spec, &u, &opts)?;
    Ok(DenseWitness { u, source, result })
}

/// Terms and remainders by index, then short subsums, then the
/// arithmetic-progression witness.
fn find_source(spec: &SeriesSpec, opts: &CountOptions) -> Result<Rat, CountError> {
    let mut tried = std::collections::BTreeSet::new();
    let horizon = spec.len().map_or(12, |l| l.min(12));
    let singles = (1..=horizon).flat_map(|k| [Some(spec.term(k)), spec.remainder(k).exact().cloned()]).flatten();
    let sums = subset_sums(spec, 8).into_iter().filter(|s| !s.is_zero());
    for t in singles.chain(sums) {
        if !tried.insert(t.clone()) {
            continue;
        }
        if let Ok(r) = count(spec, &t, opts) {
            if infinite(&r) {
                return Ok(t);
            }
        }
    }
    let w = omega_witness(spec).map_err(|_| CountError::NoOmegaPoint)?;
    Ok(w.t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn progression_for_three_fifths() {
        let spec = SeriesSpec::geometric(rat(1, 1), rat(3, 5));
        let w = omega_witness(&spec).unwrap();
        assert_eq!(w.t, rat(75, 98));
        assert_eq!((w.first, w.stride), (1, 3));
        assert_eq!(w.as_representation().sum(&spec), Some(rat(75, 98)));
    }

    #[test]
    fn selected_indices_satisfy_the_chain() {
        let spec = SeriesSpec::geometric(rat(1, 1), rat(3, 5));
        let w = omega_witness(&spec).unwrap();
        for p in 1..8 {
            for l in 0..p {
                let partial: Rat = (l..p).map(|j| spec.term(w.index(j))).sum();
                let r = spec.remainder(w.index(l)).exact().unwrap().clone();
                assert!(spec.term(w.index(p)) < r - partial);
            }
        }
    }

    #[test]
    fn rejected_regimes() {
        let quick = SeriesSpec::geometric(rat(1, 1), rat(1, 3));
        assert!(matches!(omega_witness(&quick), Err(CountError::Precondition(_))));
        let tight = SeriesSpec::geometric(rat(1, 1), rat(1, 2));
        assert!(matches!(omega_witness(&tight), Err(CountError::Precondition(_))));
    }
}
