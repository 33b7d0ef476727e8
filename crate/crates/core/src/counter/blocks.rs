//! Bounded enumeration for super-exponential block tails.
//!
//! The search walks the prefix term by term and then the tail block by block,
//! choosing how many copies of each pattern entry to take. A branch closes
//! when the residual reaches zero and dies when the residual leaves the
//! enclosure of the remaining mass.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::{Cardinality, CountDiagnostics, CountError, CountOptions, CountResult, Representation};
use crate::series::{BlocksTail, Rat, SeriesSpec, TailSpec};

/// Number of representations when only the listed blocks are partially
/// used: block `i` of size `sizes[i]` contributes `chosen[i]` of its terms.
/// With infinitely many partially used blocks the count is the continuum.
pub fn block_count(sizes: &[u64], chosen: &[u64], partial_blocks_infinite: bool) -> Cardinality {
    if partial_blocks_infinite {
        return Cardinality::Continuum;
    }
    sizes
        .iter()
        .zip(chosen)
        .map(|(&j, &b)| binomial(j, b).map_or(Cardinality::AtLeast(u64::MAX), Cardinality::Fin))
        .fold(Cardinality::Fin(1), |a, b| a * b)
}

pub(crate) fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Choices made along a branch: prefix indices taken, then per block the
/// number of copies of each entry.
#[derive(Clone, Debug, Default)]
struct Branch {
    prefix: Vec<usize>,
    blocks: Vec<(u64, Vec<u64>)>,
}

struct Walker<'a> {
    spec: &'a SeriesSpec,
    tail: &'a BlocksTail,
    opts: &'a CountOptions,
    nodes: usize,
    closed: Cardinality,
    open_branches: usize,
    undecided: usize,
    branches: Vec<Branch>,
}

impl Walker<'_> {
    /// Compares `u` with the mass remaining after global index `n`.
    fn fits(&mut self, u: &Rat, n: usize) -> Option<bool> {
        match self.spec.remainder(n).cmp_value(u, self.opts.refine_cap) {
            Ok(Ordering::Greater) => Some(false),
            Ok(_) => Some(true),
            Err(_) => {
                self.undecided += 1;
                None
            }
        }
    }

    fn budget_left(&mut self) -> bool {
        if self.nodes >= self.opts.limits.budget {
            self.open_branches += 1;
            return false;
        }
        self.nodes += 1;
        true
    }

    fn close(&mut self, branch: &Branch, mult: Cardinality) {
        self.closed = self.closed + mult;
        if self.branches.len() < self.opts.witnesses.max(1) * 4 {
            self.branches.push(branch.clone());
        }
    }

    fn prefix(&mut self, i: usize, u: Rat, branch: &mut Branch) {
        let p = self.spec.prefix.len();
        if i == p {
            return self.block(1, u, Cardinality::Fin(1), branch);
        }
        if !self.budget_left() {
            return;
        }
        for take in [true, false] {
            let v = if take { &u - &self.spec.prefix[i] } else { u.clone() };
            if v.is_negative() {
                continue;
            }
            if take {
                branch.prefix.push(i + 1);
            }
            if v.is_zero() {
                self.close(branch, Cardinality::Fin(1));
            } else {
                match self.fits(&v, i + 1) {
                    Some(true) => self.prefix(i + 1, v, branch),
                    Some(false) => {}
                    None => self.open_branches += 1,
                }
            }
            if take {
                branch.prefix.pop();
            }
        }
    }

    fn block(&mut self, n: u64, u: Rat, mult: Cardinality, branch: &mut Branch) {
        if !self.budget_left() {
            return;
        }
        let s = self.tail.sizes.size(n);
        let values: Vec<Rat> = (0..self.tail.pattern.len()).map(|e| self.tail.entry_value(e, n)).collect();
        let end_index = self.spec.prefix.len()
            + (1..=n).map(|m| self.tail.block_len(m)).sum::<u64>() as usize;
        let mut counts = vec![s; values.len()];
        loop {
            let used: Rat = counts
                .iter()
                .zip(&values)
                .map(|(&c, v)| v * Rat::from_integer(BigInt::from(c)))
                .sum();
            let v = &u - used;
            if !v.is_negative() {
                let ways = counts
                    .iter()
                    .map(|&c| binomial(s, c).map_or(Cardinality::AtLeast(u64::MAX), Cardinality::Fin))
                    .fold(mult, |a, b| a * b);
                branch.blocks.push((n, counts.clone()));
                if v.is_zero() {
                    self.close(branch, ways);
                } else {
                    match self.fits(&v, end_index) {
                        Some(true) => self.block(n + 1, v, ways, branch),
                        Some(false) => {}
                        None => self.open_branches += 1,
                    }
                }
                branch.blocks.pop();
            }
            // Next count vector, descending lexicographically.
            let mut k = counts.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if counts[k] > 0 {
                    counts[k] -= 1;
                    for c in counts.iter_mut().skip(k + 1) {
                        *c = s;
                    }
                    break;
                }
            }
        }
    }
}

/// Index sets of a closed branch, smallest-first within each block.
fn expand_branch(spec: &SeriesSpec, tail: &BlocksTail, b: &Branch, limit: usize) -> Vec<Representation> {
    let mut sets: Vec<BTreeSet<usize>> = vec![b.prefix.iter().copied().collect()];
    let p = spec.prefix.len();
    for (n, counts) in &b.blocks {
        let s = tail.sizes.size(*n) as usize;
        let start = p + (1..*n).map(|m| tail.block_len(m)).sum::<u64>() as usize + 1;
        for (e, &c) in counts.iter().enumerate() {
            let base = start + e * s;
            let combos = combinations(s, c as usize, limit);
            let mut next = Vec::new();
            'outer: for set in &sets {
                for combo in &combos {
                    let mut t = set.clone();
                    t.extend(combo.iter().map(|j| base + j));
                    next.push(t);
                    if next.len() >= limit {
                        break 'outer;
                    }
                }
            }
            sets = next;
        }
    }
    sets.into_iter().map(Representation::finite).collect()
}

/// First `limit` `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize, limit: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        if out.len() >= limit {
            return out;
        }
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub(crate) fn count_blocks(spec: &SeriesSpec, t: &Rat, opts: &CountOptions) -> Result<CountResult, CountError> {
    let TailSpec::Blocks(tail) = &spec.tail else {
        return Err(CountError::Unsupported("not a blocks tail"));
    };
    if t.is_negative() || spec.total().cmp_value(t, opts.refine_cap)? == Ordering::Greater {
        return Err(CountError::TargetOutOfRange);
    }
    let mut w = Walker {
        spec,
        tail,
        opts,
        nodes: 0,
        closed: Cardinality::Fin(0),
        open_branches: 0,
        undecided: 0,
        branches: Vec::new(),
    };
    let mut branch = Branch::default();
    if t.is_zero() {
        w.close(&branch, Cardinality::Fin(1));
    } else {
        w.prefix(0, t.clone(), &mut branch);
    }
    let exact = w.open_branches == 0 && w.undecided == 0;
    let cardinality = match (exact, w.closed) {
        (true, c) => c,
        (false, Cardinality::Fin(k) | Cardinality::AtLeast(k)) => Cardinality::AtLeast(k),
        (false, c) => c,
    };
    let mut witnesses: Vec<Representation> = w
        .branches
        .iter()
        .flat_map(|b| expand_branch(spec, tail, b, opts.witnesses))
        .collect();
    witnesses.sort_by(|a, b| a.cmp_decisions(b));
    witnesses.dedup();
    let truncated = witnesses.len() > opts.witnesses || !exact;
    witnesses.truncate(opts.witnesses);
    Ok(CountResult {
        cardinality,
        witnesses,
        diagnostics: CountDiagnostics {
            states: w.nodes,
            budget_limited: !exact,
            infinite_lower_bound: false,
            witnesses_truncated: truncated,
            undecided_branches: w.undecided,
        },
    })
}
