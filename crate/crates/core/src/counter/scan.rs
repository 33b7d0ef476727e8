use std::collections::BTreeSet;

use rayon::prelude::*;

use super::{count, Cardinality, CountDiagnostics, CountError, CountOptions, Representation};
use crate::series::{Rat, SeriesSpec};
use crate::topology::{subset_sums, MAX_DEPTH};

#[derive(Clone, Debug)]
pub struct ScanEntry {
    pub target: Rat,
    /// `None` when counting failed; see `error`.
    pub cardinality: Option<Cardinality>,
    pub witnesses: Vec<Representation>,
    pub diagnostics: CountDiagnostics,
    pub error: Option<String>,
}

impl ScanEntry {
    pub fn is_exact(&self) -> bool {
        self.cardinality.is_some_and(|c| c.is_exact())
    }
}

#[derive(Clone, Debug)]
pub struct RangeReport {
    pub depth: usize,
    /// One entry per distinct target, ascending.
    pub entries: Vec<ScanEntry>,
}

impl RangeReport {
    /// Exact values observed, ordered by [`Cardinality::sort_key`].
    pub fn cardinality_set(&self) -> Vec<Cardinality> {
        let mut set: Vec<Cardinality> = self.entries.iter().filter_map(|e| e.cardinality).filter(|c| c.is_exact()).collect();
        set.sort_by_key(Cardinality::sort_key);
        set.dedup();
        set
    }

    /// Positive values of the observed range; zero counts come only from
    /// extra targets outside the range.
    pub fn range(&self) -> Vec<Cardinality> {
        self.cardinality_set().into_iter().filter(|c| *c != Cardinality::Fin(0)).collect()
    }

    /// Some entry is a lower bound or failed.
    pub fn budget_limited(&self) -> bool {
        self.entries.iter().any(|e| !e.is_exact())
    }

    pub fn states(&self) -> usize {
        self.entries.iter().map(|e| e.diagnostics.states).sum()
    }

    pub fn get(&self, t: &Rat) -> Option<&ScanEntry> {
        self.entries.binary_search_by(|e| e.target.cmp(t)).ok().map(|i| &self.entries[i])
    }
}

/// Probes every subsum of the first `depth` terms, the exact remainders
/// `r_0..=r_depth` and the extra targets. Targets are counted in parallel;
/// failures are recorded per entry.
pub fn range_scan(spec: &SeriesSpec, depth: usize, opts: &CountOptions, extra: &[Rat]) -> Result<RangeReport, CountError> {
    if depth > MAX_DEPTH {
        return Err(CountError::Precondition(format!("depth {depth} exceeds {MAX_DEPTH}")));
    }
    spec.validate()?;
    let depth = spec.len().map_or(depth, |l| depth.min(l));
    let mut targets: BTreeSet<Rat> = subset_sums(spec, depth);
    targets.extend((0..=depth).filter_map(|k| spec.remainder(k).exact().cloned()));
    targets.extend(extra.iter().cloned());
    let targets: Vec<Rat> = targets.into_iter().collect();
    let entries = targets
        .into_par_iter()
        .map(|t| match count(spec, &t, opts) {
            Ok(r) => ScanEntry {
                target: t,
                cardinality: Some(r.cardinality),
                witnesses: r.witnesses,
                diagnostics: r.diagnostics,
                error: None,
            },
            Err(e) => ScanEntry {
                target: t,
                cardinality: None,
                witnesses: Vec::new(),
                diagnostics: CountDiagnostics::default(),
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(RangeReport { depth, entries })
}
