//! Exact counting of the subsets of the index set that sum to a target.

mod blocks;
mod cardinality;
mod expand;
mod graph;
mod reps;
mod scan;
mod witness;

use thiserror::Error;

pub use blocks::block_count;
pub use cardinality::Cardinality;
pub use expand::{greedy_segments, greedy_segments_with, quasiregular_expand, Expansion, DEFAULT_HORIZON};
pub use graph::{build_graph, classify_paths, node_classes, Edge, Limits, Node, Phase, StateGraph};
pub use reps::{enumerate_graph, verify, Enumeration, Representation, TailAction};
pub use scan::{range_scan, RangeReport, ScanEntry};
pub use witness::{omega_dense_witness, omega_witness, DenseWitness, OmegaWitness};

use crate::series::{Rat, SeriesSpec, SpecError, TailSpec, Undecidable};
use crate::topology::TopologyError;

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub limits: Limits,
    /// Number of representations to return alongside the count.
    pub witnesses: usize,
    /// Refinement cap for enclosure comparisons on blocks tails.
    pub refine_cap: usize,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { limits: Limits::default(), witnesses: 4, refine_cap: 64 }
    }
}

impl CountOptions {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.limits.budget = budget;
        self
    }

    pub fn with_witnesses(mut self, w: usize) -> Self {
        self.witnesses = w;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CountDiagnostics {
    /// Expanded states (graph) or search nodes (blocks).
    pub states: usize,
    pub budget_limited: bool,
    /// The explored part already proves infinitely many representations.
    pub infinite_lower_bound: bool,
    pub witnesses_truncated: bool,
    pub undecided_branches: usize,
}

#[derive(Clone, Debug)]
pub struct CountResult {
    pub cardinality: Cardinality,
    pub witnesses: Vec<Representation>,
    pub diagnostics: CountDiagnostics,
}

#[derive(Debug, Error)]
pub enum CountError {
    #[error("target outside [0, total]")]
    TargetOutOfRange,
    #[error(transparent)]
    Undecidable(#[from] Undecidable),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("state budget exceeded after {explored} states")]
    BudgetExceeded { explored: usize, partial: Box<StateGraph> },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no point with infinitely many representations")]
    NoOmegaPoint,
}

impl From<TopologyError> for CountError {
    fn from(e: TopologyError) -> Self {
        match e {
            TopologyError::Spec(s) => CountError::Spec(s),
            TopologyError::Undecidable(u) => CountError::Undecidable(u),
            other => CountError::Precondition(other.to_string()),
        }
    }
}

/// Counts the subsets summing to `t`.
///
/// Zero and self-similar tails go through the state graph. A graph cut short
/// by the budget still yields sound lower bounds; a continuum certified by the
/// explored part is reported exactly.
pub fn count(spec: &SeriesSpec, t: &Rat, opts: &CountOptions) -> Result<CountResult, CountError> {
    if let TailSpec::Blocks(_) = spec.tail {
        return blocks::count_blocks(spec, t, opts);
    }
    let machine = graph::Machine::new(spec)?;
    let raw = graph::explore(&machine, t, opts.limits)?;
    let g = graph::trim(&raw);
    let class = g.start.map_or(Cardinality::Fin(0), |s| node_classes(&g)[s]);
    let complete = g.is_complete();

    let finite = matches!(class, Cardinality::Fin(_));
    let mut listing = enumerate_graph(&g, finite && complete, opts.witnesses);
    if class.is_infinite() && !listing.reps.iter().any(Representation::is_infinite) {
        if let Some(r) = reps::first_infinite(&g) {
            if listing.reps.len() >= opts.witnesses.max(1) {
                listing.reps.pop();
            }
            listing.reps.push(r);
            listing.reps.sort_by(|a, b| a.cmp_decisions(b));
        }
    }

    let (cardinality, infinite_lower_bound) = if complete {
        (class, false)
    } else {
        match class {
            Cardinality::Continuum => (Cardinality::Continuum, false),
            Cardinality::Omega => (Cardinality::AtLeast((listing.reps.len() as u64).max(2)), true),
            Cardinality::Fin(k) | Cardinality::AtLeast(k) => (Cardinality::AtLeast(k), false),
        }
    };
    let truncated = match cardinality {
        Cardinality::Fin(k) => (listing.reps.len() as u64) < k,
        _ => true,
    };
    Ok(CountResult {
        cardinality,
        witnesses: listing.reps,
        diagnostics: CountDiagnostics {
            states: raw.explored,
            budget_limited: !complete,
            infinite_lower_bound,
            witnesses_truncated: truncated,
            undecided_branches: 0,
        },
    })
}

/// Shorthand for [`count`] with default options, returning only the value.
pub fn count_value(spec: &SeriesSpec, t: &Rat) -> Result<Cardinality, CountError> {
    count(spec, t, &CountOptions::default()).map(|r| r.cardinality)
}

/// The first `limit` representations of `t` in take-first decision order.
pub fn enumerate_reps(spec: &SeriesSpec, t: &Rat, limit: usize) -> Result<Enumeration, CountError> {
    if let TailSpec::Blocks(_) = spec.tail {
        let r = blocks::count_blocks(spec, t, &CountOptions::default().with_witnesses(limit))?;
        return Ok(Enumeration { reps: r.witnesses, truncated: r.diagnostics.witnesses_truncated });
    }
    let machine = graph::Machine::new(spec)?;
    let raw = graph::explore(&machine, t, Limits::default())?;
    let g = graph::trim(&raw);
    let class = g.start.map_or(Cardinality::Fin(0), |s| node_classes(&g)[s]);
    let exact_finite = g.is_complete() && matches!(class, Cardinality::Fin(_));
    let mut e = enumerate_graph(&g, exact_finite, limit);
    if exact_finite {
        if let Cardinality::Fin(k) = class {
            e.truncated = (limit as u64) < k;
        }
    } else {
        e.truncated = true;
    }
    Ok(e)
}
