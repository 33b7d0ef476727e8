//! Exact counting of subset-sum representations for positive series with
//! closed-form tails, classification of the achievement set, and builders for
//! series with prescribed representation counts.

pub mod constructions;
pub mod counter;
pub mod series;
pub mod topology;

pub use counter::{count, enumerate_reps, range_scan, Cardinality, CountOptions, CountResult, Representation};
pub use series::{rat, Rat, SeriesSpec, TailSpec};
