//! Builders for series with prescribed cardinal functions.

mod finite;
mod presets;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

pub use finite::{finite_range, search_finite_ranges, search_finite_ranges_with, FiniteMeasure, FiniteRange, MAX_FINITE_ATOMS};
pub use presets::{check_ex_3_15, preset, unique_base, Ex315Report, PresetName, PRESET_NAMES};

use crate::series::{rat, Rat, SeriesSpec, SizeRule, SpecError, TailSpec};
use crate::topology::{classify, convergence_profile, subset_sums, Decision, TopologyClass, TopologyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("series does not have property (B)")]
    NotBSeries,
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("{0} atoms exceed the limit of {1}")]
    SizeLimit(usize, usize),
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

fn label_of(spec: &SeriesSpec) -> String {
    spec.label.clone().unwrap_or_else(|| spec.tail.kind().to_string())
}

/// `(r_0, x_1, r_1, x_2, ...)` for a series with property (B). The label
/// records whether (A) holds as well.
pub fn interleave(base: &SeriesSpec) -> Result<SeriesSpec, ConstructionError> {
    if let TailSpec::Blocks(_) = base.tail {
        return Err(ConstructionError::Unsupported("interleaving blocks tails"));
    }
    let profile = convergence_profile(base)?;
    if profile.property_b != Decision::Yes {
        return Err(ConstructionError::NotBSeries);
    }
    let p = base.prefix.len();
    let mut prefix = Vec::with_capacity(2 * p);
    for n in 1..=p {
        prefix.push(base.remainder(n - 1).exact().expect("exact remainder").clone());
        prefix.push(base.term(n));
    }
    let tail = match base.periodic() {
        None => TailSpec::Zero,
        Some(per) => {
            let coeffs = (0..per.period()).flat_map(|s| [per.mass[s].clone(), per.coeffs[s].clone()]).collect();
            TailSpec::Multigeometric { coeffs, q: per.q }
        }
    };
    let a = if profile.property_a == Decision::Yes { "(B) and (A)" } else { "(B) not (A)" };
    Ok(SeriesSpec::new(prefix, tail).with_label(format!("interleave {}: {a}", label_of(base))))
}

/// Every term twice in a row. When the input fills an interval the label
/// notes that interior points have continuum many representations.
pub fn double_terms(spec: &SeriesSpec) -> Result<SeriesSpec, ConstructionError> {
    spec.validate()?;
    let prefix = spec.prefix.iter().flat_map(|x| [x.clone(), x.clone()]).collect();
    let tail = match &spec.tail {
        TailSpec::Zero => TailSpec::Zero,
        TailSpec::Geometric { c, q } => {
            let x = c * q;
            TailSpec::Multigeometric { coeffs: vec![x.clone(), x], q: q.clone() }
        }
        TailSpec::Multigeometric { coeffs, q } => TailSpec::Multigeometric {
            coeffs: coeffs.iter().flat_map(|k| [k.clone(), k.clone()]).collect(),
            q: q.clone(),
        },
        TailSpec::Blocks(b) => {
            let mut b = b.clone();
            b.sizes = SizeRule { a: 2 * b.sizes.a, c: 2 * b.sizes.c };
            TailSpec::Blocks(b)
        }
    };
    let fills = matches!(classify(spec), Ok(TopologyClass::IntervalUnion(ref c)) if c.len() == 1);
    let note = if fills { "; continuum on the interior" } else { "" };
    Ok(SeriesSpec::new(prefix, tail).with_label(format!("double {}{note}", label_of(spec))))
}

/// New prefix `m_i * total` for each multiplier, ahead of the old terms.
pub fn prepend_scaled(spec: &SeriesSpec, multipliers: &[Rat]) -> Result<SeriesSpec, ConstructionError> {
    spec.validate()?;
    let total = spec.exact_total().ok_or(ConstructionError::Unsupported("prepending to a blocks tail"))?;
    if multipliers.iter().any(|m| *m <= Rat::zero()) {
        return Err(SpecError::NonPositiveTerm { index: 1 }.into());
    }
    let mut prefix: Vec<Rat> = multipliers.iter().map(|m| m * &total).collect();
    prefix.extend(spec.prefix.iter().cloned());
    let ms: Vec<String> = multipliers.iter().map(crate::series::fmt_rat).collect();
    Ok(SeriesSpec::new(prefix, spec.tail.clone()).with_label(format!("prepend [{}] {}", ms.join(","), label_of(spec))))
}

fn ints(k: i64, m: usize) -> Vec<Rat> {
    vec![rat(k, 1); m]
}

pub fn add_total(spec: &SeriesSpec) -> Result<SeriesSpec, ConstructionError> {
    prepend_scaled(spec, &ints(1, 1))
}

pub fn add_two_totals(spec: &SeriesSpec) -> Result<SeriesSpec, ConstructionError> {
    prepend_scaled(spec, &ints(1, 2))
}

pub fn add_m_totals(spec: &SeriesSpec, m: usize) -> Result<SeriesSpec, ConstructionError> {
    prepend_scaled(spec, &ints(1, m))
}

pub fn add_m_double_totals(spec: &SeriesSpec, m: usize) -> Result<SeriesSpec, ConstructionError> {
    prepend_scaled(spec, &ints(2, m))
}

/// `tau`'s atoms followed by `nu` scaled by the largest power of 1/2 that
/// puts its total below the smallest gap between distinct subsums of `tau`.
pub fn product(tau: &FiniteMeasure, nu: &SeriesSpec) -> Result<SeriesSpec, ConstructionError> {
    nu.validate()?;
    let total = nu.exact_total().ok_or(ConstructionError::Unsupported("product with a blocks tail"))?;
    let sums: Vec<Rat> = subset_sums(&tau.spec(), tau.atoms.len()).into_iter().collect();
    let gap = sums.windows(2).map(|w| &w[1] - &w[0]).min().expect("positive atoms give two sums");
    let mut factor = Rat::one();
    while &total * &factor >= gap {
        factor /= Rat::from_integer(BigInt::from(2));
    }
    let scaled = nu.scaled(&factor);
    let mut prefix = tau.atoms.clone();
    prefix.extend(scaled.prefix);
    Ok(SeriesSpec::new(prefix, scaled.tail).with_label(format!("product {tau} x {}", label_of(nu))))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleave_geometric_quarter() {
        let s = interleave(&SeriesSpec::geometric(rat(1, 1), rat(1, 4))).unwrap();
        assert_eq!(s.tail, TailSpec::Multigeometric { coeffs: vec![rat(1, 3), rat(1, 4)], q: rat(1, 4) });
        assert!(s.prefix.is_empty());
    }

    #[test]
    fn interleave_rejects_half() {
        let r = interleave(&SeriesSpec::geometric(rat(1, 1), rat(1, 2)));
        assert_eq!(r, Err(ConstructionError::NotBSeries));
    }

    #[test]
    fn interleave_labels_a_status() {
        let s = interleave(&SeriesSpec::geometric(rat(1, 1), rat(3, 10))).unwrap();
        assert!(s.label.unwrap().ends_with("(B) not (A)"));
    }

    #[test]
    fn doubling_half_gives_pairs() {
        let s = double_terms(&SeriesSpec::geometric(rat(1, 1), rat(1, 2))).unwrap();
        assert_eq!(s.tail, TailSpec::Multigeometric { coeffs: vec![rat(1, 2), rat(1, 2)], q: rat(1, 2) });
        assert!(s.label.unwrap().contains("continuum"));
        let t = double_terms(&SeriesSpec::geometric(rat(1, 1), rat(1, 3))).unwrap();
        assert!(!t.label.unwrap().contains("continuum"));
    }

    #[test]
    fn product_scale_is_below_gap() {
        let tau = FiniteMeasure::new(vec![rat(1, 1), rat(1, 1)]).unwrap();
        let nu = SeriesSpec::geometric(rat(2, 1), rat(1, 3));
        let s = product(&tau, &nu).unwrap();
        assert_eq!(s.prefix.len(), 2);
        let nu_total = s.exact_total().unwrap() - rat(2, 1);
        assert!(nu_total < rat(1, 1));
        assert!(nu_total * rat(2, 1) >= rat(1, 1));
    }
}
