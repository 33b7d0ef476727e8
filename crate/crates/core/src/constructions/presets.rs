//! Catalog of worked examples.

use std::fmt;
use std::str::FromStr;

use num_traits::One;

use super::{add_total, interleave, prepend_scaled, ConstructionError};
use crate::series::{parse_rat, rat, BlockEntry, BlocksTail, Rat, SeriesSpec, SizeRule, TailSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PresetName {
    GnCantorval,
    Ex2_6,
    Ex3_2,
    Ex3_5,
    Rem3_13,
    Ex3_15,
    Ex4_2,
    Ex4_3,
    Ex4_4,
    Ex4_7,
    Ex4_8,
    Ex4_9,
    Ex4_10,
    Ex4_11,
    Ex4_14,
    Ex4_15,
    Ex4_16,
    Ex4_17,
    Ex4_18,
    Ex4_19,
    Blocks2_5,
    /// `(r_0, x_1, r_1, ...)` for `x_n = q^n`.
    InterleavedGeo(Rat),
    /// Unique-representation base extended until exactly `k` values have two
    /// representations.
    Prop4_5(u32),
}

/// Plain preset names; the parameterized ones are written `NAME(arg)`.
pub const PRESET_NAMES: &[&str] = &[
    "GN_CANTORVAL",
    "EX_2_6",
    "EX_3_2",
    "EX_3_5",
    "REM_3_13",
    "EX_3_15",
    "EX_4_2",
    "EX_4_3",
    "EX_4_4",
    "EX_4_7",
    "EX_4_8",
    "EX_4_9",
    "EX_4_10",
    "EX_4_11",
    "EX_4_14",
    "EX_4_15",
    "EX_4_16",
    "EX_4_17",
    "EX_4_18",
    "EX_4_19",
    "BLOCKS_2_5",
    "INTERLEAVED_GEO(q)",
    "PROP_4_5(k)",
];

impl FromStr for PresetName {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use PresetName::*;
        let unknown = || ConstructionError::UnknownPreset(s.to_string());
        let name = s.trim().to_ascii_uppercase();
        if let Some(arg) = name.strip_prefix("INTERLEAVED_GEO(").and_then(|r| r.strip_suffix(')')) {
            return parse_rat(arg).map(InterleavedGeo).ok_or_else(unknown);
        }
        if let Some(arg) = name.strip_prefix("PROP_4_5(").and_then(|r| r.strip_suffix(')')) {
            return arg.trim().parse().ok().filter(|k| *k >= 1).map(Prop4_5).ok_or_else(unknown);
        }
        Ok(match name.as_str() {
            "GN_CANTORVAL" => GnCantorval,
            "EX_2_6" => Ex2_6,
            "EX_3_2" => Ex3_2,
            "EX_3_5" => Ex3_5,
            "REM_3_13" => Rem3_13,
            "EX_3_15" => Ex3_15,
            "EX_4_2" => Ex4_2,
            "EX_4_3" => Ex4_3,
            "EX_4_4" => Ex4_4,
            "EX_4_7" => Ex4_7,
            "EX_4_8" => Ex4_8,
            "EX_4_9" => Ex4_9,
            "EX_4_10" => Ex4_10,
            "EX_4_11" => Ex4_11,
            "EX_4_14" => Ex4_14,
            "EX_4_15" => Ex4_15,
            "EX_4_16" => Ex4_16,
            "EX_4_17" => Ex4_17,
            "EX_4_18" => Ex4_18,
            "EX_4_19" => Ex4_19,
            "BLOCKS_2_5" => Blocks2_5,
            _ => return Err(unknown()),
        })
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PresetName::*;
        let s = match self {
            GnCantorval => "GN_CANTORVAL",
            Ex2_6 => "EX_2_6",
            Ex3_2 => "EX_3_2",
            Ex3_5 => "EX_3_5",
            Rem3_13 => "REM_3_13",
            Ex3_15 => "EX_3_15",
            Ex4_2 => "EX_4_2",
            Ex4_3 => "EX_4_3",
            Ex4_4 => "EX_4_4",
            Ex4_7 => "EX_4_7",
            Ex4_8 => "EX_4_8",
            Ex4_9 => "EX_4_9",
            Ex4_10 => "EX_4_10",
            Ex4_11 => "EX_4_11",
            Ex4_14 => "EX_4_14",
            Ex4_15 => "EX_4_15",
            Ex4_16 => "EX_4_16",
            Ex4_17 => "EX_4_17",
            Ex4_18 => "EX_4_18",
            Ex4_19 => "EX_4_19",
            Blocks2_5 => "BLOCKS_2_5",
            InterleavedGeo(q) => return write!(f, "INTERLEAVED_GEO({})", crate::series::fmt_rat(q)),
            Prop4_5(k) => return write!(f, "PROP_4_5({k})"),
        };
        f.write_str(s)
    }
}

impl PresetName {
    /// Every fixed preset, plus one instance of each parameterized family.
    pub fn catalog() -> Vec<PresetName> {
        PRESET_NAMES
            .iter()
            .map(|n| match *n {
                "INTERLEAVED_GEO(q)" => PresetName::InterleavedGeo(rat(1, 5)),
                "PROP_4_5(k)" => PresetName::Prop4_5(3),
                n => n.parse().expect("catalog name"),
            })
            .collect()
    }
}

/// `y_n = 2 / 3^n`: quickly convergent with total 1, so every subsum is
/// obtained once.
pub fn unique_base() -> SeriesSpec {
    SeriesSpec::geometric(rat(2, 1), rat(1, 3)).with_label("unique base")
}

fn on_unique_base(name: &PresetName, multipliers: &[i64]) -> SeriesSpec {
    let ms: Vec<Rat> = multipliers.iter().map(|&m| rat(m, 1)).collect();
    let s = prepend_scaled(&unique_base(), &ms).expect("exact total");
    s.with_label(name.to_string())
}

fn prop_4_5(k: u32) -> SeriesSpec {
    if k == 1 {
        return add_total(&unique_base()).expect("exact total");
    }
    let m = if k.is_multiple_of(2) { 2 } else { 1 };
    prepend_scaled(&prop_4_5(k / 2), &[rat(m, 1)]).expect("exact total")
}

pub fn preset(name: &PresetName) -> Result<SeriesSpec, ConstructionError> {
    use PresetName::*;
    let spec = match name {
        GnCantorval => SeriesSpec::multigeometric(vec![rat(3, 4), rat(2, 4)], rat(1, 4)),
        Ex2_6 => SeriesSpec::multigeometric(vec![rat(1, 2), rat(1, 2)], rat(1, 2)),
        Ex3_2 => SeriesSpec::new(vec![rat(27, 32)], TailSpec::Geometric { c: rat(3, 1), q: rat(1, 4) }),
        Ex3_5 => SeriesSpec::geometric(rat(1, 1), rat(1, 2)),
        Rem3_13 => SeriesSpec::new(vec![rat(1, 2), rat(1, 2)], TailSpec::Geometric { c: rat(1, 2), q: rat(1, 2) }),
        Ex3_15 => {
            let odd = BlockEntry { parts: vec![(Rat::one(), 0), (rat(1, 2), 1)] };
            let tail = BlocksTail { base: 10, sizes: SizeRule::constant(1), pattern: vec![odd, BlockEntry::unit()] };
            SeriesSpec::new(Vec::new(), TailSpec::Blocks(tail))
        }
        Ex4_2 => on_unique_base(name, &[1]),
        Ex4_3 => SeriesSpec::new(
            vec![rat(8, 9), rat(2, 3)],
            TailSpec::Multigeometric { coeffs: vec![rat(1, 10), rat(3, 10)], q: rat(1, 10) },
        ),
        Ex4_4 => on_unique_base(name, &[3, 1]),
        Ex4_7 => on_unique_base(name, &[1, 1]),
        Ex4_8 => on_unique_base(name, &[2, 2, 1]),
        Ex4_9 => on_unique_base(name, &[3, 3, 1]),
        Ex4_10 => on_unique_base(name, &[2, 2, 2]),
        Ex4_11 => on_unique_base(name, &[4, 2, 2, 2]),
        Ex4_14 => on_unique_base(name, &[6, 6, 2, 2, 2]),
        Ex4_15 => on_unique_base(name, &[12, 6, 2, 2, 2, 2]),
        Ex4_16 => on_unique_base(name, &[6, 4, 2, 2, 2]),
        Ex4_17 => on_unique_base(name, &[6, 4, 4, 2, 2]),
        Ex4_18 => on_unique_base(name, &[10, 6, 6, 4, 4]),
        Ex4_19 => on_unique_base(name, &[4, 4, 2, 2, 2]),
        Blocks2_5 => SeriesSpec::new(Vec::new(), TailSpec::Blocks(BlocksTail::new(10, SizeRule::linear()))),
        InterleavedGeo(q) => {
            if *q <= Rat::from_integer(0.into()) || *q >= Rat::one() {
                return Err(crate::series::SpecError::RatioOutOfRange.into());
            }
            interleave(&SeriesSpec::geometric(Rat::one(), q.clone()))?
        }
        Prop4_5(k) => prop_4_5(*k),
    };
    Ok(spec.with_label(name.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ex315Report {
    pub bound: usize,
    /// `(k, family)` pairs where the inequality failed or stayed undecided,
    /// with family 1..=6.
    pub failures: Vec<(usize, u8)>,
}

impl Ex315Report {
    pub fn all_hold(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the six inequality families used for uniqueness in the
/// `EX_3_15` series for `1 <= k <= bound`, comparing against remainder
/// enclosures.
pub fn check_ex_3_15(bound: usize, refine_cap: usize) -> Ex315Report {
    let spec = preset(&PresetName::Ex3_15).expect("preset");
    let x = |n: usize| spec.term(n);
    let mut failures = Vec::new();
    for k in 1..=bound {
        let (a, b) = (2 * k, 2 * k + 1);
        let lhs: [(Rat, usize); 6] = [
            (x(a), a),
            (x(b), a + 2),
            (x(b) - x(b + 1), a + 5),
            (x(b + 1) + x(b + 3) - x(b), a + 4),
            (x(b) + x(b + 2) - x(b + 1) - x(b + 3), a + 4),
            (x(b) + x(b + 3) - x(b + 1) - x(b + 2), a + 4),
        ];
        for (i, (v, n)) in lhs.iter().enumerate() {
            let holds = matches!(spec.remainder(*n).cmp_value(v, refine_cap), Ok(std::cmp::Ordering::Greater));
            if !holds {
                failures.push((k, i as u8 + 1));
            }
        }
    }
    Ex315Report { bound, failures }
}
