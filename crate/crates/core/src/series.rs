//! Series descriptions: a finite prefix of positive rationals followed by a
//! closed-form tail, with exact term and remainder oracles.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number. Always reduced, denominator positive.
pub type Rat = BigRational;

/// Builds `n/d` from machine integers. Panics when `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or an integer literal. Whitespace around the parts is allowed.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rat::from_integer),
    }
}

/// Renders `p/q`, or just `p` for integers.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn pow(q: &Rat, e: u64) -> Rat {
    num_traits::pow(q.clone(), e as usize)
}

/// Block sizes `s_n = a*n + c` for `n >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SizeRule {
    pub a: u64,
    pub c: u64,
}

impl SizeRule {
    pub fn constant(k: u64) -> Self {
        SizeRule { a: 0, c: k }
    }

    /// `s_n = n`.
    pub fn linear() -> Self {
        SizeRule { a: 1, c: 0 }
    }

    pub fn size(&self, n: u64) -> u64 {
        self.a * n + self.c
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if let Ok(k) = s.parse::<u64>() {
            return Some(SizeRule::constant(k));
        }
        let (lin, rest) = s.split_once('n')?;
        let a = match lin.trim_end_matches('*') {
            "" => 1,
            v => v.parse().ok()?,
        };
        let c = match rest {
            "" => 0,
            r => r.strip_prefix('+')?.parse().ok()?,
        };
        Some(SizeRule { a, c })
    }
}

impl fmt::Display for SizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.c) {
            (0, c) => write!(f, "{c}"),
            (1, 0) => write!(f, "n"),
            (1, c) => write!(f, "n+{c}"),
            (a, 0) => write!(f, "{a}n"),
            (a, c) => write!(f, "{a}n+{c}"),
        }
    }
}

/// One pattern slot of a block: the value in block `n` is
/// `sum coef * base^-((n + shift)^2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockEntry {
    pub parts: Vec<(Rat, u64)>,
}

impl BlockEntry {
    pub fn unit() -> Self {
        BlockEntry { parts: vec![(Rat::one(), 0)] }
    }

    /// Parses `coef@shift` terms joined by `+`, e.g. `1@0 + 1/2@1`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut parts = Vec::new();
        for term in s.split('+') {
            let (c, sh) = term.trim().split_once('@')?;
            parts.push((parse_rat(c)?, sh.trim().parse().ok()?));
        }
        Some(BlockEntry { parts })
    }

    fn coef_sum(&self) -> Rat {
        self.parts.iter().map(|(c, _)| c.clone()).sum()
    }
}

impl fmt::Display for BlockEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self
            .parts
            .iter()
            .map(|(c, sh)| format!("{}@{}", fmt_rat(c), sh))
            .collect();
        write!(f, "{}", s.join(" + "))
    }
}

/// Super-exponentially decaying tail. Block `n >= 1` holds `s_n` copies of
/// every pattern entry, entry-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlocksTail {
    pub base: u64,
    pub sizes: SizeRule,
    pub pattern: Vec<BlockEntry>,
}

impl BlocksTail {
    pub fn new(base: u64, sizes: SizeRule) -> Self {
        BlocksTail { base, sizes, pattern: vec![BlockEntry::unit()] }
    }

    pub fn entry_value(&self, entry: usize, n: u64) -> Rat {
        let b = BigInt::from(self.base);
        self.pattern[entry]
            .parts
            .iter()
            .map(|(c, sh)| {
                let e = (n + sh) * (n + sh);
                c / Rat::from_integer(num_traits::pow(b.clone(), e as usize))
            })
            .sum()
    }

    pub fn block_len(&self, n: u64) -> u64 {
        self.sizes.size(n) * self.pattern.len() as u64
    }

    pub fn block_sum(&self, n: u64) -> Rat {
        let s = Rat::from_integer(BigInt::from(self.sizes.size(n)));
        (0..self.pattern.len()).map(|e| self.entry_value(e, n)).sum::<Rat>() * s
    }

    /// Strict upper bound for the sum of all blocks `>= n`.
    pub fn tail_bound(&self, n: u64) -> Rat {
        let c: Rat = self.pattern.iter().map(BlockEntry::coef_sum).sum();
        let b = BigInt::from(self.base);
        let scale = Rat::from_integer(num_traits::pow(b, (n * n) as usize));
        rat(4, 3) * Rat::from_integer(BigInt::from(self.sizes.size(n))) * c / scale
    }

    /// Block, entry and copy of the 0-based tail position `tau`.
    pub fn locate(&self, mut tau: u64) -> (u64, usize, u64) {
        let mut n = 1;
        loop {
            let len = self.block_len(n);
            if tau < len {
                let s = self.sizes.size(n);
                return (n, (tau / s) as usize, tau % s);
            }
            tau -= len;
            n += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TailSpec {
    Zero,
    /// Term `i >= 1` is `c * q^i`.
    Geometric { c: Rat, q: Rat },
    /// Term `i >= 1` is `coeffs[(i-1) % p] * q^((i-1) / p)`.
    Multigeometric { coeffs: Vec<Rat>, q: Rat },
    Blocks(BlocksTail),
}

impl TailSpec {
    /// Coefficients and ratio of a self-similar tail. Geometric tails appear
    /// as one-coefficient multigeometric tails.
    pub fn self_similar(&self) -> Option<(Vec<Rat>, Rat)> {
        match self {
            TailSpec::Geometric { c, q } => Some((vec![c * q], q.clone())),
            TailSpec::Multigeometric { coeffs, q } => Some((coeffs.clone(), q.clone())),
            _ => None,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TailSpec::Zero => "zero",
            TailSpec::Geometric { .. } => "geometric",
            TailSpec::Multigeometric { .. } => "multigeometric",
            TailSpec::Blocks(_) => "blocks",
        }
    }
}

/// Tail data of a self-similar series in block coordinates: `mass[s]` is the
/// remaining tail mass from offset `s` in units of the current block scale.
#[derive(Clone, Debug)]
pub struct Periodic {
    pub coeffs: Vec<Rat>,
    pub q: Rat,
    pub mass: Vec<Rat>,
}

impl Periodic {
    pub fn new(coeffs: Vec<Rat>, q: Rat) -> Self {
        let k: Rat = coeffs.iter().cloned().sum();
        let geo = &q * &k / (Rat::one() - &q);
        let mut mass = vec![Rat::zero(); coeffs.len() + 1];
        mass[coeffs.len()] = geo.clone();
        for s in (0..coeffs.len()).rev() {
            mass[s] = &mass[s + 1] + &coeffs[s];
        }
        Periodic { coeffs, q, mass }
    }

    pub fn period(&self) -> usize {
        self.coeffs.len()
    }

    pub fn term(&self, tau: u64) -> Rat {
        let p = self.period() as u64;
        &self.coeffs[(tau % p) as usize] * pow(&self.q, tau / p)
    }

    /// Tail mass from 0-based position `tau` on.
    pub fn remainder(&self, tau: u64) -> Rat {
        let p = self.period() as u64;
        &self.mass[(tau % p) as usize] * pow(&self.q, tau / p)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecError {
    #[error("term {index} is not positive")]
    NonPositiveTerm { index: usize },
    #[error("ratio not in (0,1)")]
    RatioOutOfRange,
    #[error("multigeometric tail needs at least one coefficient")]
    EmptyCoefficients,
    #[error("tail coefficient {0} is not positive")]
    NonPositiveCoefficient(usize),
    #[error("blocks base must be at least 2")]
    BadBase,
    #[error("block sizes must be positive")]
    BadSizes,
    #[error("blocks pattern is empty or has a nonpositive coefficient")]
    BadPattern,
    #[error("zero term at index {0}")]
    ZeroTerm(usize),
    #[error("operation not supported for {0} tails")]
    Unsupported(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// First index `n` with `x_n < x_{n+1}`.
    pub first_unsorted: Option<usize>,
    /// Index from which the terms are nonincreasing, if they ever are.
    pub sorted_from: Option<usize>,
}

impl ValidationReport {
    pub fn is_sorted(&self) -> bool {
        self.first_unsorted.is_none()
    }
}

/// Raised when an enclosure cannot separate a value from a remainder.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("comparison undecided after {steps} refinements")]
pub struct Undecidable {
    pub steps: usize,
}

/// Mass of a tail: exact, or an enclosure that can be refined.
#[derive(Clone, Debug)]
pub enum Mass {
    Exact(Rat),
    Enclosed(Enclosure),
}

/// `exact + (sum of blocks >= next)`, enclosed in `[lo, hi)`.
#[derive(Clone, Debug)]
pub struct Enclosure {
    exact: Rat,
    tail: BlocksTail,
    next: u64,
    pub lo: Rat,
    pub hi: Rat,
}

impl Enclosure {
    fn new(exact: Rat, tail: BlocksTail, next: u64) -> Self {
        let hi = &exact + tail.tail_bound(next);
        Enclosure { lo: exact.clone(), exact, tail, next, hi }
    }

    /// Adds one more block exactly. The width shrinks by a factor of at least 4.
    pub fn refine(&mut self) {
        self.exact += self.tail.block_sum(self.next);
        self.next += 1;
        self.lo = self.exact.clone();
        self.hi = &self.exact + self.tail.tail_bound(self.next);
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }
}

impl Mass {
    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Mass::Exact(r) => Some(r),
            Mass::Enclosed(_) => None,
        }
    }

    pub fn lo(&self) -> &Rat {
        match self {
            Mass::Exact(r) => r,
            Mass::Enclosed(e) => &e.lo,
        }
    }

    pub fn hi(&self) -> &Rat {
        match self {
            Mass::Exact(r) => r,
            Mass::Enclosed(e) => &e.hi,
        }
    }

    /// Orders `x` against the mass, refining at most `cap` times. An enclosed
    /// mass is never equal to a rational it cannot separate from.
    pub fn cmp_value(&mut self, x: &Rat, cap: usize) -> Result<Ordering, Undecidable> {
        match self {
            Mass::Exact(r) => Ok(x.cmp(r)),
            Mass::Enclosed(e) => {
                for _ in 0..=cap {
                    if *x <= e.lo {
                        return Ok(Ordering::Less);
                    }
                    if *x >= e.hi {
                        return Ok(Ordering::Greater);
                    }
                    e.refine();
                }
                Err(Undecidable { steps: cap })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesSpec {
    pub prefix: Vec<Rat>,
    pub tail: TailSpec,
    pub label: Option<String>,
}

impl SeriesSpec {
    pub fn new(prefix: Vec<Rat>, tail: TailSpec) -> Self {
        SeriesSpec { prefix, tail, label: None }
    }

    pub fn finite(atoms: Vec<Rat>) -> Self {
        SeriesSpec::new(atoms, TailSpec::Zero)
    }

    pub fn geometric(c: Rat, q: Rat) -> Self {
        SeriesSpec::new(Vec::new(), TailSpec::Geometric { c, q })
    }

    pub fn multigeometric(coeffs: Vec<Rat>, q: Rat) -> Self {
        SeriesSpec::new(Vec::new(), TailSpec::Multigeometric { coeffs, q })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn is_finite(&self) -> bool {
        self.tail == TailSpec::Zero
    }

    pub fn periodic(&self) -> Option<Periodic> {
        self.tail.self_similar().map(|(c, q)| Periodic::new(c, q))
    }

    /// The `n`-th term, `n >= 1`.
    pub fn term(&self, n: usize) -> Rat {
        assert!(n >= 1, "terms are indexed from 1");
        if n <= self.prefix.len() {
            return self.prefix[n - 1].clone();
        }
        let tau = (n - self.prefix.len() - 1) as u64;
        match &self.tail {
            TailSpec::Zero => Rat::zero(),
            TailSpec::Geometric { c, q } => c * pow(q, tau + 1),
            TailSpec::Multigeometric { coeffs, q } => {
                let p = coeffs.len() as u64;
                &coeffs[(tau % p) as usize] * pow(q, tau / p)
            }
            TailSpec::Blocks(b) => {
                let (blk, e, _) = b.locate(tau);
                b.entry_value(e, blk)
            }
        }
    }

    /// Number of nonzero terms, if finite.
    pub fn len(&self) -> Option<usize> {
        self.is_finite().then_some(self.prefix.len())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// `r_n`, the sum of all terms after the `n`-th.
    pub fn remainder(&self, n: usize) -> Mass {
        let p = self.prefix.len();
        let head: Rat = if n < p { self.prefix[n..].iter().cloned().sum() } else { Rat::zero() };
        let tau = n.saturating_sub(p) as u64;
        match &self.tail {
            TailSpec::Zero => Mass::Exact(head),
            TailSpec::Geometric { .. } | TailSpec::Multigeometric { .. } => {
                let per = self.periodic().expect("self-similar tail");
                Mass::Exact(head + per.remainder(tau))
            }
            TailSpec::Blocks(b) => {
                let (blk, e, copy) = if tau == 0 { (1, 0, 0) } else { b.locate(tau) };
                let s = b.sizes.size(blk);
                let mut exact = head;
                for entry in e..b.pattern.len() {
                    let copies = if entry == e { s - copy } else { s };
                    exact += b.entry_value(entry, blk) * Rat::from_integer(BigInt::from(copies));
                }
                Mass::Enclosed(Enclosure::new(exact, b.clone(), blk + 1))
            }
        }
    }

    pub fn total(&self) -> Mass {
        self.remainder(0)
    }

    /// Exact total, when the tail admits one.
    pub fn exact_total(&self) -> Option<Rat> {
        self.total().exact().cloned()
    }

    /// Checks positivity and convergence, and locates order violations.
    pub fn validate(&self) -> Result<ValidationReport, SpecError> {
        for (i, x) in self.prefix.iter().enumerate() {
            if !x.is_positive() {
                return Err(SpecError::NonPositiveTerm { index: i + 1 });
            }
        }
        let ratio_ok = |q: &Rat| q.is_positive() && *q < Rat::one();
        match &self.tail {
            TailSpec::Zero => {}
            TailSpec::Geometric { c, q } => {
                if !ratio_ok(q) {
                    return Err(SpecError::RatioOutOfRange);
                }
                if !c.is_positive() {
                    return Err(SpecError::NonPositiveCoefficient(0));
                }
            }
            TailSpec::Multigeometric { coeffs, q } => {
                if !ratio_ok(q) {
                    return Err(SpecError::RatioOutOfRange);
                }
                if coeffs.is_empty() {
                    return Err(SpecError::EmptyCoefficients);
                }
                if let Some(i) = coeffs.iter().position(|c| !c.is_positive()) {
                    return Err(SpecError::NonPositiveCoefficient(i));
                }
            }
            TailSpec::Blocks(b) => {
                if b.base < 2 {
                    return Err(SpecError::BadBase);
                }
                if b.sizes.size(1) == 0 {
                    return Err(SpecError::BadSizes);
                }
                let bad = b.pattern.is_empty()
                    || b.pattern.iter().any(|e| e.parts.is_empty() || e.parts.iter().any(|(c, _)| !c.is_positive()));
                if bad {
                    return Err(SpecError::BadPattern);
                }
            }
        }
        Ok(self.order_report())
    }

    fn order_report(&self) -> ValidationReport {
        let p = self.prefix.len();
        let mut violations: Vec<usize> = Vec::new();
        for i in 1..p {
            if self.prefix[i - 1] < self.prefix[i] {
                violations.push(i);
            }
        }
        let mut eventually = true;
        match &self.tail {
            TailSpec::Zero => {}
            TailSpec::Geometric { .. } | TailSpec::Multigeometric { .. } => {
                let per = self.periodic().expect("self-similar tail");
                if p > 0 && self.prefix[p - 1] < per.term(0) {
                    violations.push(p);
                }
                let k = per.period();
                for s in 0..k {
                    if per.term(s as u64) < per.term(s as u64 + 1) {
                        violations.push(p + s + 1);
                        eventually = false;
                    }
                }
            }
            TailSpec::Blocks(b) => {
                if p > 0 && self.prefix[p - 1] < b.entry_value(0, 1) {
                    violations.push(p);
                }
                // Entry values are compared across the first 32 blocks; beyond
                // that the leading power of the base dominates.
                let mut idx = p;
                for n in 1..=32u64 {
                    let s = b.sizes.size(n) as usize;
                    for e in 0..b.pattern.len() {
                        idx += s;
                        let next = if e + 1 < b.pattern.len() {
                            b.entry_value(e + 1, n)
                        } else {
                            b.entry_value(0, n + 1)
                        };
                        if b.entry_value(e, n) < next {
                            violations.push(idx);
                            if n == 32 {
                                eventually = false;
                            }
                        }
                    }
                }
            }
        }
        violations.sort_unstable();
        ValidationReport {
            first_unsorted: violations.first().copied(),
            sorted_from: eventually.then(|| violations.last().map_or(1, |v| v + 1)),
        }
    }

    /// Multiplies every term by `c > 0`.
    pub fn scaled(&self, c: &Rat) -> SeriesSpec {
        let tail = match &self.tail {
            TailSpec::Zero => TailSpec::Zero,
            TailSpec::Geometric { c: k, q } => TailSpec::Geometric { c: k * c, q: q.clone() },
            TailSpec::Multigeometric { coeffs, q } => TailSpec::Multigeometric {
                coeffs: coeffs.iter().map(|k| k * c).collect(),
                q: q.clone(),
            },
            TailSpec::Blocks(b) => TailSpec::Blocks(BlocksTail {
                pattern: b
                    .pattern
                    .iter()
                    .map(|e| BlockEntry { parts: e.parts.iter().map(|(k, s)| (k * c, *s)).collect() })
                    .collect(),
                ..b.clone()
            }),
        };
        SeriesSpec {
            prefix: self.prefix.iter().map(|x| x * c).collect(),
            tail,
            label: self.label.clone(),
        }
    }

    /// The series with its first `k` terms removed.
    pub fn drop_first(&self, k: usize) -> Result<SeriesSpec, SpecError> {
        let p = self.prefix.len();
        if k <= p {
            return Ok(SeriesSpec::new(self.prefix[k..].to_vec(), self.tail.clone()));
        }
        let per = match &self.tail {
            TailSpec::Zero => return Ok(SeriesSpec::finite(Vec::new())),
            TailSpec::Blocks(_) => return Err(SpecError::Unsupported("blocks")),
            _ => self.periodic().expect("self-similar tail"),
        };
        let tau = (k - p) as u64;
        let period = per.period() as u64;
        let coeffs = (0..period).map(|i| per.term(tau + i)).collect();
        Ok(SeriesSpec::new(Vec::new(), TailSpec::Multigeometric { coeffs, q: per.q }))
    }
}

/// Moves every negative term to the positive side. Returns the absolute
/// series and the shift `s` with `f_signed(t) = f_abs(t + s)`.
///
/// Tail coefficients may be negative here; blocks tails must be positive.
pub fn signed_normalize(prefix: &[Rat], tail: &TailSpec) -> Result<(SeriesSpec, Rat), SpecError> {
    let mut shift = Rat::zero();
    let mut abs_prefix = Vec::with_capacity(prefix.len());
    for (i, x) in prefix.iter().enumerate() {
        if x.is_zero() {
            return Err(SpecError::ZeroTerm(i + 1));
        }
        if x.is_negative() {
            shift -= x;
        }
        abs_prefix.push(x.abs());
    }
    let p = prefix.len();
    let tail = match tail {
        TailSpec::Zero => TailSpec::Zero,
        TailSpec::Geometric { c, q } => {
            if c.is_zero() {
                return Err(SpecError::ZeroTerm(p + 1));
            }
            if c.is_negative() {
                shift += c.abs() * q / (Rat::one() - q);
            }
            TailSpec::Geometric { c: c.abs(), q: q.clone() }
        }
        TailSpec::Multigeometric { coeffs, q } => {
            let mut abs = Vec::with_capacity(coeffs.len());
            for (s, k) in coeffs.iter().enumerate() {
                if k.is_zero() {
                    return Err(SpecError::ZeroTerm(p + s + 1));
                }
                if k.is_negative() {
                    shift += k.abs() / (Rat::one() - q);
                }
                abs.push(k.abs());
            }
            TailSpec::Multigeometric { coeffs: abs, q: q.clone() }
        }
        TailSpec::Blocks(b) => TailSpec::Blocks(b.clone()),
    };
    let spec = SeriesSpec::new(abs_prefix, tail);
    spec.validate()?;
    Ok((spec, shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat(" 3 / 6 "), Some(rat(1, 2)));
        assert_eq!(parse_rat("-4"), Some(rat(-4, 1)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(parse_rat("x"), None);
        assert_eq!(fmt_rat(&rat(6, 3)), "2");
        assert_eq!(fmt_rat(&rat(-3, 9)), "-1/3");
    }

    #[test]
    fn size_rules() {
        assert_eq!(SizeRule::parse("n"), Some(SizeRule::linear()));
        assert_eq!(SizeRule::parse("3"), Some(SizeRule::constant(3)));
        assert_eq!(SizeRule::parse("2n+1"), Some(SizeRule { a: 2, c: 1 }));
        assert_eq!(SizeRule::parse("2*n"), Some(SizeRule { a: 2, c: 0 }));
        for r in ["n", "3", "2n+1", "n+4"] {
            assert_eq!(SizeRule::parse(r).unwrap().to_string(), r);
        }
    }

    #[test]
    fn locate_in_blocks() {
        let b = BlocksTail::new(10, SizeRule::linear());
        assert_eq!(b.locate(0), (1, 0, 0));
        assert_eq!(b.locate(1), (2, 0, 0));
        assert_eq!(b.locate(2), (2, 0, 1));
        assert_eq!(b.locate(3), (3, 0, 0));
    }

    #[test]
    fn enclosure_brackets_partial_sums() {
        let spec = SeriesSpec::new(Vec::new(), TailSpec::Blocks(BlocksTail::new(10, SizeRule::linear())));
        let Mass::Enclosed(mut e) = spec.remainder(0) else { panic!() };
        let mut w = e.width();
        for _ in 0..4 {
            e.refine();
            assert!(e.width() * rat(8, 1) <= w);
            w = e.width();
        }
        // Blocks 1..=5 are now exact; block 6 holds terms 16..=21.
        let exact: Rat = (1..=15).map(|n| spec.term(n)).sum();
        assert_eq!(e.lo, exact);
        let more: Rat = (1..=21).map(|n| spec.term(n)).sum();
        assert!(e.lo < more && more < e.hi);
    }
}
