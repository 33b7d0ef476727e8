use proptest::prelude::*;
use subsum::constructions::{preset, unique_base, PresetName};
use subsum::counter::{count, Cardinality, CountOptions, CountResult};
use subsum::series::{rat, signed_normalize, Rat, SeriesSpec, TailSpec};
use subsum::topology::{classify, convergence_profile, cover, subset_sums, Decision, TopologyClass};

use Cardinality::*;

fn catalog() -> Vec<(String, SeriesSpec)> {
    PresetName::catalog().into_iter().map(|n| (n.to_string(), preset(&n).unwrap())).collect()
}

fn targets(spec: &SeriesSpec) -> Vec<Rat> {
    let depth = (spec.prefix.len() + 3).min(9);
    let mut t: Vec<Rat> = subset_sums(spec, depth).into_iter().collect();
    t.extend((0..4).filter_map(|k| spec.remainder(k).exact().cloned()));
    t.sort();
    t.dedup();
    t
}

fn run(spec: &SeriesSpec, t: &Rat) -> CountResult {
    count(spec, t, &CountOptions::default()).unwrap()
}

#[test]
fn quick_series_are_unique_everywhere() {
    let mut seen = 0;
    let extra = [
        ("unique base".to_string(), unique_base()),
        ("geometric 1/4".to_string(), SeriesSpec::geometric(rat(1, 1), rat(1, 4))),
        ("bigeometric 1/5".to_string(), SeriesSpec::multigeometric(vec![rat(3, 1), rat(1, 1)], rat(1, 5))),
    ];
    for (name, s) in catalog().into_iter().chain(extra) {
        // No catalog entry is quick; the extras make the check bite.
        if convergence_profile(&s).map(|p| p.quick) != Ok(Decision::Yes) {
            continue;
        }
        seen += 1;
        for t in targets(&s) {
            assert_eq!(run(&s, &t).cardinality, Fin(1), "{name} t = {t}");
        }
    }
    assert!(seen > 0);
}

#[test]
fn interval_ranges_repeat_finite_sums() {
    let mut seen = 0;
    for (name, s) in catalog() {
        if !matches!(classify(&s), Ok(TopologyClass::IntervalUnion(ref c)) if c.len() == 1) {
            continue;
        }
        seen += 1;
        for t in subset_sums(&s, (s.prefix.len() + 3).min(8)) {
            if t == rat(0, 1) {
                continue;
            }
            let c = run(&s, &t).cardinality;
            assert!(c.is_infinite() || matches!(c, Fin(k) | AtLeast(k) if k >= 2), "{name} t = {t}: {c}");
        }
    }
    assert!(seen > 0);
}

#[test]
fn property_chain_on_geometric_ratios() {
    for d in 2..=40i64 {
        for n in 1..d {
            let s = SeriesSpec::geometric(rat(1, 1), rat(n, d));
            let p = convergence_profile(&s).unwrap();
            if p.property_a == Decision::Yes {
                assert_eq!(p.property_b, Decision::Yes, "{n}/{d}");
            }
            if p.property_b == Decision::Yes {
                assert_eq!(p.quick, Decision::Yes, "{n}/{d}");
            }
            let class = classify(&s).unwrap();
            if 2 * n < d {
                assert_eq!(class, TopologyClass::CantorSet, "{n}/{d}");
            } else {
                assert_eq!(class, TopologyClass::IntervalUnion(vec![(rat(0, 1), s.exact_total().unwrap())]), "{n}/{d}");
            }
        }
    }
}

fn small_rat(max: i64) -> impl Strategy<Value = Rat> {
    (1..=max, 1..=max).prop_map(|(n, d)| rat(n, d))
}

fn ratio() -> impl Strategy<Value = Rat> {
    (2i64..=12).prop_flat_map(|d| (1..d).prop_map(move |n| rat(n, d)))
}

fn self_similar() -> impl Strategy<Value = SeriesSpec> {
    (prop::collection::vec(small_rat(9), 0..=3), prop::collection::vec(small_rat(9), 1..=2), ratio())
        .prop_map(|(prefix, mut coeffs, q)| {
            coeffs.sort_by(|a, b| b.cmp(a));
            SeriesSpec::new(prefix, TailSpec::Multigeometric { coeffs, q })
        })
        .prop_filter("tail eventually nonincreasing", |s| s.validate().is_ok_and(|v| v.sorted_from.is_some()))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn scaling_preserves_counts(s in self_similar(), c in small_rat(7), depth in 0usize..4) {
        let sums = subset_sums(&s, depth);
        let scaled = s.scaled(&c);
        let opts = CountOptions::default().with_budget(20_000);
        for t in sums.iter().take(6) {
            let a = count(&s, t, &opts).unwrap().cardinality;
            let b = count(&scaled, &(t * &c), &opts).unwrap().cardinality;
            if a.is_exact() && b.is_exact() {
                prop_assert_eq!(a, b, "t = {}", t);
            }
        }
    }

    #[test]
    fn boundedness_transfers_to_finite_prefix(atoms in prop::collection::vec(small_rat(16), 1..=8)) {
        // A finite series never yields an infinite count.
        let s = SeriesSpec::finite(atoms);
        for t in subset_sums(&s, 8) {
            prop_assert!(!run(&s, &t).cardinality.is_infinite());
        }
    }

    #[test]
    fn signed_normalize_shifts_the_grid(signs in prop::collection::vec(any::<bool>(), 1..=6),
                                        atoms in prop::collection::vec(small_rat(12), 6)) {
        let signed: Vec<Rat> = signs.iter().zip(&atoms).map(|(neg, a)| if *neg { -a.clone() } else { a.clone() }).collect();
        let (abs, shift) = signed_normalize(&signed, &TailSpec::Zero).unwrap();
        let n = signed.len();
        for mask in 0u32..(1 << n) {
            let signed_sum: Rat = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| signed[i].clone()).sum();
            let brute = (0..1u32 << n)
                .filter(|m| (0..n).filter(|i| m >> i & 1 == 1).map(|i| signed[i].clone()).sum::<Rat>() == signed_sum)
                .count() as u64;
            prop_assert_eq!(run(&abs, &(&signed_sum + &shift)).cardinality, Fin(brute));
        }
    }

    #[test]
    fn remainder_recurrence_holds(s in self_similar()) {
        for n in 1..=64 {
            let prev = s.remainder(n - 1).exact().cloned().unwrap();
            let next = s.remainder(n).exact().cloned().unwrap();
            prop_assert_eq!(prev, s.term(n) + next, "n = {}", n);
        }
    }

    #[test]
    fn covers_refine_monotonically(s in self_similar(), depth in 1usize..7) {
        let coarse = cover(&s, depth).unwrap();
        let fine = cover(&s, depth + 1).unwrap();
        for (lo, hi) in &fine {
            prop_assert!(coarse.iter().any(|(a, b)| a <= lo && hi <= b), "[{}, {}]", lo, hi);
        }
    }
}
