use std::collections::BTreeSet;

use subsum::constructions::{
    add_m_double_totals, add_m_totals, add_total, add_two_totals, check_ex_3_15, finite_range, preset, product,
    search_finite_ranges, search_finite_ranges_with, unique_base, FiniteMeasure, PresetName,
};
use subsum::counter::{count, range_scan, Cardinality, CountOptions};
use subsum::series::{rat, Rat, SeriesSpec};

use Cardinality::*;

fn observed(spec: &SeriesSpec) -> Vec<Cardinality> {
    let depth = spec.prefix.len() + 6;
    let r = range_scan(spec, depth, &CountOptions::default(), &[]).unwrap();
    assert!(!r.budget_limited());
    r.range()
}

fn fins(v: &[u64]) -> Vec<Cardinality> {
    v.iter().map(|&k| Fin(k)).collect()
}

fn p(name: &str) -> SeriesSpec {
    preset(&name.parse::<PresetName>().unwrap()).unwrap()
}

#[test]
fn binomial_totals() {
    let s = add_m_totals(&unique_base(), 3).unwrap();
    let counts: Vec<Cardinality> = (0..=4)
        .map(|k| count(&s, &rat(k, 1), &CountOptions::default()).unwrap().cardinality)
        .collect();
    assert_eq!(counts, fins(&[1, 4, 6, 4, 1]));
}

#[test]
fn twelve_law_rows() {
    let u = unique_base();
    assert_eq!(observed(&add_total(&u).unwrap()), fins(&[1, 2]));
    assert_eq!(observed(&add_two_totals(&u).unwrap()), fins(&[1, 2, 3]));
    assert_eq!(observed(&add_m_double_totals(&u, 3).unwrap()), fins(&[1, 3]));
    let e12 = add_total(&u).unwrap();
    assert_eq!(observed(&add_two_totals(&e12).unwrap()), fins(&[1, 2, 3, 4]));
    assert_eq!(observed(&add_m_double_totals(&e12, 2).unwrap()), fins(&[1, 2, 4]));
    assert_eq!(observed(&add_m_double_totals(&u, 4).unwrap()), fins(&[1, 4, 6]));
    assert_eq!(observed(&add_m_totals(&u, 3).unwrap()), fins(&[1, 3, 4, 6]));
}

#[test]
fn example_rows() {
    for (name, r) in [
        ("EX_4_7", &[1, 2, 3][..]),
        ("EX_4_8", &[1, 2, 3, 4]),
        ("EX_4_9", &[1, 2, 4]),
        ("EX_4_10", &[1, 3]),
        ("EX_4_11", &[1, 3, 4]),
        ("EX_4_14", &[1, 3, 6]),
        ("EX_4_15", &[1, 4, 5, 6]),
        ("EX_4_16", &[1, 3, 4, 5, 6]),
        ("EX_4_17", &[1, 2, 3, 5]),
        ("EX_4_18", &[1, 2, 4, 5]),
        ("EX_4_19", &[1, 3, 5, 7]),
    ] {
        assert_eq!(observed(&p(name)), fins(r), "{name}");
    }
}

#[test]
fn single_double_point_examples() {
    for name in ["EX_4_2", "EX_4_4"] {
        assert_eq!(observed(&p(name)), fins(&[1, 2]), "{name}");
    }
    // The doubly obtained value is the sum of the odd-indexed terms.
    let s = p("EX_4_3");
    let r = range_scan(&s, 8, &CountOptions::default(), &[rat(1, 1)]).unwrap();
    assert_eq!(r.range(), fins(&[1, 2]));
    assert_eq!(r.get(&rat(1, 1)).unwrap().cardinality, Some(Fin(2)));
}

#[test]
fn m_double_totals_law() {
    // Union over k of C(m, k) * E for a base with E = {1, 2}.
    let e12 = add_total(&unique_base()).unwrap();
    for m in 1..=3usize {
        let binoms: Vec<u64> = (0..=m as u64).map(|k| (0..k).fold(1, |a, i| a * (m as u64 - i) / (i + 1))).collect();
        let mut want: BTreeSet<u64> = BTreeSet::new();
        for b in &binoms {
            want.insert(*b);
            want.insert(2 * b);
        }
        let got: BTreeSet<u64> = observed(&add_m_double_totals(&e12, m).unwrap())
            .into_iter()
            .map(|c| match c {
                Fin(k) => k,
                other => panic!("{other}"),
            })
            .collect();
        assert_eq!(got, want, "m = {m}");
    }
}

#[test]
fn products() {
    let nu = unique_base();
    let tau = FiniteMeasure::from_integers(&[1, 1]).unwrap();
    assert_eq!(observed(&product(&tau, &nu).unwrap()), fins(&[1, 2]));
    let tau = FiniteMeasure::from_integers(&[3, 2, 1]).unwrap();
    let doubled = p("EX_2_6");
    assert_eq!(observed(&product(&tau, &doubled).unwrap()), vec![Fin(1), Fin(2), Continuum]);
    let tau = FiniteMeasure::from_integers(&[1, 2, 4]).unwrap();
    assert_eq!(observed(&product(&tau, &nu).unwrap()), fins(&[1]));
}

#[test]
fn binary_tree_double_points() {
    for k in 1..=5u32 {
        let s = preset(&PresetName::Prop4_5(k)).unwrap();
        let r = range_scan(&s, s.prefix.len() + 6, &CountOptions::default(), &[]).unwrap();
        let non_unique: Vec<_> = r.entries.iter().filter(|e| e.cardinality != Some(Fin(1))).collect();
        assert_eq!(non_unique.len(), k as usize, "k = {k}");
        assert!(non_unique.iter().all(|e| e.cardinality == Some(Fin(2))));
    }
}

#[test]
fn block_family_inequalities() {
    let r = check_ex_3_15(15, 64);
    assert!(r.all_hold(), "{:?}", r.failures);
}

#[test]
fn finite_search() {
    let t = |v: &[u64]| v.iter().copied().collect::<BTreeSet<u64>>();
    assert!(search_finite_ranges(&t(&[1, 2]), 2, 2).contains(&FiniteMeasure::from_integers(&[1, 1]).unwrap()));
    assert!(search_finite_ranges(&t(&[1]), 3, 4).contains(&FiniteMeasure::from_integers(&[4, 2, 1]).unwrap()));
    for m in search_finite_ranges(&t(&[1, 2, 3]), 3, 4) {
        assert_eq!(finite_range(&m).unwrap().range, t(&[1, 2, 3]));
    }
}

#[test]
fn distinct_atom_filter_agrees_with_unpruned() {
    let t: BTreeSet<u64> = [1, 4].into_iter().collect();
    for atoms in 1..=3 {
        let pruned = search_finite_ranges_with(&t, atoms, 12, true);
        let full = search_finite_ranges_with(&t, atoms, 12, false);
        assert_eq!(pruned, full);
        for m in &full {
            let distinct: BTreeSet<&Rat> = m.atoms.iter().collect();
            assert_eq!(distinct.len(), m.atoms.len());
        }
    }
}
