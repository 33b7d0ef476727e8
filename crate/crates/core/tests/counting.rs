use subsum::counter::{
    block_count, build_graph, classify_paths, count, enumerate_reps, greedy_segments, omega_dense_witness,
    quasiregular_expand, range_scan, Cardinality, CountError, CountOptions, Limits, Node, Representation,
    TailAction,
};
use subsum::series::{rat, BlocksTail, Rat, SeriesSpec, SizeRule, TailSpec};

use Cardinality::*;

fn half() -> SeriesSpec {
    SeriesSpec::geometric(rat(1, 1), rat(1, 2))
}

fn interleaved_fifth() -> SeriesSpec {
    SeriesSpec::multigeometric(vec![rat(1, 4), rat(1, 5)], rat(1, 5))
}

fn doubled_half() -> SeriesSpec {
    SeriesSpec::multigeometric(vec![rat(1, 2), rat(1, 2)], rat(1, 2))
}

fn c(spec: &SeriesSpec, t: Rat) -> Cardinality {
    count(spec, &t, &CountOptions::default()).unwrap().cardinality
}

#[test]
fn dyadic_values() {
    let s = half();
    assert_eq!(c(&s, rat(1, 3)), Fin(1));
    assert_eq!(c(&s, rat(1, 2)), Fin(2));
    assert_eq!(c(&s, rat(3, 8)), Fin(2));
    assert_eq!(c(&s, rat(0, 1)), Fin(1));
    assert_eq!(c(&s, rat(1, 1)), Fin(1));
    let r = count(&s, &rat(1, 2), &CountOptions::default()).unwrap();
    assert_eq!(r.witnesses, vec![Representation::finite([1]), Representation::all_from([], 2)]);
}

#[test]
fn half_graph_has_both_closures() {
    let g = build_graph(&half(), &rat(1, 2), Limits::default()).unwrap();
    assert!(g.nodes.contains(&Node::ZeroClosure));
    assert!(g.nodes.contains(&Node::FullClosure));
    assert_eq!(classify_paths(&g), Fin(2));
    assert!(matches!(build_graph(&half(), &rat(3, 1), Limits::default()), Err(CountError::TargetOutOfRange)));
}

#[test]
fn doubled_half_is_continuum_inside() {
    let s = doubled_half();
    let g = build_graph(&s, &rat(1, 1), Limits::default()).unwrap();
    assert!(!g.double_cycle_states().is_empty());
    for t in [rat(1, 4), rat(1, 2), rat(1, 1), rat(3, 2)] {
        assert_eq!(c(&s, t), Continuum);
    }
    assert_eq!(c(&s, rat(0, 1)), Fin(1));
    assert_eq!(c(&s, rat(2, 1)), Fin(1));
}

#[test]
fn interleaved_fifth_items() {
    let s = interleaved_fifth();
    assert_eq!(c(&s, rat(1, 4)), Omega);
    assert_eq!(c(&s, rat(1, 5)), Fin(1));
    assert_eq!(c(&s, rat(1, 5) + rat(1, 125)), Fin(1));
    assert_eq!(c(&s, rat(1, 20)), Omega);
    assert_eq!(c(&s, rat(1, 96)), Continuum);
    assert_eq!(c(&s, rat(7, 24)), Fin(2));
}

#[test]
fn infinite_counts_carry_infinite_witnesses() {
    let s = interleaved_fifth();
    for t in [rat(1, 4), rat(1, 20), rat(1, 96)] {
        let r = count(&s, &t, &CountOptions::default()).unwrap();
        assert!(r.witnesses.iter().any(Representation::is_infinite), "{t}");
        for w in &r.witnesses {
            if let Some(sum) = w.sum(&s) {
                assert_eq!(sum, t, "{w}");
            }
        }
    }
}

#[test]
fn enumeration_examples() {
    let e = enumerate_reps(&half(), &rat(1, 2), 10).unwrap();
    assert_eq!(e.reps, vec![Representation::finite([1]), Representation::all_from([], 2)]);
    assert!(!e.truncated);
    let third = SeriesSpec::geometric(rat(1, 1), rat(1, 3));
    assert_eq!(enumerate_reps(&third, &rat(1, 3), 10).unwrap().reps, vec![Representation::finite([1])]);
    assert_eq!(enumerate_reps(&doubled_half(), &rat(2, 1), 3).unwrap().reps, vec![Representation::all_from([], 1)]);
    let inf = enumerate_reps(&doubled_half(), &rat(1, 1), 3).unwrap();
    assert_eq!(inf.reps.len(), 3);
    assert!(inf.truncated);
}

#[test]
fn quasiregular_digits() {
    let e = quasiregular_expand(&half(), &rat(1, 3), 8).unwrap();
    assert_eq!(e.digits, vec![false, true, false, true, false, true, false, true]);
    assert_eq!(
        e.closure,
        Some(Representation { support: Default::default(), tail: TailAction::Cycle { start: 1, word: vec![false, true] } })
    );
    let e = quasiregular_expand(&half(), &rat(1, 2), 4).unwrap();
    assert_eq!(e.digits, vec![false, true, true, true]);
    assert_eq!(e.closure, Some(Representation::all_from([], 2)));
    let e = quasiregular_expand(&half(), &rat(1, 1), 4).unwrap();
    assert!(e.digits.iter().all(|&d| d));
    assert!(quasiregular_expand(&half(), &rat(2, 1), 4).is_err());
}

#[test]
fn segment_greedy() {
    let e = greedy_segments(&half(), &rat(1, 4), 2).unwrap();
    assert_eq!(e.closure, Some(Representation::all_from([], 3)));
    let s = SeriesSpec::geometric(rat(1, 1), rat(3, 5));
    let e = greedy_segments(&s, &rat(3, 5), 1).unwrap();
    assert_eq!(e.segments()[0], (2, 3));
    assert!(!e.digits[2]);
    let third = SeriesSpec::geometric(rat(1, 1), rat(1, 3));
    assert!(matches!(greedy_segments(&third, &rat(1, 4), 0), Err(CountError::Precondition(_))));
}

#[test]
fn segment_partial_sums_stay_close() {
    let s = SeriesSpec::geometric(rat(1, 1), rat(3, 5));
    let t = rat(3, 5);
    let e = greedy_segments(&s, &t, 1).unwrap();
    let mut acc = rat(0, 1);
    for (a, b) in e.segments() {
        acc += (a..=b).map(|n| s.term(n)).sum::<Rat>();
        let gap = if acc > t { &acc - &t } else { &t - &acc };
        assert!(gap <= s.term(b + 1), "segment ending at {b}");
    }
}

#[test]
fn block_products() {
    assert_eq!(block_count(&[2], &[1], false), Fin(2));
    assert_eq!(block_count(&[2, 3], &[1, 1], false), Fin(6));
    assert_eq!(block_count(&[], &[], true), Continuum);
}

#[test]
fn blocks_enumeration() {
    let s = SeriesSpec::new(Vec::new(), TailSpec::Blocks(BlocksTail::new(10, SizeRule::linear())));
    // A single atom of block 2.
    let r = count(&s, &rat(1, 10_000), &CountOptions::default()).unwrap();
    assert_eq!(r.cardinality, Fin(2));
    assert_eq!(r.witnesses, vec![Representation::finite([2]), Representation::finite([3])]);
    let r = count(&s, &rat(1, 10_000), &CountOptions::default().with_budget(1)).unwrap();
    assert!(!r.cardinality.is_exact());
}

#[test]
fn dense_omega_points() {
    let s = interleaved_fifth();
    let w = omega_dense_witness(&s, &rat(0, 1), &rat(1, 100)).unwrap();
    assert!(w.u <= rat(1, 100));
    assert_eq!(w.result.cardinality, Omega);
    let base_remainders: Vec<Rat> = (0..12).map(|k| rat(1, 4) / Rat::from_integer(5.into()).pow(k)).collect();
    assert!(base_remainders.contains(&w.u), "{}", w.u);

    let third = SeriesSpec::geometric(rat(1, 1), rat(1, 3));
    assert!(matches!(omega_dense_witness(&third, &rat(1, 3), &rat(1, 10)), Err(CountError::NoOmegaPoint)));

    let w = omega_dense_witness(&doubled_half(), &rat(1, 2), &rat(1, 1)).unwrap();
    assert_eq!(w.u, rat(1, 2));
    assert_eq!(w.result.cardinality, Continuum);
}

#[test]
fn scans() {
    let third = SeriesSpec::geometric(rat(1, 1), rat(1, 3));
    let r = range_scan(&third, 6, &CountOptions::default(), &[]).unwrap();
    assert_eq!(r.range(), vec![Fin(1)]);
    let r = range_scan(&doubled_half(), 6, &CountOptions::default(), &[]).unwrap();
    assert_eq!(r.range(), vec![Fin(1), Continuum]);
}

#[test]
fn three_fifths_witness_has_infinite_lower_bound() {
    let s = SeriesSpec::geometric(rat(1, 1), rat(3, 5));
    let w = subsum::counter::omega_witness(&s).unwrap();
    let r = count(&s, &w.t, &CountOptions::default()).unwrap();
    assert!(r.diagnostics.infinite_lower_bound);
    assert!(r.diagnostics.budget_limited);
    assert!(r.witnesses.iter().any(Representation::is_infinite));
}
