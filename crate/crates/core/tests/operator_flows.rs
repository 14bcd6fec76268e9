//! Cross-module flows exercised end to end on reduced fixtures.

use czlab_core::dyadic::sparse_avg_operator;
use czlab_core::maximal::OrliczGauge;
use czlab_core::singular::CommutatorProfile;
use czlab_core::weights::{conjugated_maximal, weak11_estimator, PowerWeight};
use czlab_core::{Grid64, Interval64, SampledFunction64, SparseFamily64};

fn unit() -> Interval64 {
    Interval64::new(0.0, 1.0).unwrap()
}

#[test]
fn commutator_level_sets_clear_the_subgaussian_floor() {
    // reduced version of the decay experiment: 2^12 log-uniform cells
    let profile = CommutatorProfile::<f64>::new(1e-7).unwrap();
    let grid = Grid64::log_uniform(unit(), 1 << 12).unwrap();
    let f = SampledFunction64::sample(grid, |x| profile.eval(1.0 / x).unwrap()).unwrap();
    let thresholds: Vec<f64> = (0..26).map(|k| 10.0 + 2.0 * k as f64).collect();
    let curve = f.level_set_curve(&thresholds).unwrap();
    let resolved = curve.resolved();
    assert!(resolved.len() >= 20);
    for (t, mu) in resolved {
        assert!(mu >= (-(2.2 * t).sqrt()).exp(), "t = {t}");
    }
}

#[test]
fn log_gauge_sparse_operator_dominates_the_plain_one() {
    let grid = Grid64::uniform(unit(), 512).unwrap();
    let f = SampledFunction64::sample(grid, |x| 1.0 + (6.0 * x).sin().abs()).unwrap();
    let family = SparseFamily64::chain(unit(), 7);
    let a = sparse_avg_operator(&family, &f, &OrliczGauge::plain()).unwrap();
    let b = sparse_avg_operator(&family, &f, &OrliczGauge::l_log_l()).unwrap();
    assert!(a.same_grid(&b));
    for i in 0..a.n_cells() {
        assert!(b.values()[i] >= a.values()[i] - 1e-12);
    }
}

#[test]
fn conjugated_operator_weak_norm_exceeds_every_level() {
    // w M(f/w) on a truncation has weak-(1,1) mass growing with the radius;
    // on one fixed truncation the estimator already dwarfs ||f||_1 = 1
    let w = PowerWeight::from_delta_p(0.5, 2.0).unwrap();
    let grid = Grid64::log_uniform(Interval64::new(0.0, 10_000.0).unwrap(), 1 << 15).unwrap();
    let f = SampledFunction64::sample(grid, |x| if x < 1.0 { 1.0 } else { 0.0 }).unwrap();
    let g = conjugated_maximal(&w, &f).unwrap();
    let tail = g.restrict(&Interval64::new(1.0, 10_000.0).unwrap()).unwrap();
    let t_grid: Vec<f64> = (1..=200).map(|k| 0.002 * k as f64).collect();
    let est = weak11_estimator(&tail, &t_grid).unwrap();
    assert!(est > 50.0, "estimator {est} should scale like sqrt(R) = 100");
}
