mod common;

use std::f64::consts::PI;
use tammes::cli::small_n::{direct_optimum, fejes_toth_bound, pipeline_optimum, verify_small_n, SmallNConfig};

/// Tetrahedral angle, the optimum for four points.
fn tetrahedral() -> f64 {
    (-1.0f64 / 3.0).acos()
}

#[test]
fn generator_counts() {
    let counts: Vec<usize> = (4..=8).map(|n| common::min_degree3_graphs(n, 6).len()).collect();
    assert_eq!(counts, vec![1, 2, 9, 46, 385]);
}

#[test]
fn symmetric_optima_are_recovered() {
    let cfg = SmallNConfig::default();
    for (n, want) in [(4, tetrahedral()), (6, PI / 2.0)] {
        let p = pipeline_optimum(n, &common::min_degree3_graphs(n, 6), &cfg).unwrap();
        assert!(p.lower <= p.upper && p.upper <= p.window_top);
        assert!(p.upper - p.lower <= 2.0 * cfg.tol && p.lower <= p.fejes_toth + 1e-9);
        assert!((p.optimum() - want).abs() < 1e-6, "n {n}: {} vs {want}", p.optimum());
        assert!(!p.survivors.is_empty());
    }
}

#[test]
fn oracle_finds_known_optima() {
    assert!((direct_optimum(4, 8, 1).d - tetrahedral()).abs() < 1e-4);
    assert!((direct_optimum(6, 8, 1).d - PI / 2.0).abs() < 1e-4);
    assert!(direct_optimum(7, 8, 1).d <= fejes_toth_bound(7));
}

#[test]
fn verification_report_is_consistent() {
    let graphs = common::min_degree3_graphs(6, 6);
    let r = verify_small_n(6, &graphs, &SmallNConfig::default()).unwrap();
    assert!(r.agrees);
    assert!((r.difference - (r.pipeline.optimum() - r.oracle.d).abs()).abs() < 1e-15);
}

#[test]
fn unsupported_inputs_are_rejected() {
    assert!(pipeline_optimum(2, &[], &SmallNConfig::default()).is_err());
    assert!(pipeline_optimum(6, &[], &SmallNConfig::default()).is_err());
}
