mod common;

use common::oracles::{random_instance, vertex_oracle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tammes::lp::{farkas_gap, lagrangian_bound, solve, tighten_box, LpStatus, Sense, TightenResult, FARKAS_GAP};

/// Solver against vertex enumeration on 500 random bounded instances with up
/// to 12 variables; every infeasibility claim must carry a valid certificate.
#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut optimal, mut infeasible) = (0, 0);
    for inst in 0..500 {
        let (n, m) = if inst % 25 == 0 { (rng.gen_range(9..=12), rng.gen_range(1..=2)) } else { (rng.gen_range(1..=6), rng.gen_range(1..=5)) };
        let (r, c) = random_instance(&mut rng, n, m);
        let sense = if rng.gen_bool(0.5) { Sense::Min } else { Sense::Max };
        let out = solve(&r, &c, sense);
        match vertex_oracle(&r, &c, sense) {
            Some(v) => {
                assert_eq!(out.status, LpStatus::Optimal, "instance {inst}: oracle optimum {v}");
                let got = out.value.unwrap();
                assert!((got - v).abs() <= 1e-7 * (1.0 + v.abs()), "instance {inst}: {got} vs {v}");
                assert!(r.max_violation(out.witness.as_ref().unwrap()) <= 1e-8);
                optimal += 1;
            }
            None => {
                assert_eq!(out.status, LpStatus::Infeasible, "instance {inst}");
                let y = out.farkas.as_ref().expect("certificate");
                assert!(farkas_gap(&r, y) > FARKAS_GAP, "instance {inst}: weak certificate");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 100 && infeasible > 20, "optimal {optimal} infeasible {infeasible}");
}

#[test]
fn dual_bounds_are_valid() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let (r, c) = random_instance(&mut rng, 4, 3);
        let out = solve(&r, &c, Sense::Min);
        if out.status == LpStatus::Optimal {
            let b = out.dual_bound.unwrap();
            assert!(b <= out.value.unwrap() + 1e-9);
            assert!(b >= out.value.unwrap() - 1e-7);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    /// Tightening never cuts off a feasible point.
    #[test]
    fn tightening_keeps_feasible_points(seed in any::<u64>(), n in 1usize..6, m in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, _) = random_instance(&mut rng, n, m);
        let feasible: Vec<Vec<f64>> = (0..200)
            .map(|_| (0..n).map(|j| rng.gen_range(r.lo[j]..=r.hi[j])).collect::<Vec<f64>>())
            .filter(|x| r.max_violation(x) <= 0.0)
            .collect();
        match tighten_box(&r) {
            TightenResult::Infeasible { farkas } => {
                prop_assert!(feasible.is_empty());
                prop_assert!(r.box_empty() || farkas_gap(&r, &farkas) > FARKAS_GAP);
            }
            TightenResult::Tightened { relax, .. } => {
                for x in &feasible {
                    for j in 0..n {
                        prop_assert!(x[j] >= relax.lo[j] - 1e-9 && x[j] <= relax.hi[j] + 1e-9);
                    }
                }
            }
        }
    }

    /// Any multiplier vector gives a lower bound.
    #[test]
    fn lagrangian_bounds_are_lower_bounds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (r, c) = random_instance(&mut rng, 3, 3);
        let y: Vec<f64> = (0..r.rows.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b = lagrangian_bound(&r, &c, &y);
        for _ in 0..100 {
            let x: Vec<f64> = (0..3).map(|j| rng.gen_range(r.lo[j]..=r.hi[j])).collect();
            if r.max_violation(&x) <= 0.0 {
                let v: f64 = c.iter().zip(&x).map(|(a, b)| a * b).sum();
                prop_assert!(b <= v + 1e-9);
            }
        }
    }
}

