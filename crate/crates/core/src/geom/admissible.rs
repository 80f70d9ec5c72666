//! Membership tests and grid samplers for the admissible pentagon and hexagon
//! angle sets: convex, every angle at least `alpha(d)`, and every Danzer flip
//! blocked (or, for a hexagon hosting an isolated vertex, `lambda >= d`).

use super::{
    alpha_raw, complete_raw, flip_blocking_distance, hexagon_lambda, EquilateralPolygon,
    HexagonSolution, PentagonSolution,
};
use std::f64::consts::PI;

fn admissible_common<const M: usize>(sol: &EquilateralPolygon<M>) -> bool {
    if sol.check_convex().is_err() {
        return false;
    }
    let a = alpha_raw(sol.d);
    sol.angles.iter().all(|&u| u >= a - 1e-12)
}

fn flips_blocked<const M: usize>(sol: &EquilateralPolygon<M>) -> bool {
    (0..M).all(|i| flip_blocking_distance(i, sol) < sol.d)
}

/// Pentagon face of an irreducible graph: convex, angles at least `alpha(d)`, all flips blocked.
pub fn pentagon_admissible(u1: f64, u2: f64, d: f64) -> Option<PentagonSolution> {
    let sol = complete_raw::<5>(&[u1, u2], d)?;
    (admissible_common(&sol) && flips_blocked(&sol)).then_some(sol)
}

/// Empty hexagon face: convex, angles at least `alpha(d)`, all flips blocked.
pub fn empty_hexagon_admissible(u1: f64, u2: f64, u3: f64, d: f64) -> Option<HexagonSolution> {
    let sol = complete_raw::<6>(&[u1, u2, u3], d)?;
    (admissible_common(&sol) && flips_blocked(&sol)).then_some(sol)
}

/// Hexagon hosting an isolated vertex: convex, angles at least `alpha(d)`, `lambda >= d`.
pub fn hosting_hexagon_admissible(u1: f64, u2: f64, u3: f64, d: f64) -> Option<HexagonSolution> {
    let sol = complete_raw::<6>(&[u1, u2, u3], d)?;
    (admissible_common(&sol) && hexagon_lambda(&sol) >= d).then_some(sol)
}

fn axis(lo: f64, steps: usize) -> impl Iterator<Item = f64> + Clone {
    let h = (PI - lo) / steps as f64;
    (0..steps).map(move |k| lo + (k as f64 + 0.5) * h)
}

/// Admissible pentagons on a `steps x steps` cell-centred grid of `(u1, u2)` in
/// `[alpha(d), pi)` for each `d`. Returns the grid step alongside the samples.
pub fn sample_pentagons(d_values: &[f64], steps: usize) -> (Vec<PentagonSolution>, f64) {
    let mut out = Vec::new();
    let mut hmax: f64 = 0.0;
    for &d in d_values {
        let lo = alpha_raw(d);
        hmax = hmax.max((PI - lo) / steps as f64);
        for u1 in axis(lo, steps) {
            for u2 in axis(lo, steps) {
                if let Some(s) = pentagon_admissible(u1, u2, d) {
                    out.push(s);
                }
            }
        }
    }
    (out, hmax)
}

/// Admissible empty hexagons on a cell-centred grid of `(u1, u2, u3)`.
pub fn sample_empty_hexagons(d_values: &[f64], steps: usize) -> (Vec<HexagonSolution>, f64) {
    sample_hexagons(d_values, steps, empty_hexagon_admissible)
}

/// Admissible hosting hexagons on a cell-centred grid of `(u1, u2, u3)`.
pub fn sample_hosting_hexagons(d_values: &[f64], steps: usize) -> (Vec<HexagonSolution>, f64) {
    sample_hexagons(d_values, steps, hosting_hexagon_admissible)
}

fn sample_hexagons(
    d_values: &[f64],
    steps: usize,
    test: fn(f64, f64, f64, f64) -> Option<HexagonSolution>,
) -> (Vec<HexagonSolution>, f64) {
    let mut out = Vec::new();
    let mut hmax: f64 = 0.0;
    for &d in d_values {
        let lo = alpha_raw(d);
        hmax = hmax.max((PI - lo) / steps as f64);
        for u1 in axis(lo, steps) {
            for u2 in axis(lo, steps) {
                for u3 in axis(lo, steps) {
                    if let Some(s) = test(u1, u2, u3, d) {
                        out.push(s);
                    }
                }
            }
        }
    }
    (out, hmax)
}
