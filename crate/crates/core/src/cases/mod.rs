//! Closed-form optimum, the 13-point angle chain, the P13 coordinates, and
//! the elimination analyses of the three near-optimal subgraphs.
//!
//! Monotonicity claims are established by dense sampling with a sign check on
//! finite differences, not by interval certification.

mod chain;
mod roots;

pub use chain::{angle_chain, closure_residual, label, realize_frame, triangle_apex, AngleChain};
pub use roots::{bisect, scan_root, scan_root_where};

use crate::geom::{
    alpha_raw, angular_dist, complete_raw, interior_angle, SphericalPoint,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

const TAU: f64 = 2.0 * PI;
const DEG: f64 = PI / 180.0;

/// Window for the minimal distance used throughout the case analysis.
pub const D_WINDOW: (f64, f64) = (0.9972, 1.021);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CaseError {
    #[error("u{index} = {value} out of domain: {detail}")]
    Domain { index: usize, value: f64, detail: String },
    #[error("no root bracketed: {0}")]
    NoRoot(String),
}

/// Root of `2 tan(3pi/8 - a/4) = (1 - 2 cos a) / cos^2 a` on `[60, 80]` degrees,
/// then `cos d = cos a / (1 - cos a)`. Returns `(a13, delta13)` in radians.
pub fn solve_delta13() -> (f64, f64) {
    let g = |a: f64| 2.0 * (3.0 * PI / 8.0 - a / 4.0).tan() - (1.0 - 2.0 * a.cos()) / a.cos().powi(2);
    let a = bisect(|a| Some(g(a)), 60.0 * DEG, 80.0 * DEG).expect("root bracketed on [60, 80] degrees");
    let d = (a.cos() / (1.0 - a.cos())).acos();
    (a, d)
}

/// The optimal 13-point configuration, vertices in frame order `v1..v13`.
pub fn build_p13() -> [SphericalPoint; 13] {
    let (_, d) = solve_delta13();
    let c = angle_chain(PI / 2.0, PI / 2.0, d).expect("chain defined at the optimum");
    realize_frame(PI / 2.0, PI / 2.0, c.u[3], d)
}

/// `x y z` per line at 17 significant digits.
pub fn coordinates_text(points: &[SphericalPoint]) -> String {
    points
        .iter()
        .map(|p| format!("{:.16e} {:.16e} {:.16e}\n", p.x(), p.y(), p.z()))
        .collect()
}

/// `latitude longitude` in degrees per line.
pub fn coordinates_text_degrees(points: &[SphericalPoint]) -> String {
    points
        .iter()
        .map(|p| {
            let lat = p.z().clamp(-1.0, 1.0).asin() / DEG;
            let lon = p.y().atan2(p.x()) / DEG;
            format!("{lat:.12} {lon:.12}\n")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    Gamma1,
    Gamma2,
    Gamma3,
    Gamma3Subcase1,
    Gamma3Subcase2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Conclusion {
    Eliminated,
    OptimalUnique,
    Inconclusive,
}

/// One row of a sampled curve `d -> value` against `alpha(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub d: f64,
    pub value: f64,
    pub alpha: f64,
    pub u1: f64,
    pub u2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionScan {
    pub resolution: f64,
    pub half_width: f64,
    pub grid_points: usize,
    pub solve_failures: usize,
    pub in_d1: usize,
    pub in_d2: usize,
    /// Solved points whose chain has a rhombus angle outside `[u0, 2 u0]`.
    pub inadmissible: usize,
    /// Realisable `(u1, u2)` grid points in both regions.
    pub intersection: Vec<(f64, f64)>,
    pub diameter: f64,
    pub contains_centre: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    Monotone {
        table: Vec<CurveSample>,
        strictly_decreasing: bool,
        /// Root of `value - alpha(d)` when bracketed.
        crossing: Option<f64>,
        unsolved: Vec<f64>,
    },
    RegionScans { scans: Vec<RegionScan> },
    Subcases { verdicts: Vec<CaseVerdict> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseVerdict {
    pub case: CaseId,
    pub conclusion: Conclusion,
    pub evidence: Evidence,
}

/// `u2` solving the closure at `v8` for given `(u1, d)`.
fn closure_u2(u1: f64, d: f64) -> Option<f64> {
    scan_root(|u2| closure_residual(u1, u2, d).ok(), 60.0 * DEG, 100.0 * DEG, 1.0 * DEG)
}

/// Angle sum at `v7` with the triangle angle `u0`, minus a full turn.
fn v7_residual(c: &AngleChain) -> f64 {
    c.u[1] + c.u[13] + c.u[0] + c.u[16] - TAU
}

/// Solution of the first case at one `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Case1Point {
    pub d: f64,
    pub u1: f64,
    pub u2: f64,
    pub u18: f64,
    pub closure_residual: f64,
    pub v7_residual: f64,
}

/// Nested solve: `u2(u1)` from the closure at `v8`, `u1` from the angle sum at `v7`;
/// returns `u18` there.
pub fn case1_u18(d: f64) -> Result<Case1Point, CaseError> {
    let outer = |u1: f64| {
        let u2 = closure_u2(u1, d)?;
        angle_chain(u1, u2, d).ok().map(|c| v7_residual(&c))
    };
    let u1 = scan_root(outer, 80.0 * DEG, 120.0 * DEG, 0.5 * DEG)
        .ok_or_else(|| CaseError::NoRoot(format!("v7 equation at d = {d}")))?;
    let u2 = closure_u2(u1, d).ok_or_else(|| CaseError::NoRoot(format!("closure at d = {d}")))?;
    let c = angle_chain(u1, u2, d)?;
    Ok(Case1Point {
        d,
        u1,
        u2,
        u18: c.u[18],
        closure_residual: c.u[0] + c.u[15] + c.u[4] + c.u[16] - TAU,
        v7_residual: v7_residual(&c),
    })
}

fn sample_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect()
}

fn monotone_verdict(
    case: CaseId,
    samples: Vec<(f64, Option<CurveSample>)>,
    f: impl Fn(f64) -> Option<f64> + Sync,
) -> CaseVerdict {
    let unsolved: Vec<f64> = samples.iter().filter(|s| s.1.is_none()).map(|s| s.0).collect();
    let table: Vec<CurveSample> = samples.into_iter().filter_map(|s| s.1).collect();
    let strictly_decreasing = table.windows(2).all(|w| w[1].value < w[0].value);
    let crossing = table
        .windows(2)
        .find(|w| (w[0].value - w[0].alpha) * (w[1].value - w[1].alpha) <= 0.0)
        .and_then(|w| bisect(|d| f(d).map(|v| v - alpha_raw(d)), w[0].d, w[1].d));
    let (_, d13) = solve_delta13();
    // admissible only where value >= alpha(d) and d >= delta13
    let beyond_ok = table.iter().filter(|s| s.d > d13 + 1e-9).all(|s| s.value < s.alpha);
    let conclusion = if strictly_decreasing && beyond_ok && !table.is_empty() {
        Conclusion::Eliminated
    } else {
        Conclusion::Inconclusive
    };
    CaseVerdict {
        case,
        conclusion,
        evidence: Evidence::Monotone { table, strictly_decreasing, crossing, unsolved },
    }
}

/// Samples `u18(d)` across the window with spacing `step`.
pub fn case1_verdict(step: f64) -> CaseVerdict {
    let ds = sample_grid(D_WINDOW.0, D_WINDOW.1, step);
    let samples: Vec<(f64, Option<CurveSample>)> = ds
        .par_iter()
        .map(|&d| {
            let s = case1_u18(d).ok().map(|p| CurveSample {
                d,
                value: p.u18,
                alpha: alpha_raw(d),
                u1: p.u1,
                u2: p.u2,
            });
            (d, s)
        })
        .collect();
    monotone_verdict(CaseId::Gamma1, samples, |d| case1_u18(d).ok().map(|p| p.u18))
}

/// Membership of `(u1, u2)` in `D1` (both leftover angles at least `u0`) and `D2`
/// (`alpha(d) >= a13`), with `d` from the closure. `None` when the closure fails.
pub fn case2_membership(u1: f64, u2: f64, tol: f64) -> Option<(bool, bool)> {
    case2_point(u1, u2, tol).map(|p| (p.in_d1, p.in_d2))
}

/// Membership of one grid point together with realisability of its chain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2Point {
    pub d: f64,
    pub in_d1: bool,
    pub in_d2: bool,
    /// Every rhombus angle `u1..u16` lies in `[u0, 2 u0]`, i.e. both diagonals
    /// of every rhombus are at least `d`.
    pub rhombi_admissible: bool,
}

pub fn case2_point(u1: f64, u2: f64, tol: f64) -> Option<Case2Point> {
    let d = scan_root(|d| closure_residual(u1, u2, d).ok(), 0.95, 1.05, 0.005)?;
    let c = angle_chain(u1, u2, d).ok()?;
    let (a13, _) = solve_delta13();
    Some(Case2Point {
        d,
        in_d1: c.u[17] >= c.u[0] - tol && c.u[18] >= c.u[0] - tol,
        in_d2: c.u[0] >= a13 - tol,
        rhombi_admissible: rhombi_admissible(&c, tol),
    })
}

/// Rhombus angles of the chain within `[alpha(d), 2 alpha(d)]`.
pub fn rhombi_admissible(c: &AngleChain, tol: f64) -> bool {
    c.u[1..=16].iter().all(|&u| u >= c.u[0] - tol && u <= 2.0 * c.u[0] + tol)
}

/// Scans `(u1, u2)` on `90 deg +- 20 deg` at the given spacing. Points whose
/// chain is not realisable by rhombi with diagonals at least `d` are left out
/// of the intersection.
pub fn case2_scan(resolution: f64) -> RegionScan {
    let half_width = 20.0 * DEG;
    let n = (half_width / resolution).round() as i64;
    let rows: Vec<(usize, usize, usize, usize, Vec<(i64, i64)>)> = (-n..=n)
        .into_par_iter()
        .map(|i| {
            let (mut fail, mut d1, mut d2, mut bad, mut both) = (0, 0, 0, 0, Vec::new());
            for j in -n..=n {
                let (u1, u2) = (PI / 2.0 + i as f64 * resolution, PI / 2.0 + j as f64 * resolution);
                match case2_point(u1, u2, 1e-9) {
                    None => fail += 1,
                    Some(p) => {
                        d1 += p.in_d1 as usize;
                        d2 += p.in_d2 as usize;
                        bad += !p.rhombi_admissible as usize;
                        if p.in_d1 && p.in_d2 && p.rhombi_admissible {
                            both.push((i, j));
                        }
                    }
                }
            }
            (fail, d1, d2, bad, both)
        })
        .collect();
    let mut scan = RegionScan {
        resolution,
        half_width,
        grid_points: ((2 * n + 1) * (2 * n + 1)) as usize,
        solve_failures: 0,
        in_d1: 0,
        in_d2: 0,
        inadmissible: 0,
        intersection: Vec::new(),
        diameter: 0.0,
        contains_centre: false,
    };
    let mut idx = Vec::new();
    for (f, a, b, bad, both) in rows {
        scan.solve_failures += f;
        scan.inadmissible += bad;
        scan.in_d1 += a;
        scan.in_d2 += b;
        idx.extend(both);
    }
    scan.contains_centre = idx.contains(&(0, 0));
    for (k, &(i, j)) in idx.iter().enumerate() {
        for &(i2, j2) in &idx[k + 1..] {
            let dd = (((i - i2) * (i - i2) + (j - j2) * (j - j2)) as f64).sqrt() * resolution;
            scan.diameter = scan.diameter.max(dd);
        }
    }
    scan.intersection = idx
        .into_iter()
        .map(|(i, j)| (PI / 2.0 + i as f64 * resolution, PI / 2.0 + j as f64 * resolution))
        .collect();
    scan
}

fn region_conclusion(scans: &[RegionScan]) -> Conclusion {
    let ok = scans.iter().all(|s| {
        s.contains_centre && !s.intersection.is_empty() && s.diameter < 3.0 * s.resolution
    });
    if ok && !scans.is_empty() {
        Conclusion::OptimalUnique
    } else {
        Conclusion::Inconclusive
    }
}

/// Single-resolution verdict for the second case.
pub fn case2_region_scan(resolution: f64) -> CaseVerdict {
    case2_nested(&[resolution])
}

/// Verdict over several resolutions; optimal-unique when every scan's intersection
/// contains the centre and has diameter below three grid steps.
pub fn case2_nested(resolutions: &[f64]) -> CaseVerdict {
    let scans: Vec<RegionScan> = resolutions.iter().map(|&r| case2_scan(r)).collect();
    CaseVerdict {
        case: CaseId::Gamma2,
        conclusion: region_conclusion(&scans),
        evidence: Evidence::RegionScans { scans },
    }
}

/// Configuration of the second subcase of the third case at `(u1, d)`: `T` sits
/// on the triangle over `X R`, away from `D`; the `v7` angle sum fixes `u2`.
#[derive(Debug, Clone, Copy)]
pub struct Subcase2Frame {
    pub u1: f64,
    pub u2: f64,
    pub chain: AngleChain,
    pub points: [SphericalPoint; 13],
}

pub fn subcase2_frame(u1: f64, d: f64) -> Option<Subcase2Frame> {
    let u2 = scan_root(
        |u2| angle_chain(u1, u2, d).ok().map(|c| v7_residual(&c)),
        60.0 * DEG,
        120.0 * DEG,
        1.0 * DEG,
    )?;
    let chain = angle_chain(u1, u2, d).ok()?;
    let mut points = realize_frame(u1, u2, chain.u[3], d);
    points[label::T] = triangle_apex(points[label::X], points[label::R], points[label::D], d);
    Some(Subcase2Frame { u1, u2, chain, points })
}

/// Pentagon `F = (X, E, W, U, T)` completed from its angles at `X` and `E`.
/// In the frame, `F` runs counterclockwise as `X, T, U, W, E`.
fn subcase2_pentagon(f: &Subcase2Frame) -> Option<crate::geom::PentagonSolution> {
    let c = &f.chain;
    let at_x = TAU - c.u[14] - c.u[3] - c.u[0];
    let at_e = c.u[11];
    complete_raw::<5>(&[at_x, at_e], c.d)
}

/// Consistency of `F`'s angle at `v13`: completed value minus the angle read off
/// the frame. Vanishes exactly when `|T U| = d`.
pub fn subcase2_residual(u1: f64, d: f64) -> Option<f64> {
    let f = subcase2_frame(u1, d)?;
    let pent = subcase2_pentagon(&f)?;
    let p = &f.points;
    let at_t = interior_angle(p[label::X], p[label::T], p[label::U]);
    Some(pent.angles[4] - at_t)
}

/// Alternative equation: `F`'s angle at `v8` against the frame.
pub fn subcase2_residual_at_w(u1: f64, d: f64) -> Option<f64> {
    let f = subcase2_frame(u1, d)?;
    let pent = subcase2_pentagon(&f)?;
    Some(pent.angles[2] - (TAU - f.chain.u[4] - f.chain.u[16]))
}

/// `u19 = angle T U W` of the solved second subcase at `d`.
pub fn case3_u19(d: f64) -> Option<CurveSample> {
    // the angle equation also vanishes where the completed U differs from the frame's
    let touches = |u1: f64| {
        subcase2_frame(u1, d).is_some_and(|f| {
            (angular_dist(f.points[label::T], f.points[label::U]) - d).abs() < 1e-8
        })
    };
    let u1 = scan_root_where(|u1| subcase2_residual(u1, d), 70.0 * DEG, 130.0 * DEG, 0.5 * DEG, touches)?;
    let f = subcase2_frame(u1, d)?;
    let p = &f.points;
    let u19 = interior_angle(p[label::T], p[label::U], p[label::W]);
    Some(CurveSample { d, value: u19, alpha: alpha_raw(d), u1, u2: f.u2 })
}

/// Both subcases of the third case; eliminated when both are.
pub fn case3_analysis(step: f64) -> CaseVerdict {
    let mut first = case1_verdict(step);
    first.case = CaseId::Gamma3Subcase1;
    let ds = sample_grid(D_WINDOW.0, D_WINDOW.1, step);
    let samples: Vec<(f64, Option<CurveSample>)> =
        ds.par_iter().map(|&d| (d, case3_u19(d))).collect();
    let second = monotone_verdict(CaseId::Gamma3Subcase2, samples, |d| case3_u19(d).map(|s| s.value));
    let conclusion = if first.conclusion == Conclusion::Eliminated
        && second.conclusion == Conclusion::Eliminated
    {
        Conclusion::Eliminated
    } else {
        Conclusion::Inconclusive
    };
    CaseVerdict { case: CaseId::Gamma3, conclusion, evidence: Evidence::Subcases { verdicts: vec![first, second] } }
}

/// Minimum pairwise distance and the number of pairs within `tol` of it.
pub fn min_distance(points: &[SphericalPoint], tol: f64) -> (f64, usize) {
    let mut m = f64::INFINITY;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            m = m.min(angular_dist(points[i], points[j]));
        }
    }
    let mut c = 0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if angular_dist(points[i], points[j]) <= m + tol {
                c += 1;
            }
        }
    }
    (m, c)
}
