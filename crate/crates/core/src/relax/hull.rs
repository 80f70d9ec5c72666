//! Outer polyhedral approximations of the admissible pentagon angle set, built
//! from grid samples along a fixed direction dictionary and rounded outward.

use crate::geom::admissible::{sample_empty_hexagons, sample_hosting_hexagons, sample_pentagons};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// `lo <= coeffs . u <= hi` over the corners of one face, in face order.
#[derive(Debug, Clone, PartialEq)]
pub struct HullRow {
    pub coeffs: Vec<f64>,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FaceHull {
    pub rows: Vec<HullRow>,
    /// Quoted constants that had to be widened to cover the samples.
    pub widened: Vec<String>,
}

/// Grid resolution of the fine pentagon sample; the coarse one uses half.
pub const PENTAGON_STEPS: usize = 200;
/// Number of `d` values sampled across the window.
pub const D_SAMPLES: usize = 7;

pub(crate) fn d_samples(lo: f64, hi: f64) -> Vec<f64> {
    (0..D_SAMPLES).map(|k| lo + (hi - lo) * k as f64 / (D_SAMPLES - 1) as f64).collect()
}

/// All rotations and reflections of a direction over an `m`-gon.
pub(crate) fn dihedral_images(c: &[f64]) -> Vec<Vec<f64>> {
    let m = c.len();
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(2 * m);
    for r in 0..m {
        for refl in [false, true] {
            let mut img = vec![0.0; m];
            for (i, &ci) in c.iter().enumerate() {
                let j = if refl { (r + m - i) % m } else { (r + i) % m };
                img[j] = ci;
            }
            if !out.contains(&img) {
                out.push(img);
            }
        }
    }
    out
}

/// `[min, max]` of `c . u` over the samples, symmetrised over the dihedral orbit of `c`.
fn orbit_range(samples: &[Vec<f64>], c: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for img in dihedral_images(c) {
        for s in samples {
            let v: f64 = img.iter().zip(s).map(|(a, b)| a * b).sum();
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    (lo, hi)
}

fn pentagon_dictionary() -> Vec<Vec<f64>> {
    let m = 5;
    let mut dirs = Vec::new();
    let unit = |i: usize| {
        let mut v = vec![0.0; m];
        v[i] = 1.0;
        v
    };
    dirs.push(unit(0));
    for j in 1..m {
        let mut p = unit(0);
        p[j] = 1.0;
        dirs.push(p);
        let mut q = unit(0);
        q[j] = -1.0;
        dirs.push(q);
    }
    dirs.push(vec![1.0; m]);
    dirs.push(vec![1.0, 1.0, 0.0, -0.63, 0.0]);
    dirs.push(vec![1.0, 1.8, 1.0, 0.0, 0.0]);
    dirs.push(vec![1.0, 1.0, 1.0, 0.0, 0.0]);
    dirs.push(vec![1.0, -1.0, 1.0, 0.0, 0.0]);
    dirs
}

fn pentagon_samples(d_lo: f64, d_hi: f64, steps: usize) -> (Vec<Vec<f64>>, f64) {
    let (s, h) = sample_pentagons(&d_samples(d_lo, d_hi), steps);
    (s.iter().map(|p| p.angles.to_vec()).collect(), h)
}

/// Generated pentagon hull for the window: for each dictionary direction and its
/// dihedral images, the sampled range widened by twice the coarse/fine
/// discrepancy plus one grid step times the direction's 1-norm.
pub fn generated_pentagon_hull(d_lo: f64, d_hi: f64) -> FaceHull {
    let (fine, h) = pentagon_samples(d_lo, d_hi, PENTAGON_STEPS);
    let (coarse, _) = pentagon_samples(d_lo, d_hi, PENTAGON_STEPS / 2);
    let mut hull = FaceHull::default();
    if fine.is_empty() {
        return hull;
    }
    for c in pentagon_dictionary() {
        let (flo, fhi) = orbit_range(&fine, &c);
        let (clo, chi) = if coarse.is_empty() { (flo, fhi) } else { orbit_range(&coarse, &c) };
        let norm1: f64 = c.iter().map(|v| v.abs()).sum();
        let base = norm1 * h + 1e-6;
        let lo = flo - 2.0 * (clo - flo).abs() - base;
        let hi = fhi + 2.0 * (chi - fhi).abs() + base;
        for img in dihedral_images(&c) {
            hull.rows.push(HullRow { coeffs: img, lo, hi });
        }
    }
    hull
}

/// The two quoted pentagon inequalities, widened if the samples disagree.
pub fn quoted_pentagon_rows(d_lo: f64, d_hi: f64) -> FaceHull {
    let (fine, _) = pentagon_samples(d_lo, d_hi, PENTAGON_STEPS);
    let quoted: [(Vec<f64>, f64, f64); 2] = [
        (vec![1.0, 1.0, 0.0, -0.63, 0.0], 2.96, 3.26),
        (vec![1.0, 1.8, 1.0, 0.0, 0.0], f64::NEG_INFINITY, 9.05),
    ];
    let mut hull = FaceHull::default();
    for (c, qlo, qhi) in quoted {
        let (slo, shi) = if fine.is_empty() { (qlo, qhi) } else { orbit_range(&fine, &c) };
        let lo = if slo < qlo {
            hull.widened.push(format!("{c:?} lower {qlo} -> {slo}"));
            slo - 1e-6
        } else {
            qlo
        };
        let hi = if shi > qhi {
            hull.widened.push(format!("{c:?} upper {qhi} -> {shi}"));
            shi + 1e-6
        } else {
            qhi
        };
        for img in dihedral_images(&c) {
            hull.rows.push(HullRow { coeffs: img, lo, hi });
        }
    }
    hull
}

/// Pentagon rows for the window, computed once per window.
pub fn pentagon_hull(d_lo: f64, d_hi: f64, quoted: bool) -> Arc<FaceHull> {
    type Cache = Mutex<HashMap<(u64, u64, bool), Arc<FaceHull>>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let key = (d_lo.to_bits(), d_hi.to_bits(), quoted);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(h) = cache.lock().expect("hull cache poisoned").get(&key) {
        return h.clone();
    }
    let mut hull = generated_pentagon_hull(d_lo, d_hi);
    if quoted {
        let q = quoted_pentagon_rows(d_lo, d_hi);
        hull.rows.extend(q.rows);
        hull.widened.extend(q.widened);
    }
    let hull = Arc::new(hull);
    cache.lock().expect("hull cache poisoned").insert(key, hull.clone());
    hull
}

/// Quoted empty-hexagon branch `k` (0-based): corners `k, k+3` in `[1.2, 1.34]`,
/// the other four at least `2.9`.
pub fn hexagon_branch_bounds(k: usize) -> [(f64, f64); 6] {
    let mut b = [(2.9, f64::INFINITY); 6];
    b[k % 6] = (1.2, 1.34);
    b[(k + 3) % 6] = (1.2, 1.34);
    b
}

/// Number of quoted branches per empty hexagon.
pub const HEXAGON_BRANCHES: usize = 3;

/// Quoted lower bound on the angle sum of a hexagon hosting an isolated vertex.
pub const HOSTING_SUM_MIN: f64 = 15.936;

/// Sampled empty hexagons not covered by any quoted branch (for audits).
pub fn uncovered_empty_hexagons(d_lo: f64, d_hi: f64, steps: usize) -> (usize, usize) {
    let (s, _) = sample_empty_hexagons(&d_samples(d_lo, d_hi), steps);
    let bad = s
        .iter()
        .filter(|h| {
            !(0..HEXAGON_BRANCHES).any(|k| {
                hexagon_branch_bounds(k)
                    .iter()
                    .zip(&h.angles)
                    .all(|(&(lo, hi), &u)| lo <= u && u <= hi)
            })
        })
        .count();
    (bad, s.len())
}

/// Smallest sampled angle sum of a hosting hexagon (for audits).
pub fn sampled_hosting_sum_min(d_lo: f64, d_hi: f64, steps: usize) -> Option<f64> {
    let (s, _) = sample_hosting_hexagons(&d_samples(d_lo, d_hi), steps);
    s.iter().map(|h| h.angles.iter().sum::<f64>()).min_by(f64::total_cmp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_orbit_sizes() {
        assert_eq!(dihedral_images(&[1.0, 0.0, 0.0, 0.0, 0.0]).len(), 5);
        assert_eq!(dihedral_images(&[1.0, 2.0, 0.0, 0.0, 0.0]).len(), 10);
        assert_eq!(dihedral_images(&[1.0; 5]).len(), 1);
    }

    #[test]
    fn branch_bounds_are_opposite_pairs() {
        let b = hexagon_branch_bounds(1);
        assert_eq!(b[1], (1.2, 1.34));
        assert_eq!(b[4], (1.2, 1.34));
        assert_eq!(b[0].0, 2.9);
    }
}
