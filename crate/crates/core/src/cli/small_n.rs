//! Small point counts: the pipeline run over a shrinking distance window, checked
//! against a direct numerical maximisation of the minimal distance.

use crate::geom::{angular_dist, SphericalPoint};
use crate::graphs::{candidate_filter, FilterRules, PlanarEmbeddedGraph};
use crate::prune::{prune_graph, PruneConfig, PruneStatus};
use crate::relax::Level1Profile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

/// Below this the degree bound of five no longer follows from the distance.
const MIN_WINDOW: f64 = PI / 3.0 + 0.01;
/// `alpha(d)` reaches `pi` at `2 pi / 3`.
const MAX_WINDOW: f64 = 2.0 * PI / 3.0 - 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SmallNError {
    #[error("n = {0} outside the supported range 4..=9")]
    UnsupportedN(usize),
    #[error("no input graph has {0} vertices")]
    NoGraphs(usize),
    #[error("no graph survives at the starting distance {0}")]
    NothingAtStart(f64),
}

/// Upper bound on the minimal distance of `n >= 3` points on the sphere:
/// `arccos((cot^2 w - 1) / 2)` with `w = n pi / (6 (n - 2))`.
pub fn fejes_toth_bound(n: usize) -> f64 {
    let w = n as f64 * PI / (6.0 * (n as f64 - 2.0));
    let c2 = 1.0 / w.tan().powi(2);
    ((c2 - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub d: f64,
    pub points: Vec<[f64; 3]>,
    pub starts: usize,
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}

fn min_dist(p: &[[f64; 3]]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            let c = (p[i][0] * p[j][0] + p[i][1] * p[j][1] + p[i][2] * p[j][2]).clamp(-1.0, 1.0);
            m = m.min(c.acos());
        }
    }
    m
}

/// Soft minimum `-(1/beta) log sum exp(-beta theta_ij)` and its gradient.
fn soft_min(p: &[[f64; 3]], beta: f64) -> (f64, Vec<[f64; 3]>) {
    let n = p.len();
    let mut th = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let c = (p[i][0] * p[j][0] + p[i][1] * p[j][1] + p[i][2] * p[j][2]).clamp(-1.0, 1.0);
            th.push((i, j, c, c.acos()));
        }
    }
    let m = th.iter().map(|t| t.3).fold(f64::INFINITY, f64::min);
    let z: f64 = th.iter().map(|t| (-beta * (t.3 - m)).exp()).sum();
    let value = m - z.ln() / beta;
    let mut grad = vec![[0.0; 3]; n];
    for &(i, j, c, t) in &th {
        let w = (-beta * (t - m)).exp() / z;
        let s = (1.0 - c * c).sqrt().max(1e-12);
        // d theta / d p_i = -(p_j - c p_i) / sin theta
        for k in 0..3 {
            grad[i][k] -= w * (p[j][k] - c * p[i][k]) / s;
            grad[j][k] -= w * (p[i][k] - c * p[j][k]) / s;
        }
    }
    (value, grad)
}

fn ascend(mut p: Vec<[f64; 3]>) -> Vec<[f64; 3]> {
    let mut step = 0.05;
    for beta in [10.0, 30.0, 100.0, 300.0, 1e3, 3e3, 1e4, 3e4, 1e5] {
        let (mut value, mut grad) = soft_min(&p, beta);
        for _ in 0..400 {
            let trial: Vec<[f64; 3]> = p
                .iter()
                .zip(&grad)
                .map(|(x, g)| unit([x[0] + step * g[0], x[1] + step * g[1], x[2] + step * g[2]]))
                .collect();
            let (v, g) = soft_min(&trial, beta);
            if v > value {
                p = trial;
                value = v;
                grad = g;
                step *= 1.2;
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
        }
        step = step.max(1e-4);
    }
    p
}

/// Multi-start maximisation of the minimal pairwise distance of `n` points,
/// each start from uniform random points (seeded) through a soft-min ascent
/// with an increasing sharpness schedule.
pub fn direct_optimum(n: usize, starts: usize, seed: u64) -> OracleResult {
    let runs: Vec<Vec<[f64; 3]>> = (0..starts.max(1))
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s as u64));
            let p: Vec<[f64; 3]> = (0..n)
                .map(|_| loop {
                    let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
                    let r2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
                    if r2 > 1e-4 && r2 <= 1.0 {
                        break unit(v);
                    }
                })
                .collect();
            ascend(p)
        })
        .collect();
    let best = runs
        .into_iter()
        .max_by(|a, b| min_dist(a).total_cmp(&min_dist(b)))
        .unwrap_or_default();
    OracleResult { d: min_dist(&best), points: best, starts: starts.max(1) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallNConfig {
    /// Width of the final bracket on the distance.
    pub tol: f64,
    /// Starting distance below the Fejes Toth bound.
    pub start_offset: f64,
    /// Top of every window above the Fejes Toth bound.
    pub top_margin: f64,
    pub max_depth: usize,
    pub min_width: f64,
    pub oracle_starts: usize,
    pub oracle_seed: u64,
    /// Agreement required between the pipeline and the oracle.
    pub agreement: f64,
}

impl Default for SmallNConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            start_offset: 0.3,
            top_margin: 1e-3,
            max_depth: 60,
            min_width: 1e-12,
            oracle_starts: 24,
            oracle_seed: 7,
            agreement: 1e-3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectionStep {
    pub t: f64,
    pub survivors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptimum {
    pub n: usize,
    pub graphs: usize,
    pub fejes_toth: f64,
    pub window_top: f64,
    /// Largest distance at which some graph survived.
    pub lower: f64,
    /// Smallest distance at which none did.
    pub upper: f64,
    /// 0-based input indices surviving at `lower`.
    pub survivors: Vec<usize>,
    pub steps: Vec<BisectionStep>,
}

impl PipelineOptimum {
    pub fn optimum(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

fn survivors_at(t: f64, top: f64, graphs: &[PlanarEmbeddedGraph], among: &[usize], cfg: &SmallNConfig) -> Vec<usize> {
    let rules = FilterRules::for_distance(t);
    let prune = PruneConfig {
        max_depth: cfg.max_depth,
        min_width: cfg.min_width,
        profile: Level1Profile::for_window(t, top),
        ..PruneConfig::default()
    };
    let mut out: Vec<usize> = among
        .par_iter()
        .copied()
        .filter(|&i| {
            let g = &graphs[i];
            candidate_filter(g, &rules).passed && prune_graph(&format!("g{}", i + 1), g, &prune).status == PruneStatus::Survived
        })
        .collect();
    out.sort_unstable();
    out
}

/// Bisects on the bottom `t` of the window `[t, top]`. Windows nest as `t`
/// grows, so only the previous survivors are re-pruned.
pub fn pipeline_optimum(n: usize, graphs: &[PlanarEmbeddedGraph], cfg: &SmallNConfig) -> Result<PipelineOptimum, SmallNError> {
    if !(4..=9).contains(&n) {
        return Err(SmallNError::UnsupportedN(n));
    }
    let candidates: Vec<usize> = (0..graphs.len()).filter(|&i| graphs[i].n() == n).collect();
    if candidates.is_empty() {
        return Err(SmallNError::NoGraphs(n));
    }
    let ft = fejes_toth_bound(n);
    let top = (ft + cfg.top_margin).min(MAX_WINDOW);
    let mut lo = (ft - cfg.start_offset).max(MIN_WINDOW);
    let mut hi = top;
    let mut alive = survivors_at(lo, top, graphs, &candidates, cfg);
    let mut steps = vec![BisectionStep { t: lo, survivors: alive.clone() }];
    if alive.is_empty() {
        return Err(SmallNError::NothingAtStart(lo));
    }
    while hi - lo > cfg.tol {
        let mid = 0.5 * (lo + hi);
        let s = survivors_at(mid, top, graphs, &alive, cfg);
        steps.push(BisectionStep { t: mid, survivors: s.clone() });
        if s.is_empty() {
            hi = mid;
        } else {
            lo = mid;
            alive = s;
        }
    }
    Ok(PipelineOptimum {
        n,
        graphs: candidates.len(),
        fejes_toth: ft,
        window_top: top,
        lower: lo,
        upper: hi,
        survivors: alive,
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmallNReport {
    pub pipeline: PipelineOptimum,
    pub oracle: OracleResult,
    pub difference: f64,
    pub agrees: bool,
}

pub fn verify_small_n(n: usize, graphs: &[PlanarEmbeddedGraph], cfg: &SmallNConfig) -> Result<SmallNReport, SmallNError> {
    let pipeline = pipeline_optimum(n, graphs, cfg)?;
    let oracle = direct_optimum(n, cfg.oracle_starts, cfg.oracle_seed);
    let difference = (pipeline.optimum() - oracle.d).abs();
    Ok(SmallNReport { agrees: difference <= cfg.agreement, pipeline, oracle, difference })
}

/// Oracle points as sphere points, for contact-graph checks.
pub fn oracle_points(o: &OracleResult) -> Vec<SphericalPoint> {
    o.points.iter().filter_map(|&p| SphericalPoint::normalize(p).ok()).collect()
}

/// Minimal distance of a point set.
pub fn minimal_distance(points: &[SphericalPoint]) -> f64 {
    let mut m = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            m = m.min(angular_dist(points[i], points[j]));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fejes_toth_is_tight_for_the_regular_cases() {
        assert!((fejes_toth_bound(4) - (-1.0f64 / 3.0).acos()).abs() < 1e-12);
        assert!((fejes_toth_bound(6) - PI / 2.0).abs() < 1e-12);
        // icosahedron edge: arctan 2
        assert!((fejes_toth_bound(12) - 2.0f64.atan()).abs() < 1e-12);
    }

    #[test]
    fn oracle_finds_the_octahedron() {
        let o = direct_optimum(6, 4, 1);
        assert!((o.d - PI / 2.0).abs() < 1e-4, "{}", o.d);
    }
}
