//! Dense bounded-variable primal simplex on the condensed tableau.
//!
//! Every row `i` gets a logical `s_i = a_i x` bounded by the row range, so the
//! system `A x - s = 0` is homogeneous and the basic variables are kept as
//! `x_B = T x_N` with `T` of size rows by structurals. Phase 1 minimises the
//! total bound violation of the basic variables directly, without artificials.

use crate::relax::LinearRelaxation;

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
const OPT_TOL: f64 = 1e-10;
const PIVOT_TOL: f64 = 1e-9;
/// Pivots between recomputations of the basic values.
const REFRESH_EVERY: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PhaseEnd {
    Optimal,
    Unbounded,
    IterationCap,
}

#[derive(Debug, Clone)]
pub(crate) struct Simplex {
    m: usize,
    n: usize,
    /// Index into the relaxation's rows of each logical (free rows are dropped).
    row_map: Vec<usize>,
    /// `m x n`, row-major: basic `r` equals `sum_k t[r][k] * x[nonbasic[k]]`.
    t: Vec<f64>,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    /// Phase-two costs over all `n + m` variables; `None` during phase 1.
    cost: Option<Vec<f64>>,
    pub(crate) iterations: usize,
    cap: usize,
}

impl Simplex {
    /// Starts from the all-logical basis with structurals at the bound nearest zero.
    pub(crate) fn new(relax: &LinearRelaxation) -> Self {
        let n = relax.num_vars();
        let row_map: Vec<usize> = (0..relax.rows.len())
            .filter(|&i| relax.rows[i].lo.is_finite() || relax.rows[i].hi.is_finite())
            .collect();
        let m = row_map.len();
        let mut lo = relax.lo.clone();
        let mut hi = relax.hi.clone();
        let mut x: Vec<f64> = (0..n)
            .map(|j| {
                let (l, h) = (relax.lo[j], relax.hi[j]);
                if l <= 0.0 && 0.0 <= h {
                    0.0
                } else if l.abs() <= h.abs() {
                    l
                } else {
                    h
                }
            })
            .collect();
        let mut t = vec![0.0; m * n];
        for (r, &i) in row_map.iter().enumerate() {
            let row = &relax.rows[i];
            for &(j, a) in &row.coeffs {
                t[r * n + j] += a;
            }
            lo.push(row.lo);
            hi.push(row.hi);
            x.push(0.0);
        }
        let mut s = Self {
            m,
            n,
            row_map,
            t,
            basis: (n..n + m).collect(),
            nonbasic: (0..n).collect(),
            lo,
            hi,
            x,
            cost: None,
            iterations: 0,
            cap: 50 * (m + n).max(1),
        };
        s.refresh();
        s
    }

    pub(crate) fn num_rows(&self) -> usize {
        self.m
    }

    /// Recomputes basic values from the nonbasic ones to shed drift.
    fn refresh(&mut self) {
        let n = self.n;
        for r in 0..self.m {
            let row = &self.t[r * n..(r + 1) * n];
            let v: f64 = row.iter().zip(&self.nonbasic).map(|(a, &j)| a * self.x[j]).sum();
            self.x[self.basis[r]] = v;
        }
    }

    fn violation(&self, j: usize) -> f64 {
        let v = self.x[j];
        if v < self.lo[j] - FEAS_TOL {
            self.lo[j] - v
        } else if v > self.hi[j] + FEAS_TOL {
            v - self.hi[j]
        } else {
            0.0
        }
    }

    /// Total bound violation of the basic variables.
    pub(crate) fn infeasibility(&self) -> f64 {
        self.basis.iter().map(|&b| self.violation(b)).sum()
    }

    /// Installs `objective` (minimised) on the structurals and switches to phase 2.
    pub(crate) fn set_objective(&mut self, objective: &[f64]) {
        let mut c = vec![0.0; self.n + self.m];
        c[..self.n].copy_from_slice(objective);
        self.cost = Some(c);
    }

    /// Cost of each basic variable: the phase-2 cost, or in phase 1 the slope of
    /// its bound violation.
    fn basic_costs(&self) -> Vec<f64> {
        match &self.cost {
            Some(c) => self.basis.iter().map(|&b| c[b]).collect(),
            None => self
                .basis
                .iter()
                .map(|&b| {
                    if self.x[b] < self.lo[b] - FEAS_TOL {
                        -1.0
                    } else if self.x[b] > self.hi[b] + FEAS_TOL {
                        1.0
                    } else {
                        0.0
                    }
                })
                .collect(),
        }
    }

    /// Reduced cost of every nonbasic position.
    fn reduced_costs(&self, cb: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut d: Vec<f64> = match &self.cost {
            Some(c) => self.nonbasic.iter().map(|&j| c[j]).collect(),
            None => vec![0.0; n],
        };
        for (r, &c) in cb.iter().enumerate() {
            if c != 0.0 {
                let row = &self.t[r * n..(r + 1) * n];
                for (dk, &a) in d.iter_mut().zip(row) {
                    *dk += c * a;
                }
            }
        }
        d
    }

    fn entering(&self, d: &[f64], bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for (k, &j) in self.nonbasic.iter().enumerate() {
            if self.lo[j] == self.hi[j] {
                continue;
            }
            let up = d[k] < -OPT_TOL && self.x[j] < self.hi[j];
            let down = d[k] > OPT_TOL && self.x[j] > self.lo[j];
            let dir = match (up, down) {
                (true, _) => 1.0,
                (_, true) => -1.0,
                _ => continue,
            };
            if bland {
                if best.is_none_or(|(b, _)| j < self.nonbasic[b]) {
                    best = Some((k, dir));
                }
                continue;
            }
            if best.is_none_or(|(b, _)| d[k].abs() > d[b].abs()) {
                best = Some((k, dir));
            }
        }
        best
    }

    /// Step limit imposed on basic `r` moving at rate `delta`, with `slack`
    /// added to bounds it currently satisfies.
    fn limit(&self, r: usize, delta: f64, slack: f64) -> f64 {
        let b = self.basis[r];
        let (v, l, h) = (self.x[b], self.lo[b], self.hi[b]);
        let phase1 = self.cost.is_none();
        if delta < 0.0 {
            if phase1 && v > h + FEAS_TOL {
                // above its range and falling: becomes feasible at the upper bound
                return (v - h) / -delta;
            }
            if phase1 && v < l - FEAS_TOL {
                return f64::INFINITY;
            }
            (v - l + slack).max(0.0) / -delta
        } else {
            if phase1 && v < l - FEAS_TOL {
                return (l - v) / delta;
            }
            if phase1 && v > h + FEAS_TOL {
                return f64::INFINITY;
            }
            (h - v + slack).max(0.0) / delta
        }
    }

    /// Runs the current phase to optimality.
    pub(crate) fn run(&mut self) -> PhaseEnd {
        let budget = 10 * (self.m + self.n).max(1);
        let start = self.iterations;
        let n = self.n;
        loop {
            if self.iterations - start >= self.cap {
                return PhaseEnd::IterationCap;
            }
            let cb = self.basic_costs();
            if self.cost.is_none() && cb.iter().all(|&c| c == 0.0) {
                self.refresh();
                if self.infeasibility() == 0.0 {
                    return PhaseEnd::Optimal;
                }
                continue;
            }
            let d = self.reduced_costs(&cb);
            let bland = self.iterations - start >= budget;
            let Some((k, dir)) = self.entering(&d, bland) else {
                self.refresh();
                return PhaseEnd::Optimal;
            };
            self.iterations += 1;
            let j = self.nonbasic[k];
            let flip_range = if dir > 0.0 { self.hi[j] - self.x[j] } else { self.x[j] - self.lo[j] };
            // Harris two-pass ratio test
            let mut theta_max = flip_range;
            for r in 0..self.m {
                let a = self.t[r * n + k];
                if a.abs() >= PIVOT_TOL {
                    theta_max = theta_max.min(self.limit(r, dir * a, FEAS_TOL));
                }
            }
            if theta_max.is_infinite() {
                return PhaseEnd::Unbounded;
            }
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.t[r * n + k];
                if a.abs() < PIVOT_TOL {
                    continue;
                }
                let ratio = self.limit(r, dir * a, 0.0);
                if ratio > theta_max {
                    continue;
                }
                let better = match leave {
                    None => true,
                    Some((lr, lratio)) if bland => {
                        ratio < lratio - 1e-12
                            || ((ratio - lratio).abs() <= 1e-12 && self.basis[r] < self.basis[lr])
                    }
                    Some((lr, _)) => a.abs() > self.t[lr * n + k].abs(),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, theta)) if theta < flip_range => self.pivot(r, k, dir, theta),
                _ => {
                    // entering variable runs to its opposite bound
                    self.shift(k, dir, flip_range);
                    self.x[j] = if dir > 0.0 { self.hi[j] } else { self.lo[j] };
                }
            }
            if (self.iterations - start) % REFRESH_EVERY == 0 {
                self.refresh();
            }
        }
    }

    fn shift(&mut self, k: usize, dir: f64, theta: f64) {
        let n = self.n;
        let j = self.nonbasic[k];
        self.x[j] += dir * theta;
        for r in 0..self.m {
            let a = self.t[r * n + k];
            if a != 0.0 {
                let b = self.basis[r];
                self.x[b] += dir * a * theta;
            }
        }
    }

    /// Bound at which basic `r`, moving at rate `delta`, meets its ratio-test limit.
    fn stop_bound(&self, r: usize, delta: f64) -> f64 {
        let b = self.basis[r];
        let (v, l, h) = (self.x[b], self.lo[b], self.hi[b]);
        let phase1 = self.cost.is_none();
        if delta < 0.0 {
            if phase1 && v > h + FEAS_TOL {
                h
            } else {
                l
            }
        } else if phase1 && v < l - FEAS_TOL {
            l
        } else {
            h
        }
    }

    /// Exchanges basic `r` with nonbasic position `k` after moving `theta`.
    fn pivot(&mut self, r: usize, k: usize, dir: f64, theta: f64) {
        let n = self.n;
        let target = self.stop_bound(r, dir * self.t[r * n + k]);
        self.shift(k, dir, theta);
        let leaving = self.basis[r];
        let entering = self.nonbasic[k];
        self.x[leaving] = target;
        let p = self.t[r * n + k];
        let inv = 1.0 / p;
        let (before, rest) = self.t.split_at_mut(r * n);
        let (prow, after) = rest.split_at_mut(n);
        // entering = (leaving - sum_{l != k} t_rl x_l) / p
        for v in prow.iter_mut() {
            *v *= -inv;
        }
        prow[k] = inv;
        for row in before.chunks_exact_mut(n).chain(after.chunks_exact_mut(n)) {
            let f = row[k];
            if f != 0.0 {
                for (v, &q) in row.iter_mut().zip(prow.iter()) {
                    *v += f * q;
                }
                row[k] = f * inv;
            }
        }
        self.basis[r] = entering;
        self.nonbasic[k] = leaving;
    }

    pub(crate) fn structural(&self) -> Vec<f64> {
        self.x[..self.n].to_vec()
    }

    /// Row multipliers `y` for `y . (A x - s)`, indexed like the relaxation's
    /// rows (zero for dropped free rows): the reduced cost of a nonbasic logical,
    /// or minus the current cost of a basic one.
    pub(crate) fn duals(&self, total_rows: usize) -> Vec<f64> {
        let cb = self.basic_costs();
        let d = self.reduced_costs(&cb);
        let mut y = vec![0.0; total_rows];
        for (k, &j) in self.nonbasic.iter().enumerate() {
            if j >= self.n {
                y[self.row_map[j - self.n]] = d[k];
            }
        }
        for (r, &b) in self.basis.iter().enumerate() {
            if b >= self.n {
                y[self.row_map[b - self.n]] = -cb[r];
            }
        }
        y
    }
}
