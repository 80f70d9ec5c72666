//! Branch-and-prune over the angle relaxations of one graph, and the
//! streaming pipeline that filters and prunes a planar_code input.

mod report;

pub use report::{
    classify, read_resume, GraphRecord, PipelineReport, PipelineSummary, Stage, SurvivorClass,
};

use crate::graphs::{candidate_filter, FilterRules, PlanarEmbeddedGraph};
use crate::lp::{tighten_box, TightenResult};
use crate::relax::{
    build_angle_system, level1_constraints, level2_tighten, AngleSystem, BranchInfo, Level1Profile,
    Level2Rejection, LinearRelaxation,
};
use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SplitRule {
    /// Largest width relative to the level-one box, lowest index on ties.
    WidestScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruneConfig {
    pub max_depth: usize,
    /// Stop re-linearising once no bound moves by more than this.
    pub converge_tol: f64,
    /// Level-two rounds per node.
    pub round_cap: usize,
    /// Boxes whose scaled widths are all below this count as points.
    pub min_width: f64,
    pub split_rule: SplitRule,
    pub profile: Level1Profile,
    /// Keep the split tree of eliminated branches in the outcome.
    pub keep_tree: bool,
}

impl Default for PruneConfig {
    fn default() -> Self {
        Self {
            max_depth: 40,
            converge_tol: 1e-4,
            round_cap: 30,
            min_width: 1e-6,
            split_rule: SplitRule::WidestScaled,
            profile: Level1Profile::tammes13(),
            keep_tree: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PruneStatus {
    Eliminated,
    Survived,
}

/// How a leaf of the split tree was closed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LeafProof {
    /// LP infeasibility with a verified Farkas multiplier vector.
    Farkas { support: usize },
    /// A sampled whole-box condition failed.
    Geometric { reason: Level2Rejection },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "kebab-case")]
pub enum SplitTree {
    Leaf { proof: LeafProof, rounds: usize },
    Split { var: usize, at: f64, children: Box<[SplitTree; 2]> },
}

impl SplitTree {
    pub fn leaves(&self) -> usize {
        match self {
            SplitTree::Leaf { .. } => 1,
            SplitTree::Split { children, .. } => children[0].leaves() + children[1].leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            SplitTree::Leaf { .. } => 0,
            SplitTree::Split { children, .. } => 1 + children[0].depth().max(children[1].depth()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchOutcome {
    pub branch: String,
    pub status: PruneStatus,
    /// Deepest split level reached (0 when settled at the root).
    pub depth: usize,
    pub nodes: usize,
    /// Closed at the first level-one tightening.
    pub level1: bool,
    pub tree: Option<SplitTree>,
    /// Surviving box as `(lo, hi)` per variable.
    pub residual: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PruneOutcome {
    pub id: String,
    pub status: PruneStatus,
    pub branches: Vec<BranchOutcome>,
    pub nodes: usize,
    pub depth: usize,
    pub wall_ms: f64,
}

impl PruneOutcome {
    /// Every branch closed by the level-one tightening alone.
    pub fn eliminated_at_level1(&self) -> bool {
        self.status == PruneStatus::Eliminated && self.branches.iter().all(|b| b.level1)
    }

    pub fn residual_boxes(&self) -> impl Iterator<Item = (&str, &[(f64, f64)])> {
        self.branches.iter().filter_map(|b| b.residual.as_deref().map(|r| (b.branch.as_str(), r)))
    }
}

enum NodeResult {
    Closed(SplitTree),
    Survived(LinearRelaxation, usize),
}

struct Search<'a> {
    sys: &'a AngleSystem,
    branch: &'a BranchInfo,
    cfg: &'a PruneConfig,
    scale: Vec<f64>,
    nodes: usize,
}

fn farkas_support(y: &[f64]) -> usize {
    y.iter().filter(|v| v.abs() > 0.0).count()
}

impl Search<'_> {
    /// Tighten, then alternate re-linearisation and tightening until bounds settle.
    fn settle(&self, relax: LinearRelaxation) -> Result<(LinearRelaxation, usize), (LeafProof, usize)> {
        let mut r = match tighten_box(&relax) {
            TightenResult::Infeasible { farkas } => {
                return Err((LeafProof::Farkas { support: farkas_support(&farkas) }, 0))
            }
            TightenResult::Tightened { relax, .. } => relax,
        };
        for round in 1..=self.cfg.round_cap {
            let lin = match level2_tighten(&r, self.sys, self.branch) {
                Ok(l) => l,
                Err(reason) => return Err((LeafProof::Geometric { reason }, round)),
            };
            match tighten_box(&lin) {
                TightenResult::Infeasible { farkas } => {
                    return Err((LeafProof::Farkas { support: farkas_support(&farkas) }, round))
                }
                TightenResult::Tightened { relax, .. } => {
                    let change = (0..r.num_vars())
                        .map(|j| (relax.lo[j] - r.lo[j]).max(r.hi[j] - relax.hi[j]))
                        .fold(0.0, f64::max);
                    r = relax;
                    if change < self.cfg.converge_tol {
                        return Ok((r, round));
                    }
                }
            }
        }
        Ok((r, self.cfg.round_cap))
    }

    fn split_var(&self, r: &LinearRelaxation) -> Option<(usize, f64)> {
        let SplitRule::WidestScaled = self.cfg.split_rule;
        let mut best: Option<(usize, f64)> = None;
        for j in 0..r.num_vars() {
            if self.scale[j] <= 0.0 {
                continue;
            }
            let w = r.width(j) / self.scale[j];
            if best.is_none_or(|(_, bw)| w > bw) {
                best = Some((j, w));
            }
        }
        best.filter(|&(_, w)| w >= self.cfg.min_width)
    }

    fn explore(&mut self, relax: LinearRelaxation, depth: usize) -> NodeResult {
        self.nodes += 1;
        let (r, _) = match self.settle(relax) {
            Err((proof, rounds)) => return NodeResult::Closed(SplitTree::Leaf { proof, rounds }),
            Ok(x) => x,
        };
        if depth >= self.cfg.max_depth {
            return NodeResult::Survived(r, depth);
        }
        let Some((var, _)) = self.split_var(&r) else {
            return NodeResult::Survived(r, depth);
        };
        let at = 0.5 * (r.lo[var] + r.hi[var]);
        let mut left = r.clone();
        left.hi[var] = at;
        let mut right = r;
        right.lo[var] = at;
        let a = match self.explore(left, depth + 1) {
            NodeResult::Closed(t) => t,
            s => return s,
        };
        let b = match self.explore(right, depth + 1) {
            NodeResult::Closed(t) => t,
            s => return s,
        };
        NodeResult::Closed(SplitTree::Split { var, at, children: Box::new([a, b]) })
    }
}

fn prune_branch(sys: &AngleSystem, info: &BranchInfo, relax: LinearRelaxation, cfg: &PruneConfig) -> BranchOutcome {
    let scale: Vec<f64> = (0..relax.num_vars()).map(|j| relax.width(j)).collect();
    let level1 = match tighten_box(&relax) {
        TightenResult::Infeasible { .. } => true,
        TightenResult::Tightened { .. } => false,
    };
    let mut search = Search { sys, branch: info, cfg, scale, nodes: 0 };
    match search.explore(relax, 0) {
        NodeResult::Closed(tree) => BranchOutcome {
            branch: info.label(),
            status: PruneStatus::Eliminated,
            depth: tree.depth(),
            nodes: search.nodes,
            level1,
            tree: cfg.keep_tree.then_some(tree),
            residual: None,
        },
        NodeResult::Survived(r, depth) => BranchOutcome {
            branch: info.label(),
            status: PruneStatus::Survived,
            depth,
            nodes: search.nodes,
            level1: false,
            tree: None,
            residual: Some(r.lo.iter().copied().zip(r.hi.iter().copied()).collect()),
        },
    }
}

/// Prunes every level-one alternative of `g`. The graph survives if any
/// alternative keeps a nonempty box down to the depth limit.
pub fn prune_graph(id: &str, g: &PlanarEmbeddedGraph, cfg: &PruneConfig) -> PruneOutcome {
    let start = Instant::now();
    let sys = match build_angle_system(g) {
        Ok(s) => s,
        Err(_) => {
            return PruneOutcome {
                id: id.into(),
                status: PruneStatus::Eliminated,
                branches: Vec::new(),
                nodes: 0,
                depth: 0,
                wall_ms: start.elapsed().as_secs_f64() * 1e3,
            }
        }
    };
    let set = level1_constraints(&sys, &cfg.profile);
    let mut branches = Vec::new();
    let mut status = PruneStatus::Eliminated;
    for (info, relax) in set.branches {
        let b = prune_branch(&sys, &info, relax, cfg);
        let survived = b.status == PruneStatus::Survived;
        branches.push(b);
        if survived {
            status = PruneStatus::Survived;
            break;
        }
    }
    PruneOutcome {
        id: id.into(),
        status,
        nodes: branches.iter().map(|b| b.nodes).sum(),
        depth: branches.iter().map(|b| b.depth).max().unwrap_or(0),
        branches,
        wall_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// Filter then prune one graph, returning the record the pipeline reports.
pub fn process_graph(
    index: usize,
    id: String,
    g: &PlanarEmbeddedGraph,
    rules: &FilterRules,
    cfg: &PruneConfig,
) -> GraphRecord {
    let filter = candidate_filter(g, rules);
    if !filter.passed {
        return GraphRecord::filtered(index, id, &filter);
    }
    let out = prune_graph(&id, g, cfg);
    GraphRecord::pruned(index, g, out)
}

/// Pipeline knobs that do not affect any outcome.
#[derive(Debug, Clone, Default)]
pub struct PipelineOptions {
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    /// Keep per-graph wall times in the records.
    pub timings: bool,
    /// Records from an earlier partial run, reused by input index.
    pub resume: std::collections::BTreeMap<usize, GraphRecord>,
    /// Graphs parsed per parallel batch.
    pub batch: usize,
}

pub fn tolerances(cfg: &PruneConfig) -> report::Tolerances {
    report::Tolerances {
        lp_feasibility: crate::lp::FEAS_TOL,
        lp_witness: crate::lp::WITNESS_TOL,
        farkas_gap: crate::lp::FARKAS_GAP,
        converge: cfg.converge_tol,
        max_depth: cfg.max_depth,
        min_width: cfg.min_width,
        d_window: (cfg.profile.d_lo, cfg.profile.d_hi),
    }
}

/// Streams planar_code graphs through the filter and the pruner. Records are
/// emitted to `sink` in input order as each batch completes. Graph ids are
/// `g<index>` with 1-based indices.
pub fn run_pipeline<R: std::io::Read>(
    input: R,
    rules: &FilterRules,
    cfg: &PruneConfig,
    opts: &PipelineOptions,
    mut sink: impl FnMut(&GraphRecord),
) -> Result<PipelineReport, crate::graphs::GraphError> {
    use rayon::prelude::*;
    let pool = (opts.jobs > 0)
        .then(|| rayon::ThreadPoolBuilder::new().num_threads(opts.jobs).build())
        .transpose()
        .map_err(|e| crate::graphs::GraphError::Io(e.to_string()))?;
    let batch = if opts.batch == 0 { 64 } else { opts.batch };
    let mut reader = crate::graphs::PlanarCodeReader::new(input);
    let mut records = Vec::new();
    let mut index = 0;
    loop {
        let mut chunk = Vec::with_capacity(batch);
        for g in reader.by_ref().take(batch) {
            index += 1;
            chunk.push((index, g?));
        }
        if chunk.is_empty() {
            break;
        }
        let work = || -> Vec<GraphRecord> {
            chunk
                .par_iter()
                .map(|(i, g)| {
                    if let Some(r) = opts.resume.get(i) {
                        return r.clone();
                    }
                    let mut rec = process_graph(*i, format!("g{i}"), g, rules, cfg);
                    if !opts.timings {
                        rec.wall_ms = None;
                    }
                    rec
                })
                .collect()
        };
        let done = match &pool {
            Some(p) => p.install(work),
            None => work(),
        };
        for r in done {
            sink(&r);
            records.push(r);
        }
    }
    let summary = PipelineSummary::from_records(&records, tolerances(cfg));
    Ok(PipelineReport { records, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        let c = PruneConfig::default();
        assert_eq!(c.max_depth, 40);
        assert!(c.converge_tol > 0.0 && c.min_width > 0.0);
    }
}
