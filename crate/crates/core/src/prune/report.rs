use super::{PruneOutcome, PruneStatus};
use crate::graphs::{canonical_form, gamma13_fixtures, CandidateReport, CanonicalForm, PlanarEmbeddedGraph};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Filtered,
    EliminatedLevel1,
    EliminatedLater,
    Survived,
}

/// Fixture name of a survivor, or `unknown`.
pub type SurvivorClass = String;

/// One line of the JSON-lines report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphRecord {
    pub index: usize,
    pub id: String,
    pub stage: Stage,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<String>,
    #[serde(default)]
    pub nodes: usize,
    #[serde(default)]
    pub depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<SurvivorClass>,
    /// Range of `d` over the surviving box.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d_range: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
}

impl GraphRecord {
    pub fn filtered(index: usize, id: String, report: &CandidateReport) -> Self {
        let mut violations: Vec<String> = report.violations.iter().map(|v| v.rule_id().to_string()).collect();
        violations.dedup();
        Self {
            index,
            id,
            stage: Stage::Filtered,
            violations,
            nodes: 0,
            depth: 0,
            class: None,
            d_range: None,
            wall_ms: None,
        }
    }

    pub fn pruned(index: usize, g: &PlanarEmbeddedGraph, out: PruneOutcome) -> Self {
        let stage = match out.status {
            PruneStatus::Survived => Stage::Survived,
            _ if out.eliminated_at_level1() => Stage::EliminatedLevel1,
            _ => Stage::EliminatedLater,
        };
        let d_range = out.residual_boxes().next().and_then(|(_, b)| {
            // d sits just before the alpha auxiliary at the end of the variable list
            b.len().checked_sub(2).map(|k| b[k])
        });
        Self {
            index,
            id: out.id.clone(),
            stage,
            violations: Vec::new(),
            nodes: out.nodes,
            depth: out.depth,
            class: (stage == Stage::Survived).then(|| classify(g)),
            d_range,
            wall_ms: Some(out.wall_ms),
        }
    }
}

fn fixture_forms() -> &'static [(String, CanonicalForm)] {
    static FORMS: OnceLock<Vec<(String, CanonicalForm)>> = OnceLock::new();
    FORMS.get_or_init(|| gamma13_fixtures().iter().map(|f| (f.name.clone(), canonical_form(&f.graph))).collect())
}

/// Name of the optimal-graph fixture isomorphic to `g`, else `unknown`.
pub fn classify(g: &PlanarEmbeddedGraph) -> SurvivorClass {
    if g.n() != 13 {
        return "unknown".into();
    }
    let cf = canonical_form(g);
    fixture_forms()
        .iter()
        .find(|(_, f)| *f == cf)
        .map(|(n, _)| n.clone())
        .unwrap_or_else(|| "unknown".into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurvivorEntry {
    pub id: String,
    pub class: SurvivorClass,
}

/// Tolerances in force, listed for auditability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub lp_feasibility: f64,
    pub lp_witness: f64,
    pub farkas_gap: f64,
    pub converge: f64,
    pub max_depth: usize,
    pub min_width: f64,
    pub d_window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub parsed: usize,
    pub filtered_out: usize,
    pub passed_filter: usize,
    pub eliminated_level1: usize,
    pub eliminated_later: usize,
    pub survived: usize,
    pub survivors: Vec<SurvivorEntry>,
    pub violation_histogram: BTreeMap<String, usize>,
    pub tolerances: Tolerances,
}

impl PipelineSummary {
    pub fn from_records(records: &[GraphRecord], tolerances: Tolerances) -> Self {
        let count = |s: Stage| records.iter().filter(|r| r.stage == s).count();
        let mut violation_histogram = BTreeMap::new();
        for r in records {
            for v in &r.violations {
                *violation_histogram.entry(v.clone()).or_insert(0) += 1;
            }
        }
        let mut survivors: Vec<SurvivorEntry> = records
            .iter()
            .filter(|r| r.stage == Stage::Survived)
            .map(|r| SurvivorEntry { id: r.id.clone(), class: r.class.clone().unwrap_or_else(|| "unknown".into()) })
            .collect();
        survivors.sort_by(|a, b| a.id.cmp(&b.id));
        let filtered_out = count(Stage::Filtered);
        Self {
            parsed: records.len(),
            filtered_out,
            passed_filter: records.len() - filtered_out,
            eliminated_level1: count(Stage::EliminatedLevel1),
            eliminated_later: count(Stage::EliminatedLater),
            survived: count(Stage::Survived),
            survivors,
            violation_histogram,
            tolerances,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub records: Vec<GraphRecord>,
    pub summary: PipelineSummary,
}

impl PipelineReport {
    /// One JSON object per graph in input order, then `{"summary": ...}`.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for r in &self.records {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        serde_json::to_writer(&mut w, &serde_json::json!({ "summary": &self.summary }))?;
        writeln!(w)
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,id,stage,nodes,depth,class,d_lo,d_hi,violations")?;
        for r in &self.records {
            let stage = serde_json::to_value(r.stage).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
            let (dl, dh) = r.d_range.map(|(a, b)| (a.to_string(), b.to_string())).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                r.index,
                r.id,
                stage,
                r.nodes,
                r.depth,
                r.class.as_deref().unwrap_or(""),
                dl,
                dh,
                r.violations.join(";")
            )?;
        }
        Ok(())
    }

    /// Drops wall-clock fields so that reports compare byte for byte.
    pub fn without_timings(mut self) -> Self {
        for r in &mut self.records {
            r.wall_ms = None;
        }
        self
    }
}

/// Completed records from a partial JSON-lines report. Unparseable lines,
/// such as a truncated final line or the summary, are skipped.
pub fn read_resume<R: BufRead>(r: R) -> std::io::Result<BTreeMap<usize, GraphRecord>> {
    let mut out = BTreeMap::new();
    for line in r.lines() {
        let line = line?;
        if let Ok(rec) = serde_json::from_str::<GraphRecord>(&line) {
            out.insert(rec.index, rec);
        }
    }
    Ok(out)
}
