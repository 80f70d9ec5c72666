use super::PlanarEmbeddedGraph;
use serde::{Deserialize, Serialize};

/// Combinatorial necessary conditions on contact graphs of irreducible configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterRules {
    pub min_degree: usize,
    pub max_degree: usize,
    /// Largest admissible face, `floor(2 pi / d)`, never above 6.
    pub max_face: usize,
}

impl FilterRules {
    pub const TAMMES13: FilterRules = FilterRules { min_degree: 3, max_degree: 5, max_face: 6 };

    /// Face cap for a lower bound `d_lo` on the minimal distance.
    pub fn for_distance(d_lo: f64) -> Self {
        let cap = ((2.0 * std::f64::consts::PI) / d_lo).floor() as usize;
        FilterRules { min_degree: 3, max_degree: 5, max_face: cap.clamp(3, 6) }
    }
}

impl Default for FilterRules {
    fn default() -> Self {
        Self::TAMMES13
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Violation {
    Degree { vertex: usize, degree: usize },
    FaceSize { face: usize, size: usize },
    /// Non-simple face boundary or disconnected non-isolated part.
    FaceBoundary { detail: String },
    IsolatedPlacement { isolated: usize, hexagons: usize },
}

impl Violation {
    pub fn rule_id(&self) -> &'static str {
        match self {
            Violation::Degree { .. } => "degree",
            Violation::FaceSize { .. } => "face-size",
            Violation::FaceBoundary { .. } => "face-boundary",
            Violation::IsolatedPlacement { .. } => "isolated-vertex-placement",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

/// Degrees in `[min_degree, max_degree]` or zero, faces of size `3..=max_face`,
/// simple face boundaries, and enough hexagons to host every isolated vertex in a distinct one.
pub fn candidate_filter(g: &PlanarEmbeddedGraph, rules: &FilterRules) -> CandidateReport {
    let mut violations = Vec::new();
    for v in 0..g.n() {
        let deg = g.degree(v);
        if deg != 0 && !(rules.min_degree..=rules.max_degree).contains(&deg) {
            violations.push(Violation::Degree { vertex: v, degree: deg });
        }
    }
    let isolated = g.isolated().len();
    if isolated == g.n() {
        violations.push(Violation::FaceBoundary { detail: "no edges".into() });
        return CandidateReport { passed: false, violations };
    }
    if g.num_components_nonisolated() != 1 {
        violations.push(Violation::FaceBoundary { detail: "non-isolated part is disconnected".into() });
    }
    match g.faces() {
        Err(e) => violations.push(Violation::FaceBoundary { detail: e.to_string() }),
        Ok(faces) => {
            let mut hexagons = 0;
            for (i, f) in faces.iter().enumerate() {
                if !(3..=rules.max_face).contains(&f.len()) {
                    violations.push(Violation::FaceSize { face: i, size: f.len() });
                }
                if !f.is_simple() {
                    violations.push(Violation::FaceBoundary { detail: format!("face {i} not simple") });
                }
                if f.len() == 6 {
                    hexagons += 1;
                }
            }
            if isolated > hexagons {
                violations.push(Violation::IsolatedPlacement { isolated, hexagons });
            }
        }
    }
    CandidateReport { passed: violations.is_empty(), violations }
}
