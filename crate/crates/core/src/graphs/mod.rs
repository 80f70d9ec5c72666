//! Planar embedded graphs given by rotation systems, the plantri `planar_code`
//! reader/writer, candidate filtering, contact graphs of point sets, abstract
//! isomorphism, and the 13-point fixtures.

mod contact;
mod filter;
mod fixtures;
mod iso;
mod planar_code;
mod text;

pub use contact::{contact_graph, DEFAULT_CONTACT_TOL};
pub use filter::{candidate_filter, CandidateReport, FilterRules, Violation};
pub use fixtures::{
    fig8_fixtures, gamma13_fixtures, gamma13_labels, NamedGraph, GAMMA13_DELETIONS,
};
pub use iso::{canonical_form, isomorphic, CanonicalForm};
pub use planar_code::{parse_planar_code, write_planar_code, PlanarCodeReader, PLANAR_CODE_HEADER};
pub use text::{parse_adjacency_text, write_adjacency_text};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("inconsistent rotation system: {0}")]
    Structure(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// A face as its vertex cycle, traversed counterclockwise seen from outside.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub vertices: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// No vertex repeats along the boundary.
    pub fn is_simple(&self) -> bool {
        let mut v = self.vertices.clone();
        v.sort_unstable();
        v.windows(2).all(|w| w[0] != w[1])
    }
}

/// Graph with a rotation system: `rotation[v]` lists the neighbours of `v` in
/// clockwise order seen from outside the sphere. Vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PlanarEmbeddedGraph {
    rotation: Vec<Vec<usize>>,
}

impl PlanarEmbeddedGraph {
    /// Checks symmetry, range, loops and multi-edges.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self, GraphError> {
        let n = rotation.len();
        for (v, nbrs) in rotation.iter().enumerate() {
            let mut seen = nbrs.clone();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::Structure(format!("vertex {v} has a repeated neighbour")));
            }
            for &u in nbrs {
                if u >= n {
                    return Err(GraphError::Structure(format!("neighbour {u} of {v} out of range")));
                }
                if u == v {
                    return Err(GraphError::Structure(format!("loop at vertex {v}")));
                }
                if !rotation[u].contains(&v) {
                    return Err(GraphError::Structure(format!("edge {v}-{u} has no reverse")));
                }
            }
        }
        Ok(Self { rotation })
    }

    pub fn n(&self) -> usize {
        self.rotation.len()
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn num_edges(&self) -> usize {
        self.rotation.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rotation[u].contains(&v)
    }

    /// Undirected edges with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = (0..self.n())
            .flat_map(|u| self.rotation[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn isolated(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.rotation[v].is_empty()).collect()
    }

    /// The graph with edge `u-v` deleted; rotation order of the rest is kept.
    pub fn without_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::Structure(format!("no edge {u}-{v}")));
        }
        let mut rot = self.rotation.clone();
        rot[u].retain(|&x| x != v);
        rot[v].retain(|&x| x != u);
        Ok(Self { rotation: rot })
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        let mut rot = vec![Vec::new(); self.n()];
        for v in 0..self.n() {
            rot[perm[v]] = self.rotation[v].iter().map(|&u| perm[u]).collect();
        }
        Self { rotation: rot }
    }

    /// Faces of the non-isolated part by rotation-system traversal: after
    /// arriving at `v` from `u`, leave towards the clockwise successor of `u`.
    /// Each directed edge is used exactly once.
    pub fn faces(&self) -> Result<Vec<Face>, GraphError> {
        let n = self.n();
        let pos: Vec<std::collections::HashMap<usize, usize>> = self
            .rotation
            .iter()
            .map(|r| r.iter().enumerate().map(|(i, &u)| (u, i)).collect())
            .collect();
        let mut used: Vec<Vec<bool>> = self.rotation.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for s in 0..n {
            for si in 0..self.rotation[s].len() {
                if used[s][si] {
                    continue;
                }
                let mut cycle = Vec::new();
                let (mut u, mut i) = (s, si);
                loop {
                    if used[u][i] {
                        if u == s && i == si {
                            break;
                        }
                        return Err(GraphError::Structure("face traversal does not close".into()));
                    }
                    used[u][i] = true;
                    cycle.push(u);
                    let v = self.rotation[u][i];
                    let back = *pos[v].get(&u).ok_or_else(|| {
                        GraphError::Structure(format!("edge {u}-{v} has no reverse"))
                    })?;
                    let j = (back + 1) % self.rotation[v].len();
                    u = v;
                    i = j;
                }
                faces.push(Face { vertices: cycle });
            }
        }
        Ok(faces)
    }

    /// Connected components of the non-isolated part.
    pub fn num_components_nonisolated(&self) -> usize {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] || self.rotation[s].is_empty() {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &v in &self.rotation[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        count
    }

    /// `V - E + F` over the non-isolated part; 2 for a connected plane embedding.
    pub fn euler_characteristic(&self) -> Result<i64, GraphError> {
        let v = (self.n() - self.isolated().len()) as i64;
        let e = self.num_edges() as i64;
        let f = self.faces()?.len() as i64;
        Ok(v - e + f)
    }
}
