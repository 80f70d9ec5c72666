use super::{GraphError, PlanarEmbeddedGraph};
use crate::geom::{angular_dist, cross, dot, tangent, SphericalPoint};

pub const DEFAULT_CONTACT_TOL: f64 = 1e-9;

/// Joins pairs at distance within `tol` of the minimum; neighbours are ordered
/// clockwise by azimuth seen from outside, starting at the lowest index.
pub fn contact_graph(points: &[SphericalPoint], tol: f64) -> Result<PlanarEmbeddedGraph, GraphError> {
    let n = points.len();
    if n < 2 {
        return Err(GraphError::Degenerate("need at least two points".into()));
    }
    let mut psi = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            psi = psi.min(angular_dist(points[i], points[j]));
        }
    }
    if psi < 1e-12 {
        return Err(GraphError::Degenerate("coincident points".into()));
    }
    let mut rotation = vec![Vec::new(); n];
    for i in 0..n {
        let c = points[i].to_array();
        let mut nbrs: Vec<(f64, usize)> = Vec::new();
        let mut e1 = None;
        for j in 0..n {
            if j == i || angular_dist(points[i], points[j]) > psi + tol {
                continue;
            }
            let t = tangent(c, points[j].to_array());
            let e1 = *e1.get_or_insert(t);
            let e2 = cross(c, e1);
            // counterclockwise azimuth about the outward normal
            let az = dot(t, e2).atan2(dot(t, e1));
            nbrs.push((az, j));
        }
        // clockwise = decreasing azimuth
        nbrs.sort_by(|a, b| b.0.total_cmp(&a.0));
        if let Some(k) = nbrs.iter().enumerate().min_by_key(|(_, &(_, j))| j).map(|(k, _)| k) {
            nbrs.rotate_left(k);
        }
        rotation[i] = nbrs.into_iter().map(|(_, j)| j).collect();
    }
    PlanarEmbeddedGraph::from_rotation(rotation)
}
