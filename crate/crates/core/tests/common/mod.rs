//! Test-side generator of small planar graphs with minimum degree three, a
//! stand-in for plantri output: all triangulations by flip closure from a
//! bipyramid, then every deletion of up to `max_deleted` edges that keeps the
//! minimum degree, deduplicated up to isomorphism.
#![allow(dead_code)]

pub mod oracles;

use std::collections::{BTreeSet, HashSet};
use tammes::graphs::{canonical_form, write_planar_code, PlanarEmbeddedGraph};

/// Bipyramid over an `(n - 2)`-gon: poles `0, 1`, ring `2..n`. Rotations are
/// clockwise seen from outside, matching the contact-graph convention.
pub fn bipyramid(n: usize) -> PlanarEmbeddedGraph {
    assert!(n >= 5);
    let k = n - 2;
    let ring = |i: usize| 2 + (i % k);
    let mut rot = vec![Vec::new(); n];
    // from the north pole, ring vertices appear in decreasing order clockwise
    rot[0] = (0..k).rev().map(ring).collect();
    rot[1] = (0..k).map(ring).collect();
    for i in 0..k {
        rot[ring(i)] = vec![0, ring(i + 1), 1, ring(i + k - 1)];
    }
    PlanarEmbeddedGraph::from_rotation(rot).expect("bipyramid rotation")
}

pub fn tetrahedron() -> PlanarEmbeddedGraph {
    PlanarEmbeddedGraph::from_rotation(vec![vec![1, 3, 2], vec![0, 2, 3], vec![0, 3, 1], vec![0, 1, 2]]).unwrap()
}

fn is_triangulation(g: &PlanarEmbeddedGraph) -> bool {
    g.euler_characteristic().ok() == Some(2) && g.faces().map(|f| f.iter().all(|f| f.len() == 3)).unwrap_or(false)
}

/// Replaces `u v` by the other diagonal of its two triangles.
fn flip(g: &PlanarEmbeddedGraph, u: usize, v: usize) -> Option<PlanarEmbeddedGraph> {
    if g.degree(u) < 4 || g.degree(v) < 4 {
        return None;
    }
    let ru = g.neighbors(u);
    let i = ru.iter().position(|&x| x == v)?;
    let w = ru[(i + 1) % ru.len()];
    let x = ru[(i + ru.len() - 1) % ru.len()];
    if w == x || g.has_edge(w, x) {
        return None;
    }
    let mut rot: Vec<Vec<usize>> = g.rotation().to_vec();
    rot[u].retain(|&y| y != v);
    rot[v].retain(|&y| y != u);
    let insert_between = |r: &mut Vec<usize>, a: usize, b: usize, new: usize| {
        let m = r.len();
        let ia = r.iter().position(|&y| y == a).unwrap();
        let ib = r.iter().position(|&y| y == b).unwrap();
        if (ia + 1) % m == ib {
            r.insert(ia + 1, new);
        } else {
            r.insert(ib + 1, new);
        }
    };
    insert_between(&mut rot[w], u, v, x);
    insert_between(&mut rot[x], u, v, w);
    let h = PlanarEmbeddedGraph::from_rotation(rot).ok()?;
    is_triangulation(&h).then_some(h)
}

/// All triangulations on `n >= 4` vertices with minimum degree three.
pub fn triangulations(n: usize) -> Vec<PlanarEmbeddedGraph> {
    let seed = if n == 4 { tetrahedron() } else { bipyramid(n) };
    assert!(is_triangulation(&seed));
    let mut seen = HashSet::from([canonical_form(&seed)]);
    let mut out = vec![seed.clone()];
    let mut queue = vec![seed];
    while let Some(g) = queue.pop() {
        for (u, v) in g.edges() {
            if let Some(h) = flip(&g, u, v) {
                if (0..n).all(|x| h.degree(x) >= 3) && seen.insert(canonical_form(&h)) {
                    out.push(h.clone());
                    queue.push(h);
                }
            }
        }
    }
    out
}

/// Planar embedded graphs on `n` vertices with minimum degree three obtained
/// from triangulations by deleting at most `max_deleted` edges.
pub fn min_degree3_graphs(n: usize, max_deleted: usize) -> Vec<PlanarEmbeddedGraph> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = Vec::new();
    for t in triangulations(n) {
        if seen.insert(canonical_form(&t)) {
            out.push(t.clone());
            frontier.push(t);
        }
    }
    for _ in 0..max_deleted {
        let mut next = Vec::new();
        for g in &frontier {
            for (u, v) in g.edges() {
                if g.degree(u) <= 3 || g.degree(v) <= 3 {
                    continue;
                }
                let h = g.without_edge(u, v).unwrap();
                if h.num_components_nonisolated() != 1 {
                    continue;
                }
                if seen.insert(canonical_form(&h)) {
                    out.push(h.clone());
                    next.push(h);
                }
            }
        }
        frontier = next;
    }
    out
}

pub fn planar_code_bytes(graphs: &[PlanarEmbeddedGraph]) -> Vec<u8> {
    let mut buf = Vec::new();
    write_planar_code(&mut buf, graphs.iter()).unwrap();
    buf
}
