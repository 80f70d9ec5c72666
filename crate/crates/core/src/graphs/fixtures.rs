use super::{contact_graph, PlanarEmbeddedGraph, DEFAULT_CONTACT_TOL};
use crate::cases::build_p13;

#[derive(Debug, Clone, PartialEq)]
pub struct NamedGraph {
    pub name: String,
    pub graph: PlanarEmbeddedGraph,
}

/// Frame letters of `v1..v13` as used by [`crate::cases::label`].
pub fn gamma13_labels() -> [&'static str; 13] {
    ["A", "B", "C", "D", "E", "F", "P", "W", "R", "X", "S", "U", "T"]
}

/// Edges (1-based `v` labels) removed from the optimal contact graph to obtain
/// the three near-optimal subgraphs. The first removes the triangle edge
/// `v9 v13`; the second also `v11 v12`, merging both triangles at the square
/// `v9 v11 v12 v13` into a hexagon; the third isolates `v13` inside the hexagon
/// `v5 v10 v9 v11 v12 v8`.
pub const GAMMA13_DELETIONS: [&[(usize, usize)]; 3] = [
    &[(9, 13)],
    &[(9, 13), (11, 12)],
    &[(8, 13), (9, 13), (10, 13), (12, 13)],
];

/// Graph-(a)-style deletions: each removes edges between a triangle and a rhombus,
/// leaving pentagons that are barely non-convex at the optimum.
const FIG8_DELETIONS: [(&str, &[(usize, usize)]); 3] = [
    ("fig8-a", &[(3, 11), (7, 12), (9, 10), (8, 13)]),
    ("fig8-single", &[(3, 11)]),
    ("fig8-pair", &[(3, 11), (8, 13)]),
];

fn delete(g: &PlanarEmbeddedGraph, edges: &[(usize, usize)]) -> PlanarEmbeddedGraph {
    edges.iter().fold(g.clone(), |g, &(u, v)| {
        g.without_edge(u - 1, v - 1).expect("fixture edge present in the optimal contact graph")
    })
}

/// The optimal contact graph followed by its three subgraphs.
pub fn gamma13_fixtures() -> [NamedGraph; 4] {
    let g0 = contact_graph(&build_p13(), DEFAULT_CONTACT_TOL)
        .expect("P13 points are distinct");
    let sub = |k: usize| NamedGraph {
        name: format!("gamma13-{}", k + 1),
        graph: delete(&g0, GAMMA13_DELETIONS[k]),
    };
    [
        NamedGraph { name: "gamma13-0".into(), graph: g0.clone() },
        sub(0),
        sub(1),
        sub(2),
    ]
}

/// Subgraphs of the optimal contact graph that must be eliminated by pruning.
pub fn fig8_fixtures() -> Vec<NamedGraph> {
    let g0 = gamma13_fixtures()[0].graph.clone();
    FIG8_DELETIONS
        .iter()
        .map(|(name, e)| NamedGraph { name: name.to_string(), graph: delete(&g0, e) })
        .collect()
}
