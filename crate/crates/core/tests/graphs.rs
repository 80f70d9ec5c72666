mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tammes::cases::build_p13;
use tammes::geom::SphericalPoint;
use tammes::graphs::{
    candidate_filter, canonical_form, contact_graph, fig8_fixtures, gamma13_fixtures, isomorphic, parse_adjacency_text,
    parse_planar_code, write_adjacency_text, FilterRules, PlanarEmbeddedGraph, DEFAULT_CONTACT_TOL,
};

pub fn icosahedron_points() -> Vec<SphericalPoint> {
    let p = (1.0 + 5f64.sqrt()) / 2.0;
    let mut v = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-p, p] {
            v.push([0.0, a, b]);
            v.push([a, b, 0.0]);
            v.push([b, 0.0, a]);
        }
    }
    v.into_iter().map(|x| SphericalPoint::normalize(x).unwrap()).collect()
}

fn all_small_graphs() -> Vec<PlanarEmbeddedGraph> {
    (4..=8).flat_map(|n| common::min_degree3_graphs(n, 3)).collect()
}

#[test]
fn triangulation_counts_match_the_known_sequence() {
    // triangulations of the sphere with minimum degree 3 on 4..=9 vertices
    let counts: Vec<usize> = (4..=9).map(|n| common::triangulations(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 5, 14, 50]);
}

#[test]
fn generated_graphs_are_planar_embeddings() {
    for g in all_small_graphs() {
        assert_eq!(g.euler_characteristic().unwrap(), 2);
        let faces = g.faces().unwrap();
        assert_eq!(faces.len() + g.n(), g.num_edges() + 2);
        let darts: usize = faces.iter().map(|f| f.len()).sum();
        assert_eq!(darts, 2 * g.num_edges());
    }
}

#[test]
fn icosahedron_passes_the_filter() {
    let g = contact_graph(&icosahedron_points(), DEFAULT_CONTACT_TOL).unwrap();
    assert_eq!((g.n(), g.num_edges()), (12, 30));
    assert!(candidate_filter(&g, &FilterRules::TAMMES13).passed);
}

#[test]
fn degree_six_is_reported() {
    let g = common::bipyramid(8);
    let r = candidate_filter(&g, &FilterRules::TAMMES13);
    assert!(!r.passed);
    assert!(r.violations.iter().any(|v| v.rule_id() == "degree"));
}

#[test]
fn optimal_contact_graph_is_the_fixture() {
    let g = contact_graph(&build_p13(), DEFAULT_CONTACT_TOL).unwrap();
    assert!(isomorphic(&g, &gamma13_fixtures()[0].graph));
    for f in gamma13_fixtures().iter().chain(fig8_fixtures().iter()) {
        assert!(candidate_filter(&f.graph, &FilterRules::TAMMES13).passed, "{}", f.name);
    }
}

#[test]
fn fixtures_are_pairwise_non_isomorphic() {
    let all: Vec<_> = gamma13_fixtures().into_iter().chain(fig8_fixtures()).collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            assert!(!isomorphic(&all[i].graph, &all[j].graph), "{} ~ {}", all[i].name, all[j].name);
        }
    }
}

#[test]
fn adjacency_text_round_trips() {
    let f = gamma13_fixtures();
    let text = write_adjacency_text(f.iter().map(|x| (Some(x.name.as_str()), &x.graph)));
    let back = parse_adjacency_text(&text).unwrap();
    assert_eq!(back.len(), 4);
    for (x, (name, g)) in f.iter().zip(&back) {
        assert_eq!(name.as_deref(), Some(x.name.as_str()));
        assert_eq!(g, &x.graph);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn planar_code_round_trips(pick in any::<prop::sample::Index>()) {
        let graphs = all_small_graphs();
        let g = pick.get(&graphs);
        let bytes = common::planar_code_bytes(std::slice::from_ref(g));
        prop_assert_eq!(parse_planar_code(&bytes).unwrap(), vec![g.clone()]);
    }

    #[test]
    fn isomorphism_ignores_labels(pick in any::<prop::sample::Index>(), seed in any::<u64>()) {
        let graphs = all_small_graphs();
        let g = pick.get(&graphs);
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabeled(&perm);
        prop_assert!(isomorphic(g, &h));
        prop_assert_eq!(canonical_form(g), canonical_form(&h));
    }

    #[test]
    fn edge_deletion_keeps_euler(pick in any::<prop::sample::Index>(), e in any::<prop::sample::Index>()) {
        let graphs = all_small_graphs();
        let g = pick.get(&graphs);
        let (u, v) = *e.get(&g.edges());
        let h = g.without_edge(u, v).unwrap();
        if h.num_components_nonisolated() == 1 && h.isolated().is_empty() {
            prop_assert_eq!(h.euler_characteristic().unwrap(), 2);
            prop_assert_eq!(h.faces().unwrap().len(), g.faces().unwrap().len() - 1);
        }
    }
}
