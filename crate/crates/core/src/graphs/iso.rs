//! Canonical labelling by colour refinement with individualisation; the
//! canonical form is the lexicographically least sorted edge list over all
//! leaves of the search tree.

use super::PlanarEmbeddedGraph;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Refines `colors` to the coarsest equitable partition. Colour ids are ranks of
/// label-invariant signatures, so isomorphic inputs get corresponding colourings.
fn refine(adj: &[Vec<usize>], colors: &mut Vec<usize>) {
    loop {
        let mut sigs: Vec<(usize, Vec<usize>)> = (0..adj.len())
            .map(|v| {
                let mut nc: Vec<usize> = adj[v].iter().map(|&u| colors[u]).collect();
                nc.sort_unstable();
                (colors[v], nc)
            })
            .collect();
        let mut uniq = sigs.clone();
        uniq.sort();
        uniq.dedup();
        let before = colors.iter().copied().max().map_or(0, |m| m + 1);
        for (v, s) in sigs.drain(..).enumerate() {
            colors[v] = uniq.binary_search(&s).expect("signature present");
        }
        if uniq.len() == before {
            return;
        }
    }
}

fn num_colors(colors: &[usize]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m + 1)
}

fn search(adj: &[Vec<usize>], colors: Vec<usize>, best: &mut Option<Vec<(usize, usize)>>) {
    let n = adj.len();
    if num_colors(&colors) == n {
        let mut e: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| adj[u].iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u < v)
            .map(|(u, v)| {
                let (a, b) = (colors[u], colors[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            *best = Some(e);
        }
        return;
    }
    // first smallest non-singleton cell
    let mut sizes = vec![0usize; num_colors(&colors)];
    for &c in &colors {
        sizes[c] += 1;
    }
    let target = (0..sizes.len())
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))
        .expect("non-discrete partition has a non-singleton cell");
    for v in (0..n).filter(|&v| colors[v] == target) {
        // individualise v ahead of the rest of its cell
        let mut c2: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
        c2[v] -= 1;
        let mut ranks: Vec<usize> = c2.clone();
        ranks.sort_unstable();
        ranks.dedup();
        let mut c3: Vec<usize> = c2.iter().map(|c| ranks.binary_search(c).unwrap()).collect();
        refine(adj, &mut c3);
        search(adj, c3, best);
    }
}

/// Labelling-independent form; equal forms iff the graphs are isomorphic.
pub fn canonical_form(g: &PlanarEmbeddedGraph) -> CanonicalForm {
    let adj: Vec<Vec<usize>> = g.rotation().to_vec();
    let mut colors: Vec<usize> = {
        let mut degs: Vec<usize> = adj.iter().map(Vec::len).collect();
        let mut uniq = degs.clone();
        uniq.sort_unstable();
        uniq.dedup();
        for d in degs.iter_mut() {
            *d = uniq.binary_search(d).unwrap();
        }
        degs
    };
    refine(&adj, &mut colors);
    let mut best = None;
    search(&adj, colors, &mut best);
    CanonicalForm { n: g.n(), edges: best.unwrap_or_default() }
}

/// Abstract (not embedding-sensitive) isomorphism.
pub fn isomorphic(g1: &PlanarEmbeddedGraph, g2: &PlanarEmbeddedGraph) -> bool {
    if g1.n() != g2.n() || g1.num_edges() != g2.num_edges() {
        return false;
    }
    let mut d1: Vec<usize> = (0..g1.n()).map(|v| g1.degree(v)).collect();
    let mut d2: Vec<usize> = (0..g2.n()).map(|v| g2.degree(v)).collect();
    d1.sort_unstable();
    d2.sort_unstable();
    d1 == d2 && canonical_form(g1) == canonical_form(g2)
}
