use super::graph::{Cover, CoverGraph};
use crate::bitset::BitSet;

#[derive(Clone, Debug)]
pub struct CliqueReduction {
    /// Remaining graph with reduced weights; forced vertices are inactive.
    pub reduced: CoverGraph,
    /// Vertices whose weight dropped to zero, priced at original weights.
    pub forced: Cover,
    /// Each processed clique with the amount subtracted from its members.
    pub dual_log: Vec<(Vec<usize>, f64)>,
}

/// Local-ratio clique removal: while `find` reports a clique of size at
/// least three, subtract its minimum weight from every member and force the
/// members that reach zero.
pub fn clique_reduce<F>(g: &CoverGraph, mut find: F) -> CliqueReduction
where
    F: FnMut(&CoverGraph) -> Option<Vec<usize>>,
{
    let mut w = g.weights().to_vec();
    let mut forced = BitSet::new(g.n());
    let mut cur = g.clone();
    let mut dual_log = Vec::new();
    while let Some(clique) = find(&cur) {
        assert!(
            clique.len() >= 3,
            "clique enumerators must return cliques of size >= 3"
        );
        let delta = clique.iter().map(|&v| w[v]).fold(f64::INFINITY, f64::min);
        for &v in &clique {
            w[v] -= delta;
            if w[v] <= 0.0 {
                w[v] = 0.0;
                forced.insert(v);
            }
        }
        dual_log.push((clique, delta));
        cur = cur
            .with_weights(w.clone())
            .expect("same universe")
            .induced(&forced.complement());
    }
    CliqueReduction {
        reduced: cur,
        forced: Cover::from_members(g, forced),
        dual_log,
    }
}

/// The lexicographically first triangle of the active graph.
pub fn first_triangle(g: &CoverGraph) -> Option<Vec<usize>> {
    for (u, v) in g.edges() {
        if let Some(&x) = g
            .neighbors(v)
            .iter()
            .find(|&&x| x > v && g.neighbors(u).binary_search(&x).is_ok())
        {
            return Some(vec![u, v, x]);
        }
    }
    None
}

/// Clique finder for unions of proper interval layers: scans layers in
/// order and returns the first maximal run of consecutive, pairwise adjacent
/// active vertices with at least three members.
pub fn interval_layer_cliques(
    layers: &[Vec<usize>],
) -> impl FnMut(&CoverGraph) -> Option<Vec<usize>> + '_ {
    move |g: &CoverGraph| {
        for layer in layers {
            let order: Vec<usize> = layer
                .iter()
                .copied()
                .filter(|&v| g.active().contains(v))
                .collect();
            let adjacent = |a: usize, b: usize| g.neighbors(a).binary_search(&b).is_ok();
            let mut i = 0;
            while i < order.len() {
                let mut j = i + 1;
                while j < order.len() && order[i..j].iter().all(|&u| adjacent(u, order[j])) {
                    j += 1;
                }
                if j - i >= 3 {
                    return Some(order[i..j].to_vec());
                }
                i += 1;
            }
        }
        None
    }
}
