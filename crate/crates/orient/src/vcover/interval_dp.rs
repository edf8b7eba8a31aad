use super::graph::{Cover, CoverGraph};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

pub const DEFAULT_DP_LAYERS: usize = 4;

/// Exact minimum-weight cover of a triangle-free union of interval layers.
///
/// Each layer is a vertex order in which every edge of that layer joins
/// consecutive vertices. Vertices are processed in an order extending every
/// layer order; the state is the in-cover bit of each layer's most recent
/// vertex. A vertex may stay out of the cover only if every adjacent layer
/// predecessor is in it. The cheapest path through this state graph is the
/// optimum.
pub fn vc_interval_union_dp(
    g: &CoverGraph,
    layers: &[Vec<usize>],
    max_layers: usize,
) -> Result<Cover> {
    let n = g.n();
    let act = g.active();
    let layers: Vec<Vec<usize>> = layers
        .iter()
        .map(|l| {
            l.iter()
                .copied()
                .filter(|&v| act.contains(v))
                .collect::<Vec<_>>()
        })
        .filter(|l| !l.is_empty())
        .collect();
    let k = layers.len();
    if k > max_layers.min(16) {
        return Err(Error::BoundExceeded {
            solver: "interval-dp",
            size: k,
            bound: max_layers,
        });
    }

    let adjacent = |a: usize, b: usize| g.neighbors(a).binary_search(&b).is_ok();
    let mut seen = BitSet::new(n);
    let mut pair_ok = std::collections::HashSet::new();
    for l in &layers {
        let mut in_layer = BitSet::new(n);
        for &v in l {
            if !in_layer.insert(v) {
                return Err(Error::Invalid(format!(
                    "vertex {v} repeated within a layer"
                )));
            }
            seen.insert(v);
        }
        for w in l.windows(2) {
            pair_ok.insert((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    for (u, v) in g.edges() {
        if !pair_ok.contains(&(u, v)) {
            return Err(Error::Invalid(format!(
                "edge ({u}, {v}) does not join consecutive vertices of any layer"
            )));
        }
    }

    // Global order extending all layer orders (smallest index first on ties).
    let mut indeg = vec![0usize; n];
    let mut succ = vec![Vec::new(); n];
    for l in &layers {
        for w in l.windows(2) {
            succ[w[0]].push(w[1]);
            indeg[w[1]] += 1;
        }
    }
    let mut heap: BinaryHeap<Reverse<usize>> = seen
        .iter()
        .filter(|&v| indeg[v] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(seen.len());
    while let Some(Reverse(v)) = heap.pop() {
        order.push(v);
        for &u in &succ[v] {
            indeg[u] -= 1;
            if indeg[u] == 0 {
                heap.push(Reverse(u));
            }
        }
    }
    if order.len() != seen.len() {
        return Err(Error::Invalid("layer orders are cyclic".into()));
    }

    // For each vertex: (layer, predecessor in that layer) pairs.
    let mut memberships: Vec<Vec<(usize, Option<usize>)>> = vec![Vec::new(); n];
    for (li, l) in layers.iter().enumerate() {
        for (p, &v) in l.iter().enumerate() {
            memberships[v].push((li, p.checked_sub(1).map(|q| l[q])));
        }
    }

    let states = 1usize << k;
    let mut cost = vec![f64::INFINITY; states];
    cost[states - 1] = 0.0; // dummy start vertex is "in the cover" on every layer
    let mut back: Vec<Vec<(usize, bool)>> = Vec::with_capacity(order.len());
    for &v in &order {
        let mut next = vec![f64::INFINITY; states];
        let mut from = vec![(usize::MAX, false); states];
        let mask: usize = memberships[v].iter().fold(0, |m, &(li, _)| m | 1 << li);
        for s in 0..states {
            if cost[s].is_infinite() {
                continue;
            }
            let forced = memberships[v]
                .iter()
                .any(|&(li, pred)| pred.is_some_and(|p| adjacent(p, v)) && s >> li & 1 == 0);
            let mut relax = |t: usize, c: f64, take: bool| {
                if c < next[t] {
                    next[t] = c;
                    from[t] = (s, take);
                }
            };
            if !forced {
                relax(s & !mask, cost[s], false);
            }
            relax(s | mask, cost[s] + g.weight(v), true);
        }
        cost = next;
        back.push(from);
    }

    let (mut s, _) = cost
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("at least one state");
    let mut members = BitSet::new(n);
    for (step, &v) in order.iter().enumerate().rev() {
        let (prev, take) = back[step][s];
        if take {
            members.insert(v);
        }
        s = prev;
    }
    let cover = Cover::from_members(g, members);
    debug_assert!(g.is_cover(&cover.members));
    Ok(cover)
}
