use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::model::Instance;
use std::collections::VecDeque;

/// Weighted simple graph over the universe `0..n`; only `active` vertices
/// take part. Induced subgraphs keep the universe so indices never need
/// remapping.
#[derive(Clone, Debug, PartialEq)]
pub struct CoverGraph {
    weights: Vec<f64>,
    active: BitSet,
    adj: Vec<Vec<usize>>,
}

impl CoverGraph {
    pub fn new(weights: Vec<f64>, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let n = weights.len();
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Invalid(format!(
                "cover weight {w} must be finite and nonnegative"
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(Error::Invalid(format!("bad edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(CoverGraph {
            weights,
            active: BitSet::full(n),
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn active(&self) -> &BitSet {
        &self.active
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in self.active.iter() {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn induced(&self, keep: &BitSet) -> CoverGraph {
        let mut active = self.active.clone();
        active.intersect_with(keep);
        let adj = (0..self.n())
            .map(|v| {
                if active.contains(v) {
                    self.adj[v]
                        .iter()
                        .copied()
                        .filter(|&u| active.contains(u))
                        .collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        CoverGraph {
            weights: self.weights.clone(),
            active,
            adj,
        }
    }

    pub fn with_weights(&self, weights: Vec<f64>) -> Result<CoverGraph> {
        if weights.len() != self.n() {
            return Err(Error::Invalid("weight vector has the wrong length".into()));
        }
        let mut g = CoverGraph::new(weights, std::iter::empty())?;
        g.active = self.active.clone();
        g.adj = self.adj.clone();
        Ok(g)
    }

    pub fn is_cover(&self, set: &BitSet) -> bool {
        self.edges()
            .iter()
            .all(|&(u, v)| set.contains(u) || set.contains(v))
    }

    pub fn weight_of(&self, set: &BitSet) -> f64 {
        set.iter().map(|v| self.weights[v]).sum()
    }

    /// Connected components with at least one edge, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = BitSet::new(self.n());
        let mut out = Vec::new();
        for s in self.active.iter() {
            if self.adj[s].is_empty() || seen.contains(s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut i = 0;
            while i < comp.len() {
                for &u in &self.adj[comp[i]] {
                    if seen.insert(u) {
                        comp.push(u);
                    }
                }
                i += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Two-colouring of the non-isolated part, colouring each component's
    /// smallest vertex left.
    pub fn bipartition(&self) -> Option<Bipartition> {
        let n = self.n();
        let mut side = vec![None; n];
        let mut left = BitSet::new(n);
        let mut right = BitSet::new(n);
        for s in self.active.iter() {
            if side[s].is_some() || self.adj[s].is_empty() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].expect("queued vertices are coloured");
                if su {
                    right.insert(u);
                } else {
                    left.insert(u);
                }
                for &v in &self.adj[u] {
                    match side[v] {
                        None => {
                            side[v] = Some(!su);
                            queue.push_back(v);
                        }
                        Some(sv) if sv == su => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        Some(Bipartition { left, right })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Bipartition {
    pub left: BitSet,
    pub right: BitSet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cover {
    pub members: BitSet,
    pub weight: f64,
}

impl Cover {
    pub fn from_members(g: &CoverGraph, members: BitSet) -> Cover {
        let weight = g.weight_of(&members);
        Cover { members, weight }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HalfIntegralSolution {
    /// Value per universe vertex; inactive vertices get 0.
    pub x: Vec<f64>,
    pub objective: f64,
    pub v1: BitSet,
    pub v_half: BitSet,
    pub v0: BitSet,
}

/// Leftmost vertex of a hyperedge together with the co-members whose
/// intervals meet its interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Star {
    pub center: usize,
    pub leaves: Vec<usize>,
}

pub fn cover_stars(instance: &Instance) -> Vec<Star> {
    instance
        .hyperedges()
        .iter()
        .map(|e| {
            let c = e[0];
            let ic = instance.interval(c);
            Star {
                center: c,
                leaves: e[1..]
                    .iter()
                    .copied()
                    .filter(|&u| instance.interval(u).intersects(ic))
                    .collect(),
            }
        })
        .filter(|s| !s.leaves.is_empty())
        .collect()
}

/// The vertex-cover instance: an edge from each hyperedge's leftmost vertex
/// to every co-member whose interval meets it. For graphs this is the graph
/// itself.
pub fn build_cover_graph(instance: &Instance, weights: &[f64]) -> Result<CoverGraph> {
    if weights.len() != instance.n() {
        return Err(Error::Invalid("weight vector has the wrong length".into()));
    }
    let edges = cover_stars(instance)
        .into_iter()
        .flat_map(|s| s.leaves.into_iter().map(move |u| (s.center, u)));
    CoverGraph::new(weights.to_vec(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;
    use crate::model::UncertainVertex;

    #[test]
    fn graph_instance_maps_to_itself() {
        let inst = fig1(0.1);
        let g = build_cover_graph(&inst, &inst.costs()).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2)]);
    }

    #[test]
    fn single_hyperedge_gives_star() {
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("a", 1.0, &[(0.0, 3.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("b", 1.0, &[(1.0, 4.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("c", 1.0, &[(2.0, 5.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("d", 1.0, &[(2.5, 6.0, 1.0)]).unwrap(),
            ],
            vec![vec!["d".into(), "c".into(), "b".into(), "a".into()]],
        )
        .unwrap();
        let g = build_cover_graph(&inst, &inst.costs()).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn bipartition_detects_odd_cycles() {
        let tri = CoverGraph::new(vec![1.0; 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(tri.bipartition().is_none());
        let path = CoverGraph::new(vec![1.0; 4], [(0, 1), (1, 2)]).unwrap();
        let b = path.bipartition().unwrap();
        assert_eq!(b.left.to_vec(), vec![0, 2]);
        assert_eq!(b.right.to_vec(), vec![1]);
    }

    #[test]
    fn induced_subgraph_drops_edges() {
        let g = CoverGraph::new(vec![1.0; 3], [(0, 1), (1, 2)]).unwrap();
        let h = g.induced(&BitSet::from_indices(3, [0, 1]));
        assert_eq!(h.edges(), vec![(0, 1)]);
        assert_eq!(h.components(), vec![vec![0, 1]]);
    }
}
