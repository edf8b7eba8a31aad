use super::flow::{tolerance, FlowNetwork};
use super::graph::{Cover, CoverGraph};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub const DEFAULT_EXACT_BOUND: usize = 24;

/// Branch-and-bound minimum-weight vertex cover for small graphs.
///
/// The bound applies per connected component. Branching is on a
/// highest-degree vertex (take it, or take all its neighbours), pruned with
/// the half-integral LP bound.
#[derive(Clone, Copy, Debug)]
pub struct ExactSmall {
    pub bound: usize,
}

impl Default for ExactSmall {
    fn default() -> Self {
        ExactSmall {
            bound: DEFAULT_EXACT_BOUND,
        }
    }
}

/// Minimum-weight cover; among optimal covers, the one preferring smaller
/// vertex indices (see [`BitSet::precedes`]).
pub fn vc_exact_small(g: &CoverGraph) -> Result<Cover> {
    ExactSmall::default().solve(g)
}

impl ExactSmall {
    pub fn solve(&self, g: &CoverGraph) -> Result<Cover> {
        self.run(g, true)
    }

    /// Some minimum-weight cover, skipping the canonical tie-break pass.
    pub fn min_cover(&self, g: &CoverGraph) -> Result<Cover> {
        self.run(g, false)
    }

    fn run(&self, g: &CoverGraph, canonical: bool) -> Result<Cover> {
        let bound = self.bound.min(64);
        let mut members = BitSet::new(g.n());
        for comp in g.components() {
            if comp.len() > bound {
                return Err(Error::BoundExceeded {
                    solver: "exact-small",
                    size: comp.len(),
                    bound,
                });
            }
            let local = Local::new(g, &comp);
            let mut chosen = local.optimum();
            if canonical {
                chosen = local.canonical(local.weight(chosen));
            }
            for (i, &v) in comp.iter().enumerate() {
                if chosen >> i & 1 == 1 {
                    members.insert(v);
                }
            }
        }
        Ok(Cover::from_members(g, members))
    }
}

struct Local {
    adj: Vec<u64>,
    w: Vec<f64>,
    tol: f64,
}

struct Search<'a> {
    local: &'a Local,
    best_w: f64,
    best: u64,
    /// When set, stop at the first cover of weight within `tol` of it.
    target: Option<f64>,
    found: bool,
}

impl Local {
    fn new(g: &CoverGraph, comp: &[usize]) -> Self {
        let pos = |v: usize| comp.binary_search(&v).expect("neighbour in component");
        let adj = comp
            .iter()
            .map(|&v| g.neighbors(v).iter().fold(0u64, |m, &u| m | 1 << pos(u)))
            .collect();
        let w: Vec<f64> = comp.iter().map(|&v| g.weight(v)).collect();
        let tol = 1e-9 * w.iter().sum::<f64>().max(1.0);
        Local { adj, w, tol }
    }

    fn weight(&self, set: u64) -> f64 {
        bits(set).map(|i| self.w[i]).sum()
    }

    fn optimum(&self) -> u64 {
        let mut s = Search {
            local: self,
            best_w: f64::INFINITY,
            best: 0,
            target: None,
            found: false,
        };
        let all = full(self.adj.len());
        s.go(all, 0, 0.0);
        s.best
    }

    /// Fixes vertices in index order, keeping each one in the cover whenever
    /// an optimal cover with all earlier decisions still exists.
    fn canonical(&self, opt: f64) -> u64 {
        let k = self.adj.len();
        let (mut inc, mut exc) = (0u64, 0u64);
        for i in 0..k {
            let try_inc = inc | 1 << i;
            if self.completes(try_inc, exc, opt) {
                inc = try_inc;
            } else {
                exc |= 1 << i;
            }
        }
        inc
    }

    fn completes(&self, inc: u64, exc: u64, opt: f64) -> bool {
        let mut active = full(self.adj.len()) & !inc;
        let mut chosen = inc;
        for o in bits(exc) {
            if self.adj[o] & exc != 0 {
                return false;
            }
            let nb = self.adj[o] & active;
            chosen |= nb;
            active &= !(nb | 1 << o);
        }
        let mut s = Search {
            local: self,
            best_w: f64::INFINITY,
            best: 0,
            target: Some(opt),
            found: false,
        };
        s.go(active, chosen, self.weight(chosen));
        s.found
    }

    fn lp_bound(&self, active: u64) -> f64 {
        let k = self.adj.len();
        let mut net = FlowNetwork::new(2 + 2 * k, tolerance(self.w.iter().copied()));
        for v in bits(active) {
            net.add_edge(0, 2 + v, self.w[v]);
            net.add_edge(2 + k + v, 1, self.w[v]);
            for u in bits(self.adj[v] & active) {
                net.add_edge(2 + v, 2 + k + u, f64::INFINITY);
            }
        }
        net.max_flow(0, 1) / 2.0
    }
}

impl Search<'_> {
    fn go(&mut self, active: u64, chosen: u64, cost: f64) {
        if self.found {
            return;
        }
        let l = self.local;
        let tol = l.tol;
        let mut act = active;
        for v in bits(active) {
            if l.adj[v] & active == 0 {
                act &= !(1 << v);
            }
        }
        let limit = match self.target {
            Some(t) => t + tol,
            None => self.best_w - tol,
        };
        if act == 0 {
            let better = match self.target {
                Some(_) => cost <= limit,
                None => cost < limit,
            };
            if better {
                self.best_w = cost;
                self.best = chosen;
                self.found = self.target.is_some();
            }
            return;
        }
        let prunes = |lb: f64| match self.target {
            Some(_) => lb > limit,
            None => lb >= limit,
        };
        if prunes(cost) || prunes(cost + l.lp_bound(act)) {
            return;
        }
        let v = bits(act)
            .max_by_key(|&v| ((l.adj[v] & act).count_ones(), std::cmp::Reverse(v)))
            .expect("nonempty");
        self.go(act & !(1 << v), chosen | 1 << v, cost + l.w[v]);
        let nb = l.adj[v] & act;
        self.go(act & !(nb | 1 << v), chosen | nb, cost + l.weight(nb));
    }
}

fn full(k: usize) -> u64 {
    if k == 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let b = m.trailing_zeros() as usize;
        m &= m - 1;
        Some(b)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn brute_force(g: &CoverGraph) -> f64 {
        let n = g.n();
        (0u64..1 << n)
            .map(|m| BitSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))
            .filter(|s| g.is_cover(s))
            .map(|s| g.weight_of(&s))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn triangle() {
        let g = CoverGraph::new(vec![1.0; 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = vc_exact_small(&g).unwrap();
        assert_eq!(c.weight, 2.0);
        assert_eq!(c.members.to_vec(), vec![0, 1]);
    }

    #[test]
    fn heavy_star_center() {
        let mut w = vec![1.0; 6];
        w[0] = 10.0;
        let g = CoverGraph::new(w, (1..6).map(|i| (0, i))).unwrap();
        let c = vc_exact_small(&g).unwrap();
        assert_eq!(c.weight, 5.0);
        assert_eq!(c.members.to_vec(), vec![1, 2, 3, 4, 5]);
        assert_eq!(brute_force(&g), 5.0);
    }

    #[test]
    fn edgeless() {
        let c = vc_exact_small(&CoverGraph::new(vec![1.0; 3], []).unwrap()).unwrap();
        assert!(c.members.is_empty());
        assert_eq!(c.weight, 0.0);
    }

    #[test]
    fn ties_prefer_smaller_ids() {
        let g = CoverGraph::new(vec![1.0; 4], [(0, 1), (2, 3), (1, 2)]).unwrap();
        assert_eq!(vc_exact_small(&g).unwrap().members.to_vec(), vec![0, 2]);
        let edge = CoverGraph::new(vec![0.6, 0.6], [(0, 1)]).unwrap();
        assert_eq!(vc_exact_small(&edge).unwrap().members.to_vec(), vec![0]);
    }

    #[test]
    fn component_bound_is_enforced() {
        let g = CoverGraph::new(vec![1.0; 5], (0..4).map(|i| (i, i + 1))).unwrap();
        let err = ExactSmall { bound: 4 }.solve(&g).unwrap_err();
        assert!(matches!(err, Error::BoundExceeded { size: 5, .. }));
        let two = CoverGraph::new(vec![1.0; 6], [(0, 1), (1, 2), (3, 4), (4, 5)]).unwrap();
        assert_eq!(ExactSmall { bound: 3 }.solve(&two).unwrap().weight, 2.0);
    }

    #[test]
    fn petersen_graph() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = CoverGraph::new(vec![1.0; 10], outer.chain(spokes).chain(inner)).unwrap();
        assert_eq!(vc_exact_small(&g).unwrap().weight, 6.0);
        assert_eq!(brute_force(&g), 6.0);
    }
}
