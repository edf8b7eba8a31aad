use super::flow::{tolerance, FlowNetwork};
use super::graph::{Bipartition, Cover, CoverGraph, HalfIntegralSolution};
use crate::bitset::BitSet;
use crate::error::{Error, Result};

/// Optimal half-integral solution of the vertex-cover LP relaxation.
///
/// Solved as a minimum-weight cover of the bipartite double cover (each
/// vertex split into a left and a right copy, each edge `{u, v}` becoming
/// `(u_L, v_R)` and `(v_L, u_R)`); `x_v` is half the number of copies of `v`
/// in that cover. The cut is the one whose source side is smallest, which
/// makes the output deterministic.
pub fn lp_half_integral(g: &CoverGraph) -> HalfIntegralSolution {
    let n = g.n();
    let (s, t) = (0, 1);
    let left = |v: usize| 2 + v;
    let right = |v: usize| 2 + n + v;
    let mut net = FlowNetwork::new(2 + 2 * n, tolerance(g.weights().iter().copied()));
    for v in g.active().iter() {
        if g.degree(v) == 0 {
            continue;
        }
        net.add_edge(s, left(v), g.weight(v));
        net.add_edge(right(v), t, g.weight(v));
        for &u in g.neighbors(v) {
            net.add_edge(left(v), right(u), f64::INFINITY);
        }
    }
    net.max_flow(s, t);
    let side = net.source_side(s);
    let mut x = vec![0.0; n];
    let (mut v1, mut v_half, mut v0) = (BitSet::new(n), BitSet::new(n), BitSet::new(n));
    for v in g.active().iter() {
        let copies = if g.degree(v) == 0 {
            0
        } else {
            usize::from(!side[left(v)]) + usize::from(side[right(v)])
        };
        x[v] = copies as f64 / 2.0;
        match copies {
            0 => v0.insert(v),
            1 => v_half.insert(v),
            _ => v1.insert(v),
        };
    }
    let objective = (0..n).map(|v| x[v] * g.weight(v)).sum();
    HalfIntegralSolution {
        x,
        objective,
        v1,
        v_half,
        v0,
    }
}

/// Minimum-weight cover of a bipartite graph via minimum cut.
pub fn vc_bipartite_exact(g: &CoverGraph, sides: &Bipartition) -> Result<Cover> {
    for (u, v) in g.edges() {
        let across = (sides.left.contains(u) && sides.right.contains(v))
            || (sides.left.contains(v) && sides.right.contains(u));
        if !across {
            return Err(Error::NotBipartite);
        }
    }
    let n = g.n();
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2, tolerance(g.weights().iter().copied()));
    for v in g.active().iter() {
        if g.degree(v) == 0 {
            continue;
        }
        if sides.left.contains(v) {
            net.add_edge(s, v, g.weight(v));
            for &u in g.neighbors(v) {
                net.add_edge(v, u, f64::INFINITY);
            }
        } else {
            net.add_edge(v, t, g.weight(v));
        }
    }
    let flow = net.max_flow(s, t);
    let side = net.source_side(s);
    let members = BitSet::from_indices(
        n,
        g.active()
            .iter()
            .filter(|&v| g.degree(v) > 0 && (sides.left.contains(v) != side[v])),
    );
    let cover = Cover::from_members(g, members);
    assert!(
        (cover.weight - flow).abs() <= 1e-9 * flow.max(1.0),
        "cut weight {} disagrees with flow value {flow}",
        cover.weight
    );
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force_lp(g: &CoverGraph) -> f64 {
        let n = g.n();
        let mut best = f64::INFINITY;
        let mut x = vec![0usize; n];
        loop {
            if g.edges().iter().all(|&(u, v)| x[u] + x[v] >= 2) {
                let obj: f64 = (0..n).map(|v| x[v] as f64 / 2.0 * g.weight(v)).sum();
                best = best.min(obj);
            }
            let mut i = 0;
            while i < n && x[i] == 2 {
                x[i] = 0;
                i += 1;
            }
            if i == n {
                return best;
            }
            x[i] += 1;
        }
    }

    #[test]
    fn single_edge_prefers_cheaper_endpoint() {
        let g = CoverGraph::new(vec![1.0, 2.0], [(0, 1)]).unwrap();
        let lp = lp_half_integral(&g);
        assert_eq!(lp.x, vec![1.0, 0.0]);
        assert_eq!(lp.objective, 1.0);
    }

    #[test]
    fn triangle_is_all_half() {
        let g = CoverGraph::new(vec![1.0; 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let lp = lp_half_integral(&g);
        assert_eq!(lp.x, vec![0.5; 3]);
        assert_eq!(lp.objective, 1.5);
        assert_eq!(brute_force_lp(&g), 1.5);
    }

    #[test]
    fn edgeless_is_zero() {
        let lp = lp_half_integral(&CoverGraph::new(vec![3.0; 4], []).unwrap());
        assert_eq!(lp.objective, 0.0);
        assert_eq!(lp.v0.len(), 4);
    }

    #[test]
    fn lp_matches_enumeration_on_small_graphs() {
        let graphs = [
            (
                vec![1.0, 2.0, 1.5, 0.5, 1.0],
                vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3)],
            ),
            (vec![2.0, 1.0, 1.0, 1.0], vec![(0, 1), (0, 2), (0, 3)]),
            (
                vec![1.0, 1.0, 1.0, 1.0],
                vec![(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)],
            ),
        ];
        for (w, e) in graphs {
            let g = CoverGraph::new(w, e).unwrap();
            let lp = lp_half_integral(&g);
            assert!((lp.objective - brute_force_lp(&g)).abs() < 1e-12);
            for (u, v) in g.edges() {
                assert!(lp.x[u] + lp.x[v] >= 1.0);
            }
        }
    }

    #[test]
    fn bipartite_examples() {
        let g = CoverGraph::new(vec![3.0, 1.0], [(0, 1)]).unwrap();
        let c = vc_bipartite_exact(&g, &g.bipartition().unwrap()).unwrap();
        assert_eq!((c.members.to_vec(), c.weight), (vec![1], 1.0));

        let k23 = CoverGraph::new(
            vec![1.0; 5],
            [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)],
        )
        .unwrap();
        let c = vc_bipartite_exact(&k23, &k23.bipartition().unwrap()).unwrap();
        assert_eq!((c.members.to_vec(), c.weight), (vec![0, 1], 2.0));

        let path = CoverGraph::new(vec![1.0, 3.0, 1.0], [(0, 1), (1, 2)]).unwrap();
        let c = vc_bipartite_exact(&path, &path.bipartition().unwrap()).unwrap();
        assert_eq!((c.members.to_vec(), c.weight), (vec![0, 2], 2.0));
    }

    #[test]
    fn bipartite_rejects_bad_sides() {
        let g = CoverGraph::new(vec![1.0; 3], [(0, 1), (1, 2)]).unwrap();
        let sides = Bipartition {
            left: BitSet::from_indices(3, [0, 1]),
            right: BitSet::from_indices(3, [2]),
        };
        assert!(matches!(
            vc_bipartite_exact(&g, &sides),
            Err(Error::NotBipartite)
        ));
    }
}
