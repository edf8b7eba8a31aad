use super::graph::{Cover, CoverGraph};
use crate::bitset::BitSet;

/// Local-ratio 2-approximation: scanning edges in sorted order, each edge
/// with both endpoints still outside the cover pays the smaller residual
/// weight on both ends; exhausted vertices join the cover.
pub fn vc_local_ratio_2approx(g: &CoverGraph) -> Cover {
    let mut residual = g.weights().to_vec();
    let mut members = BitSet::new(g.n());
    for (u, v) in g.edges() {
        if members.contains(u) || members.contains(v) {
            continue;
        }
        let d = residual[u].min(residual[v]);
        residual[u] -= d;
        residual[v] -= d;
        for x in [u, v] {
            if residual[x] <= 0.0 {
                members.insert(x);
            }
        }
    }
    Cover::from_members(g, members)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge() {
        let g = CoverGraph::new(vec![1.0, 5.0], [(0, 1)]).unwrap();
        let c = vc_local_ratio_2approx(&g);
        assert_eq!((c.members.to_vec(), c.weight), (vec![0], 1.0));
    }

    #[test]
    fn triangle_within_factor_two() {
        let g = CoverGraph::new(vec![1.0; 3], [(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = vc_local_ratio_2approx(&g);
        assert!(g.is_cover(&c.members));
        assert!(c.weight <= 4.0);
    }

    #[test]
    fn edgeless() {
        assert!(
            vc_local_ratio_2approx(&CoverGraph::new(vec![1.0; 2], []).unwrap())
                .members
                .is_empty()
        );
    }
}
