use super::graph::{build_cover_graph, cover_stars, Cover, CoverGraph, Star};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::model::Instance;

pub const DEFAULT_FEW_BOUND: usize = 20;

/// Exact cover of the vertex-cover instance for instances with few
/// hyperedges: any cover contains, per hyperedge, its leftmost vertex or all
/// co-members adjacent to it, so it suffices to try all `2^k` combinations.
pub fn vc_few_hyperedges(instance: &Instance, weights: &[f64]) -> Result<Cover> {
    let g = build_cover_graph(instance, weights)?;
    few_hyperedges_on(&g, &cover_stars(instance), DEFAULT_FEW_BOUND)
}

/// Same enumeration on an induced subgraph of the vertex-cover instance;
/// `stars` must generate the full instance.
pub fn few_hyperedges_on(g: &CoverGraph, stars: &[Star], bound: usize) -> Result<Cover> {
    let act = g.active();
    let live: Vec<(usize, BitSet)> = stars
        .iter()
        .filter(|s| act.contains(s.center))
        .map(|s| {
            let leaves =
                BitSet::from_indices(g.n(), s.leaves.iter().copied().filter(|&u| act.contains(u)));
            (s.center, leaves)
        })
        .filter(|(_, l)| !l.is_empty())
        .collect();
    if live.len() > bound.min(30) {
        return Err(Error::BoundExceeded {
            solver: "few-hyperedges",
            size: live.len(),
            bound,
        });
    }
    let tol = 1e-9 * g.weights().iter().sum::<f64>().max(1.0);
    let mut best: Option<Cover> = None;
    for mask in 0u64..1 << live.len() {
        let mut set = BitSet::new(g.n());
        for (i, (c, leaves)) in live.iter().enumerate() {
            if mask >> i & 1 == 1 {
                set.union_with(leaves);
            } else {
                set.insert(*c);
            }
        }
        let w = g.weight_of(&set);
        let better = match &best {
            None => true,
            Some(b) => w < b.weight - tol || (w <= b.weight + tol && set.precedes(&b.members)),
        };
        if better {
            best = Some(Cover {
                members: set,
                weight: w,
            });
        }
    }
    let cover = best.expect("at least the empty combination is tried");
    debug_assert!(g.is_cover(&cover.members));
    Ok(cover)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::UncertainVertex;

    fn v(id: &str, lo: f64, hi: f64) -> UncertainVertex {
        UncertainVertex::with_cells(id, 1.0, &[(lo, hi, 1.0)]).unwrap()
    }

    #[test]
    fn single_hyperedge_takes_leftmost() {
        let inst = Instance::new(
            vec![v("a", 0.0, 3.0), v("b", 1.0, 4.0), v("c", 2.0, 5.0)],
            vec![vec!["a".into(), "b".into(), "c".into()]],
        )
        .unwrap();
        let c = vc_few_hyperedges(&inst, &inst.costs()).unwrap();
        assert_eq!((c.members.to_vec(), c.weight), (vec![0], 1.0));
    }

    #[test]
    fn disjoint_hyperedges_combine() {
        let inst = Instance::new(
            vec![
                v("a", 0.0, 3.0),
                v("b", 1.0, 4.0),
                v("c", 10.0, 13.0),
                v("d", 11.0, 14.0),
            ],
            vec![vec!["a".into(), "b".into()], vec!["c".into(), "d".into()]],
        )
        .unwrap();
        let w = [5.0, 1.0, 1.0, 5.0];
        let c = vc_few_hyperedges(&inst, &w).unwrap();
        assert_eq!((c.members.to_vec(), c.weight), (vec![1, 2], 2.0));
    }

    #[test]
    fn bound_is_enforced() {
        let inst = Instance::new(
            vec![
                v("a", 0.0, 3.0),
                v("b", 1.0, 4.0),
                v("c", 10.0, 13.0),
                v("d", 11.0, 14.0),
            ],
            vec![vec!["a".into(), "b".into()], vec!["c".into(), "d".into()]],
        )
        .unwrap();
        let g = build_cover_graph(&inst, &inst.costs()).unwrap();
        assert!(few_hyperedges_on(&g, &cover_stars(&inst), 1).is_err());
    }
}
