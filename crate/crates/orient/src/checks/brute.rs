//! Exhaustive reference implementations for tiny instances.

use crate::bitset::BitSet;
use crate::model::{Instance, Realization};
use crate::vcover::CoverGraph;

/// Largest universe the subset enumerations accept.
pub const BRUTE_MAX: usize = 16;

fn subsets(n: usize) -> impl Iterator<Item = BitSet> {
    assert!(n <= BRUTE_MAX, "brute force on {n} vertices");
    (0u32..1 << n).map(move |mask| BitSet::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1)))
}

/// Every hyperedge's true minimum is provably below each co-member: its
/// known upper end (its weight if queried, else `hi`) is at most the other's
/// known lower end.
pub fn feasible(instance: &Instance, real: &Realization, q: &BitSet) -> bool {
    instance.hyperedges().iter().all(|e| {
        let min = *e
            .iter()
            .min_by(|&&a, &&b| real.weight(a).total_cmp(&real.weight(b)))
            .expect("hyperedges are nonempty");
        let upper = if q.contains(min) {
            real.weight(min)
        } else {
            instance.interval(min).hi
        };
        e.iter().filter(|&&w| w != min).all(|&w| {
            let lower = if q.contains(w) {
                real.weight(w)
            } else {
                instance.interval(w).lo
            };
            upper <= lower
        })
    })
}

/// Vertices in every feasible query set.
pub fn mandatory(instance: &Instance, real: &Realization) -> BitSet {
    let n = instance.n();
    let mut common = BitSet::full(n);
    for q in subsets(n).filter(|q| feasible(instance, real, q)) {
        common.intersect_with(&q);
    }
    common
}

/// `min_Q c(Q ∩ S)` over feasible `Q`.
pub fn opt_within(instance: &Instance, real: &Realization, s: &BitSet) -> f64 {
    subsets(instance.n())
        .filter(|q| feasible(instance, real, q))
        .map(|mut q| {
            q.intersect_with(s);
            instance.total_cost(&q)
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn opt(instance: &Instance, real: &Realization) -> f64 {
    opt_within(instance, real, &BitSet::full(instance.n()))
}

/// Whether `v` is mandatory in every realization consistent with the
/// revealed weights. Unrevealed weights range over one representative per
/// gap between interval endpoints and revealed weights; `None` when that
/// grid has more than `cap` points.
pub fn always_mandatory(
    instance: &Instance,
    revealed: &[Option<f64>],
    v: usize,
    cap: usize,
) -> Option<bool> {
    let n = instance.n();
    let mut pts: Vec<f64> = (0..n)
        .flat_map(|u| [instance.interval(u).lo, instance.interval(u).hi])
        .chain(revealed.iter().flatten().copied())
        .collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let choices: Vec<Vec<f64>> = (0..n)
        .map(|u| match revealed[u] {
            Some(w) => vec![w],
            None => pts
                .windows(2)
                .map(|p| 0.5 * (p[0] + p[1]))
                .filter(|&x| instance.interval(u).contains(x))
                .collect(),
        })
        .collect();
    let mut total = 1usize;
    for c in &choices {
        total = total.saturating_mul(c.len());
    }
    if total > cap {
        return None;
    }
    let mut digit = vec![0usize; n];
    loop {
        let weights = (0..n).map(|u| choices[u][digit[u]]).collect();
        let real =
            Realization::new(instance, weights).expect("grid points lie inside their intervals");
        if !mandatory(instance, &real).contains(v) {
            return Some(false);
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(true);
            }
            digit[i] += 1;
            if digit[i] < choices[i].len() {
                break;
            }
            digit[i] = 0;
            i += 1;
        }
    }
}

/// Minimum cover weight of the active graph.
pub fn min_cover_weight(g: &CoverGraph) -> f64 {
    subsets(g.n())
        .filter(|s| s.is_subset(g.active()) && g.is_cover(s))
        .map(|s| g.weight_of(&s))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;

    #[test]
    fn fig1_by_hand() {
        let inst = fig1(0.1);
        let r = Realization::from_ids(&inst, &[("x", 1.5), ("y", 1.8), ("z", 2.5)]).unwrap();
        assert_eq!(mandatory(&inst, &r).len(), 3);
        assert_eq!(opt(&inst, &r), 3.0);
        let r = Realization::from_ids(&inst, &[("x", 0.5), ("y", 2.2), ("z", 2.5)]).unwrap();
        assert!(mandatory(&inst, &r).is_empty());
        assert_eq!(opt(&inst, &r), 1.0);
    }

    #[test]
    fn revealed_x_inside_y_makes_y_mandatory() {
        let inst = fig1(0.1);
        let (x, y) = (inst.index_of("x").unwrap(), inst.index_of("y").unwrap());
        let mut revealed = vec![None; 3];
        assert_eq!(always_mandatory(&inst, &revealed, y, 1000), Some(false));
        revealed[x] = Some(1.5);
        assert_eq!(always_mandatory(&inst, &revealed, y, 1000), Some(true));
        revealed[x] = Some(0.5);
        assert_eq!(always_mandatory(&inst, &revealed, y, 1000), Some(false));
    }

    #[test]
    fn triangle_cover() {
        let g = CoverGraph::new(vec![1.0, 2.0, 3.0], [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(min_cover_weight(&g), 3.0);
    }
}
