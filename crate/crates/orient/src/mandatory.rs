//! Mandatory vertices, feasibility of query sets, and the probability of
//! being mandatory.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::model::{CellRealization, Instance, ProbabilityMatrix, Realization};
use rand::Rng;

/// Minimum-weight member of `members`; equal weights go to the smaller index.
pub fn min_member(members: &[usize], weights: &[f64]) -> usize {
    let mut best = members[0];
    for &v in &members[1..] {
        if weights[v] < weights[best] || (weights[v] == weights[best] && v < best) {
            best = v;
        }
    }
    best
}

/// Vertices contained in every feasible query set for this realization.
///
/// `v` is mandatory iff for some hyperedge containing it, either `v` is the
/// minimum and another member's weight lies in `I_v`, or `v` is not the
/// minimum and the minimum's weight lies in `I_v`.
pub fn mandatory_set(instance: &Instance, real: &Realization) -> BitSet {
    let w = &real.weights;
    let mut out = BitSet::new(instance.n());
    for e in instance.hyperedges() {
        let m = min_member(e, w);
        let im = instance.interval(m);
        for &u in e {
            if u == m {
                continue;
            }
            if instance.interval(u).contains(w[m]) {
                out.insert(u);
            }
            if im.contains(w[u]) {
                out.insert(m);
            }
        }
    }
    out
}

/// Mandatory set computed from elementary cells only.
///
/// If at least two members share the lowest occupied cell, the members whose
/// interval covers that cell are exactly the mandatory ones. Otherwise the
/// unique member `m` in that cell is the minimum: every other member whose
/// interval covers the cell is mandatory, and `m` is mandatory iff some other
/// member's cell lies inside `I_m`.
pub fn mandatory_set_cells(
    instance: &Instance,
    pm: &ProbabilityMatrix,
    cr: &CellRealization,
) -> BitSet {
    let mut out = BitSet::new(instance.n());
    for e in instance.hyperedges() {
        mark_cells(e, pm, cr, &mut out);
    }
    out
}

fn mark_cells(e: &[usize], pm: &ProbabilityMatrix, cr: &CellRealization, out: &mut BitSet) {
    let c = &cr.cells;
    let low = e
        .iter()
        .map(|&v| c[v])
        .min()
        .expect("hyperedges are nonempty");
    let at_low: Vec<usize> = e.iter().copied().filter(|&v| c[v] == low).collect();
    if at_low.len() >= 2 {
        for &v in e {
            if pm.in_interval(v, low) {
                out.insert(v);
            }
        }
        return;
    }
    let m = at_low[0];
    for &u in e {
        if u == m {
            continue;
        }
        if pm.in_interval(u, low) {
            out.insert(u);
        }
        if pm.in_interval(m, c[u]) {
            out.insert(m);
        }
    }
}

/// Whether querying `query` identifies the minimum of every hyperedge.
pub fn is_feasible(instance: &Instance, real: &Realization, query: &BitSet) -> bool {
    let w = &real.weights;
    instance.hyperedges().iter().all(|e| {
        let m = min_member(e, w);
        let im = instance.interval(m);
        if query.contains(m) {
            e.iter()
                .all(|&u| u == m || query.contains(u) || !instance.interval(u).contains(w[m]))
        } else {
            e.iter().all(|&u| {
                u == m
                    || !instance.interval(u).intersects(im)
                    || (query.contains(u) && w[u] >= im.hi)
            })
        }
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeStatus {
    /// The minimum is provably this vertex.
    Solved(usize),
    /// Not yet decided; the leftmost unqueried member should be queried next.
    Open(usize),
}

/// Status of hyperedge `e` given revealed weights.
pub fn edge_status(instance: &Instance, e: usize, revealed: &[Option<f64>]) -> EdgeStatus {
    let members = &instance.hyperedges()[e];
    let bounds = |v: usize| match revealed[v] {
        Some(w) => (w, w),
        None => {
            let iv = instance.interval(v);
            (iv.lo, iv.hi)
        }
    };
    // Only the member with the smallest upper bound can be provably minimal;
    // on ties an unrevealed member (open upper end) beats a revealed one.
    let key = |v: usize| (bounds(v).1, revealed[v].is_some(), v);
    let x = *members
        .iter()
        .min_by(|&&a, &&b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.cmp(&kb.1))
                .then(ka.2.cmp(&kb.2))
        })
        .expect("hyperedges are nonempty");
    let hx = bounds(x).1;
    let below_all = members.iter().all(|&y| {
        y == x
            || match (revealed[x], revealed[y]) {
                (Some(wx), Some(wy)) => wx < wy || (wx == wy && x < y),
                _ => hx <= bounds(y).0,
            }
    });
    if below_all {
        return EdgeStatus::Solved(x);
    }
    let next = members
        .iter()
        .copied()
        .find(|&v| revealed[v].is_none())
        .expect("an undecided hyperedge has an unqueried member");
    EdgeStatus::Open(next)
}

pub fn orientation_state(instance: &Instance, revealed: &[Option<f64>]) -> Result<Vec<EdgeStatus>> {
    if revealed.len() != instance.n() {
        return Err(Error::Invalid(
            "revealed map does not cover the vertex set".into(),
        ));
    }
    for (v, w) in revealed.iter().enumerate() {
        if let Some(w) = *w {
            if !instance.interval(v).contains(w) {
                return Err(Error::Invalid(format!(
                    "revealed weight {w} of {} lies outside its interval",
                    instance.id(v)
                )));
            }
        }
    }
    Ok((0..instance.hyperedges().len())
        .map(|e| edge_status(instance, e, revealed))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbMethod {
    ExactGraph,
    Sampled,
}

/// Probability of each vertex being mandatory.
#[derive(Clone, Debug)]
pub struct MandatoryProfile {
    pub probs: Vec<f64>,
    pub method: ProbMethod,
    pub epsilon: f64,
    pub delta: f64,
    pub sample_count: usize,
}

/// Exact `p_v = 1 − ∏_{u ~ v} P[w_u ∉ I_v]` for graphs.
pub fn exact_prob_graph(instance: &Instance) -> Result<MandatoryProfile> {
    if !instance.is_graph() {
        return Err(Error::Unsupported(
            "exact mandatory probabilities need a graph; estimate them for hypergraphs".into(),
        ));
    }
    let n = instance.n();
    let mut nbrs = vec![Vec::new(); n];
    for e in instance.hyperedges() {
        let (a, b) = (e[0], e[1]);
        if !nbrs[a].contains(&b) {
            nbrs[a].push(b);
            nbrs[b].push(a);
        }
    }
    let probs = (0..n)
        .map(|v| {
            let iv = instance.interval(v);
            let miss: f64 = nbrs[v]
                .iter()
                .map(|&u| 1.0 - instance.vertex(u).pmf.prob_in(iv))
                .product();
            1.0 - miss
        })
        .collect();
    Ok(MandatoryProfile {
        probs,
        method: ProbMethod::ExactGraph,
        epsilon: 0.0,
        delta: 0.0,
        sample_count: 0,
    })
}

/// Hoeffding sample size `⌈ln(2/δ) / (2ε²)⌉`.
pub fn sample_count(epsilon: f64, delta: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(Error::Param(format!(
            "need 0 < ε, δ < 1, got ε={epsilon}, δ={delta}"
        )));
    }
    Ok(((2.0 / delta).ln() / (2.0 * epsilon * epsilon)).ceil() as usize)
}

/// Monte-Carlo estimate of `p_v` over elementary-cell realizations; within
/// `ε` of the truth except with probability `δ`.
pub fn estimate_prob<R: Rng + ?Sized>(
    instance: &Instance,
    v: usize,
    epsilon: f64,
    delta: f64,
    rng: &mut R,
) -> Result<f64> {
    let k = sample_count(epsilon, delta)?;
    let pm = ProbabilityMatrix::new(instance);
    Ok(estimate_with(instance, &pm, v, k, rng))
}

fn estimate_with<R: Rng + ?Sized>(
    instance: &Instance,
    pm: &ProbabilityMatrix,
    v: usize,
    k: usize,
    rng: &mut R,
) -> f64 {
    let edges: Vec<&Vec<usize>> = instance
        .hyperedges()
        .iter()
        .filter(|e| e.contains(&v))
        .collect();
    if edges.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut scratch = BitSet::new(instance.n());
    for _ in 0..k {
        let cr = pm.sample(rng);
        scratch.remove(v);
        for e in &edges {
            mark_cells(e, pm, &cr, &mut scratch);
            if scratch.contains(v) {
                break;
            }
        }
        if scratch.contains(v) {
            hits += 1;
        }
    }
    hits as f64 / k as f64
}

/// How sample batches are shared when estimating every vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SampleBatch {
    /// Fresh samples for each vertex.
    #[default]
    PerVertex,
    /// One batch of cell realizations scored for all vertices at once.
    Shared,
}

/// Estimates every `p_v` with the given per-vertex accuracy.
pub fn estimate_profile<R: Rng + ?Sized>(
    instance: &Instance,
    epsilon: f64,
    delta: f64,
    batch: SampleBatch,
    rng: &mut R,
) -> Result<MandatoryProfile> {
    let k = sample_count(epsilon, delta)?;
    let pm = ProbabilityMatrix::new(instance);
    let probs = match batch {
        SampleBatch::PerVertex => (0..instance.n())
            .map(|v| estimate_with(instance, &pm, v, k, rng))
            .collect(),
        SampleBatch::Shared => {
            let mut hits = vec![0usize; instance.n()];
            for _ in 0..k {
                let m = mandatory_set_cells(instance, &pm, &pm.sample(rng));
                for v in m.iter() {
                    hits[v] += 1;
                }
            }
            hits.into_iter().map(|h| h as f64 / k as f64).collect()
        }
    };
    Ok(MandatoryProfile {
        probs,
        method: ProbMethod::Sampled,
        epsilon,
        delta,
        sample_count: k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;
    use crate::model::{sample_realization, UncertainVertex};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn real(inst: &Instance, x: f64, y: f64, z: f64) -> Realization {
        Realization::from_ids(inst, &[("x", x), ("y", y), ("z", z)]).unwrap()
    }

    fn ids(inst: &Instance, s: &BitSet) -> Vec<String> {
        inst.ids_of(s).into_iter().map(String::from).collect()
    }

    #[test]
    fn fig1_mandatory_sets() {
        let inst = fig1(0.1);
        assert!(mandatory_set(&inst, &real(&inst, 0.5, 2.5, 2.5)).is_empty());
        assert_eq!(
            ids(&inst, &mandatory_set(&inst, &real(&inst, 1.5, 2.5, 2.5))),
            ["y", "z"]
        );
        assert_eq!(
            ids(&inst, &mandatory_set(&inst, &real(&inst, 1.5, 1.8, 2.5))),
            ["x", "y", "z"]
        );
    }

    #[test]
    fn fig1_feasibility() {
        let inst = fig1(0.1);
        let r = real(&inst, 0.5, 2.5, 2.5);
        assert!(is_feasible(&inst, &r, &inst.set_of(&["x"]).unwrap()));
        assert!(is_feasible(&inst, &r, &BitSet::full(3)));
        let r = real(&inst, 1.5, 1.8, 2.5);
        assert!(!is_feasible(&inst, &r, &inst.set_of(&["y", "z"]).unwrap()));
        assert!(is_feasible(
            &inst,
            &real(&inst, 1.5, 2.5, 2.5),
            &inst.set_of(&["y", "z"]).unwrap()
        ));
    }

    #[test]
    fn orientation_examples() {
        let inst = fig1(0.1);
        let x = inst.index_of("x").unwrap();
        let mut revealed = vec![None; 3];
        revealed[x] = Some(0.5);
        let st = orientation_state(&inst, &revealed).unwrap();
        assert_eq!(st, vec![EdgeStatus::Solved(x); 2]);
        revealed[x] = Some(1.5);
        let st = orientation_state(&inst, &revealed).unwrap();
        let (y, z) = (inst.index_of("y").unwrap(), inst.index_of("z").unwrap());
        assert_eq!(st, vec![EdgeStatus::Open(y), EdgeStatus::Open(z)]);
        revealed[x] = Some(2.5);
        assert!(orientation_state(&inst, &revealed).is_err());
    }

    #[test]
    fn fully_revealed_edge_is_solved_at_argmin() {
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("a", 1.0, &[(0.0, 3.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("b", 1.0, &[(1.0, 4.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("c", 1.0, &[(2.0, 5.0, 1.0)]).unwrap(),
            ],
            vec![vec!["a".into(), "b".into(), "c".into()]],
        )
        .unwrap();
        let st = orientation_state(&inst, &[Some(2.9), Some(2.5), Some(2.7)]).unwrap();
        assert_eq!(st, vec![EdgeStatus::Solved(1)]);
    }

    #[test]
    fn unqueried_leftmost_can_be_certified() {
        let inst = fig1(0.1);
        let (x, y) = (inst.index_of("x").unwrap(), inst.index_of("y").unwrap());
        let mut revealed = vec![None; 3];
        revealed[y] = Some(2.5);
        assert_eq!(edge_status(&inst, 0, &revealed), EdgeStatus::Solved(x));
    }

    #[test]
    fn fig1_exact_probabilities() {
        let inst = fig1(0.1);
        let p = exact_prob_graph(&inst).unwrap().probs;
        assert!((p[0] - 0.19).abs() < 1e-12);
        assert!((p[1] - 0.5).abs() < 1e-12 && (p[2] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn isolated_vertex_has_zero_probability() {
        let inst = Instance::new(
            vec![UncertainVertex::with_cells("a", 1.0, &[(0.0, 1.0, 1.0)]).unwrap()],
            vec![],
        )
        .unwrap();
        assert_eq!(exact_prob_graph(&inst).unwrap().probs, vec![0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(estimate_prob(&inst, 0, 0.1, 0.1, &mut rng).unwrap(), 0.0);
    }

    #[test]
    fn path_probability_product() {
        // P[w_u ∈ I_v] = 0.3 and P[w_w ∈ I_v] = 0.5 with I_v = (1, 3).
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("u", 1.0, &[(0.0, 1.0, 0.7), (1.0, 2.0, 0.3)]).unwrap(),
                UncertainVertex::with_cells("v", 1.0, &[(1.0, 3.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("w", 1.0, &[(2.0, 3.0, 0.5), (3.0, 4.0, 0.5)]).unwrap(),
            ],
            vec![vec!["u".into(), "v".into()], vec!["v".into(), "w".into()]],
        )
        .unwrap();
        let p = exact_prob_graph(&inst).unwrap().probs;
        assert!((p[1] - 0.65).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| mandatory_set(&inst, &sample_realization(&inst, &mut rng)).contains(1))
            .count();
        let freq = hits as f64 / n as f64;
        let sigma = (0.65f64 * 0.35 / n as f64).sqrt();
        assert!((freq - 0.65).abs() < 4.0 * sigma, "{freq}");
    }

    #[test]
    fn exact_probabilities_reject_hypergraphs() {
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("a", 1.0, &[(0.0, 3.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("b", 1.0, &[(1.0, 4.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("c", 1.0, &[(2.0, 5.0, 1.0)]).unwrap(),
            ],
            vec![vec!["a".into(), "b".into(), "c".into()]],
        )
        .unwrap();
        assert!(exact_prob_graph(&inst).is_err());
    }

    #[test]
    fn hoeffding_sample_count() {
        assert_eq!(sample_count(0.05, 0.01).unwrap(), 1060);
        assert!(sample_count(0.0, 0.5).is_err());
    }

    #[test]
    fn cell_logic_matches_continuous_logic() {
        let inst = fig1(0.3);
        let pm = ProbabilityMatrix::new(&inst);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let r = sample_realization(&inst, &mut rng);
            let cells = CellRealization {
                cells: r
                    .weights
                    .iter()
                    .map(|&w| pm.grid().partition_point(|&t| t < w) - 1)
                    .collect(),
            };
            assert_eq!(
                mandatory_set(&inst, &r),
                mandatory_set_cells(&inst, &pm, &cells)
            );
        }
    }
}
