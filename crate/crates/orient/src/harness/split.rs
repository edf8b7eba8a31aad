//! The generalized problem with an explicit law over mandatory sets, and
//! vertex splitting.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::vcover::{CoverGraph, ExactSmall};
use rand::Rng;

pub const MAX_GENERALIZED_VERTICES: usize = 12;

/// A cover graph with costs as weights and the probability of each
/// mandatory set.
#[derive(Clone, Debug)]
pub struct GeneralizedInstance {
    pub graph: CoverGraph,
    pub law: Vec<(BitSet, f64)>,
}

impl GeneralizedInstance {
    pub fn new(graph: CoverGraph, law: Vec<(BitSet, f64)>) -> Result<Self> {
        let n = graph.n();
        if n > MAX_GENERALIZED_VERTICES {
            return Err(Error::BoundExceeded {
                solver: "generalized instance",
                size: n,
                bound: MAX_GENERALIZED_VERTICES,
            });
        }
        if law
            .iter()
            .any(|(m, p)| m.universe() != n || !(0.0..=1.0).contains(p))
        {
            return Err(Error::Invalid(
                "law entries must be probabilities over the vertex set".into(),
            ));
        }
        let total: f64 = law.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Invalid(format!("law sums to {total}, not 1")));
        }
        Ok(GeneralizedInstance { graph, law })
    }

    /// `Σ_M p(M) (c(M) + c(VC_M))`.
    pub fn expected_opt(&self) -> Result<f64> {
        let all = BitSet::full(self.graph.n());
        self.expected_opt_restricted(&all)
    }

    /// `Σ_i E[OPT_{S_i}]`, where `OPT_S` charges only the part of an optimal
    /// query set inside `S`, minimised separately for each part.
    pub fn expected_opt_partition(&self, parts: &[BitSet]) -> Result<f64> {
        parts.iter().map(|s| self.expected_opt_restricted(s)).sum()
    }

    fn expected_opt_restricted(&self, s: &BitSet) -> Result<f64> {
        let g = &self.graph;
        let weights: Vec<f64> = (0..g.n())
            .map(|v| if s.contains(v) { g.weight(v) } else { 0.0 })
            .collect();
        let gs = g.with_weights(weights)?;
        let solver = ExactSmall::default();
        let mut total = 0.0;
        for (m, p) in &self.law {
            let cover = solver.min_cover(&gs.induced(&m.complement()))?;
            total += p * (gs.weight_of(m) + cover.weight);
        }
        Ok(total)
    }
}

/// Replaces `v` by copies with costs `fraction · c_v`. The first copy keeps
/// index `v`; the rest are appended. Every copy inherits `v`'s neighbours
/// and all copies are mandatory exactly when `v` was.
pub fn vertex_split(
    gi: &GeneralizedInstance,
    v: usize,
    fractions: &[f64],
) -> Result<GeneralizedInstance> {
    let g = &gi.graph;
    let n = g.n();
    if v >= n || !g.active().contains(v) {
        return Err(Error::Param(format!("vertex {v} is not in the instance")));
    }
    if fractions.is_empty() || fractions.iter().any(|&f| !(f > 0.0)) {
        return Err(Error::Param("fractions must be positive".into()));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::Param(format!("fractions sum to {sum}, not 1")));
    }
    let extra = fractions.len() - 1;
    let n2 = n + extra;
    let copies: Vec<usize> = std::iter::once(v).chain(n..n2).collect();
    let mut weights = g.weights().to_vec();
    weights.resize(n2, 0.0);
    for (&c, &f) in copies.iter().zip(fractions) {
        weights[c] = f * g.weight(v);
    }
    let mut edges = g.edges();
    for &u in g.neighbors(v) {
        for &c in &copies[1..] {
            edges.push((u, c));
        }
    }
    let mut graph = CoverGraph::new(weights, edges)?;
    let inactive: Vec<usize> = (0..n).filter(|&u| !g.active().contains(u)).collect();
    if !inactive.is_empty() {
        let mut keep = BitSet::full(n2);
        for u in inactive {
            keep.remove(u);
        }
        graph = graph.induced(&keep);
    }
    let law = gi
        .law
        .iter()
        .map(|(m, p)| {
            let mut lifted = BitSet::from_indices(n2, m.iter());
            if m.contains(v) {
                for &c in &copies[1..] {
                    lifted.insert(c);
                }
            }
            (lifted, *p)
        })
        .collect();
    GeneralizedInstance::new(graph, law)
}

/// Random graph on `n` vertices with random costs and a law over a few
/// random mandatory sets.
pub fn random_generalized<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<GeneralizedInstance> {
    let weights: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(0.4) {
                edges.push((a, b));
            }
        }
    }
    let graph = CoverGraph::new(weights, edges)?;
    let k = rng.gen_range(1..=6);
    let raw: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let law = raw
        .iter()
        .map(|r| {
            let m = BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.3)));
            (m, r / total)
        })
        .collect();
    GeneralizedInstance::new(graph, law)
}
