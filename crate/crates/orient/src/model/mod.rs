//! Instances, realizations and query transcripts.

mod grid;
mod io;
mod reduce;
mod rng;

pub use grid::{elementary_grid, CellRealization, ProbabilityMatrix};
pub use io::{parse_instance, serialize_instance};
pub use reduce::{is_reduced, reduce, Reduced};
pub use rng::stream_rng;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use rand::Rng;
use std::cmp::Ordering;
use std::collections::HashMap;

const MASS_TOL: f64 = 1e-9;

/// Open interval `(lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Invalid(format!(
                "interval ({lo}, {hi}) must satisfy lo < hi"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo < x && x < self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    /// Whether `other` lies inside `self` (closure containment, equality included).
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn overlap_len(&self, other: &Interval) -> f64 {
        (self.hi.min(other.hi) - self.lo.max(other.lo)).max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cell {
    pub span: Interval,
    pub mass: f64,
}

/// Piecewise-uniform distribution: uniform density inside each cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf {
    cells: Vec<Cell>,
}

impl Pmf {
    /// Validates the cells against the owning interval.
    pub fn new(interval: Interval, cells: Vec<Cell>) -> Result<Self> {
        if cells.is_empty() {
            return Err(Error::Invalid("pmf has no cells".into()));
        }
        let mut total = 0.0;
        for (i, c) in cells.iter().enumerate() {
            if !(c.mass.is_finite() && (0.0..=1.0 + MASS_TOL).contains(&c.mass)) {
                return Err(Error::Invalid(format!(
                    "cell mass {} outside [0, 1]",
                    c.mass
                )));
            }
            if c.span.lo < interval.lo || c.span.hi > interval.hi {
                return Err(Error::Invalid(format!(
                    "cell ({}, {}) outside interval ({}, {})",
                    c.span.lo, c.span.hi, interval.lo, interval.hi
                )));
            }
            if i > 0 && c.span.lo < cells[i - 1].span.hi {
                return Err(Error::Invalid("pmf cells overlap or are unsorted".into()));
            }
            total += c.mass;
        }
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Invalid(format!("mass sum {total} differs from 1")));
        }
        if cells[0].span.lo != interval.lo || cells[cells.len() - 1].span.hi != interval.hi {
            return Err(Error::Invalid(
                "pmf cells must start at the interval's lo and end at its hi".into(),
            ));
        }
        Ok(Pmf { cells })
    }

    /// Uniform over a single cell spanning the whole interval.
    pub fn uniform(interval: Interval) -> Self {
        Pmf {
            cells: vec![Cell {
                span: interval,
                mass: 1.0,
            }],
        }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// P[w ∈ iv], integrating the uniform density cell by cell.
    pub fn prob_in(&self, iv: &Interval) -> f64 {
        self.cells
            .iter()
            .map(|c| c.mass * c.span.overlap_len(iv) / c.span.len())
            .sum()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        let mut chosen = None;
        for c in &self.cells {
            if c.mass <= 0.0 {
                continue;
            }
            acc += c.mass;
            chosen = Some(c);
            if u < acc {
                break;
            }
        }
        let span = chosen.expect("pmf has positive mass").span;
        loop {
            let x = span.lo + span.len() * rng.gen::<f64>();
            if span.contains(x) {
                return x;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct UncertainVertex {
    pub id: String,
    pub cost: f64,
    pub interval: Interval,
    pub pmf: Pmf,
}

impl UncertainVertex {
    pub fn new(id: impl Into<String>, cost: f64, interval: Interval, pmf: Pmf) -> Result<Self> {
        let id = id.into();
        if !(cost.is_finite() && cost > 0.0) {
            return Err(Error::Invalid(format!(
                "vertex {id}: cost must be positive, got {cost}"
            )));
        }
        Ok(UncertainVertex {
            id,
            cost,
            interval,
            pmf,
        })
    }

    /// Convenience constructor from `(lo, hi, mass)` triples.
    pub fn with_cells(id: &str, cost: f64, cells: &[(f64, f64, f64)]) -> Result<Self> {
        let (lo, hi) = match (cells.first(), cells.last()) {
            (Some(a), Some(b)) => (a.0, b.1),
            _ => return Err(Error::Invalid(format!("vertex {id}: no cells"))),
        };
        let interval = Interval::new(lo, hi)?;
        let cells = cells
            .iter()
            .map(|&(a, b, m)| {
                Ok(Cell {
                    span: Interval::new(a, b)?,
                    mass: m,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(id, cost, interval, Pmf::new(interval, cells)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Graph,
    Hypergraph,
}

/// Vertices are stored sorted by id, so vertex index order is id order and
/// index comparison implements the lexicographic-id tie-break. Hyperedge
/// members are stored in left-endpoint order: the first member is the
/// leftmost vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    vertices: Vec<UncertainVertex>,
    hyperedges: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
}

impl Instance {
    pub fn new(mut vertices: Vec<UncertainVertex>, hyperedges: Vec<Vec<String>>) -> Result<Self> {
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.clone(), i).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex id {}", v.id)));
            }
        }
        let mut edges = Vec::with_capacity(hyperedges.len());
        for e in hyperedges {
            let mut members = Vec::with_capacity(e.len());
            for id in &e {
                let &i = index.get(id).ok_or_else(|| {
                    Error::Invalid(format!("hyperedge references unknown id {id}"))
                })?;
                if members.contains(&i) {
                    return Err(Error::Invalid(format!("hyperedge repeats id {id}")));
                }
                members.push(i);
            }
            if members.len() < 2 {
                return Err(Error::Invalid(format!(
                    "hyperedge {e:?} has fewer than two members"
                )));
            }
            edges.push(members);
        }
        Ok(Self::from_parts(vertices, edges))
    }

    /// Builds from already-sorted vertices and index hyperedges.
    pub(crate) fn from_parts(
        vertices: Vec<UncertainVertex>,
        mut hyperedges: Vec<Vec<usize>>,
    ) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0].id < w[1].id));
        for e in &mut hyperedges {
            e.sort_by(|&a, &b| left_order(&vertices, a, b));
        }
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.clone(), i))
            .collect();
        Instance {
            vertices,
            hyperedges,
            index,
        }
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[UncertainVertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: usize) -> &UncertainVertex {
        &self.vertices[v]
    }

    pub fn interval(&self, v: usize) -> &Interval {
        &self.vertices[v].interval
    }

    pub fn cost(&self, v: usize) -> f64 {
        self.vertices[v].cost
    }

    pub fn costs(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.cost).collect()
    }

    pub fn id(&self, v: usize) -> &str {
        &self.vertices[v].id
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn hyperedges(&self) -> &[Vec<usize>] {
        &self.hyperedges
    }

    pub fn leftmost(&self, e: usize) -> usize {
        self.hyperedges[e][0]
    }

    pub fn kind(&self) -> Kind {
        if self.hyperedges.iter().all(|e| e.len() == 2) {
            Kind::Graph
        } else {
            Kind::Hypergraph
        }
    }

    pub fn is_graph(&self) -> bool {
        self.kind() == Kind::Graph
    }

    /// Hyperedge indices containing each vertex.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n()];
        for (ei, e) in self.hyperedges.iter().enumerate() {
            for &v in e {
                inc[v].push(ei);
            }
        }
        inc
    }

    pub fn total_cost(&self, set: &BitSet) -> f64 {
        set.iter().map(|v| self.cost(v)).sum()
    }

    pub fn ids_of(&self, set: &BitSet) -> Vec<&str> {
        set.iter().map(|v| self.id(v)).collect()
    }

    pub fn set_of(&self, ids: &[&str]) -> Result<BitSet> {
        let mut s = BitSet::new(self.n());
        for id in ids {
            let v = self
                .index_of(id)
                .ok_or_else(|| Error::Invalid(format!("unknown vertex id {id}")))?;
            s.insert(v);
        }
        Ok(s)
    }
}

/// Left-endpoint order: smaller lo, then smaller hi, then smaller id.
fn left_order(vs: &[UncertainVertex], a: usize, b: usize) -> Ordering {
    let (ia, ib) = (&vs[a].interval, &vs[b].interval);
    ia.lo
        .total_cmp(&ib.lo)
        .then(ia.hi.total_cmp(&ib.hi))
        .then(a.cmp(&b))
}

impl Instance {
    pub fn left_cmp(&self, a: usize, b: usize) -> Ordering {
        left_order(&self.vertices, a, b)
    }

    /// All vertex indices in left-endpoint order.
    pub fn left_sorted(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.sort_by(|&a, &b| self.left_cmp(a, b));
        order
    }
}

/// One weight per vertex, indexed like the instance's vertices.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub weights: Vec<f64>,
}

impl Realization {
    pub fn new(instance: &Instance, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != instance.n() {
            return Err(Error::Invalid(format!(
                "realization has {} weights for {} vertices",
                weights.len(),
                instance.n()
            )));
        }
        for (v, &w) in weights.iter().enumerate() {
            if !instance.interval(v).contains(w) {
                return Err(Error::Invalid(format!(
                    "weight {w} of {} outside its interval",
                    instance.id(v)
                )));
            }
        }
        Ok(Realization { weights })
    }

    pub fn from_ids(instance: &Instance, pairs: &[(&str, f64)]) -> Result<Self> {
        let mut w = vec![f64::NAN; instance.n()];
        for &(id, x) in pairs {
            let v = instance
                .index_of(id)
                .ok_or_else(|| Error::Invalid(format!("unknown vertex id {id}")))?;
            w[v] = x;
        }
        Self::new(instance, w)
    }

    pub fn weight(&self, v: usize) -> f64 {
        self.weights[v]
    }
}

pub fn sample_realization<R: Rng + ?Sized>(instance: &Instance, rng: &mut R) -> Realization {
    Realization {
        weights: instance
            .vertices
            .iter()
            .map(|v| v.pmf.sample(rng))
            .collect(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    Preprocess,
    Stage1,
    Stage2,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueryStep {
    pub vertex: usize,
    pub weight: f64,
    pub stage: Stage,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryTranscript {
    pub steps: Vec<QueryStep>,
    pub total_cost: f64,
    queried: BitSet,
}

impl QueryTranscript {
    pub fn new(n: usize) -> Self {
        QueryTranscript {
            steps: Vec::new(),
            total_cost: 0.0,
            queried: BitSet::new(n),
        }
    }

    /// Queries `v`; a repeated query is a no-op and returns false.
    pub fn query(
        &mut self,
        instance: &Instance,
        real: &Realization,
        v: usize,
        stage: Stage,
    ) -> bool {
        if !self.queried.insert(v) {
            return false;
        }
        self.total_cost += instance.cost(v);
        self.steps.push(QueryStep {
            vertex: v,
            weight: real.weight(v),
            stage,
        });
        true
    }

    pub fn queried(&self) -> &BitSet {
        &self.queried
    }

    /// Revealed weights as a partial assignment.
    pub fn revealed(&self, n: usize) -> Vec<Option<f64>> {
        let mut out = vec![None; n];
        for s in &self.steps {
            out[s.vertex] = Some(s.weight);
        }
        out
    }

    pub fn stage_cost(&self, instance: &Instance, stage: Stage) -> f64 {
        self.steps
            .iter()
            .filter(|s| s.stage == stage)
            .map(|s| instance.cost(s.vertex))
            .sum()
    }
}

#[cfg(test)]
pub(crate) mod testing {
    use super::*;

    /// Two-edge instance with x in the middle; used throughout the unit tests.
    pub fn fig1(eps: f64) -> Instance {
        Instance::new(
            vec![
                UncertainVertex::with_cells("x", 1.0, &[(0.0, 1.0, 0.5), (1.0, 2.0, 0.5)]).unwrap(),
                UncertainVertex::with_cells("y", 1.0, &[(1.0, 2.0, eps), (2.0, 3.0, 1.0 - eps)])
                    .unwrap(),
                UncertainVertex::with_cells("z", 1.0, &[(1.0, 2.0, eps), (2.0, 3.0, 1.0 - eps)])
                    .unwrap(),
            ],
            vec![vec!["x".into(), "y".into()], vec!["x".into(), "z".into()]],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::testing::fig1;
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fig1_shape() {
        let inst = fig1(0.1);
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.hyperedges().len(), 2);
        assert!(inst.is_graph());
        assert_eq!(inst.id(inst.leftmost(0)), "x");
    }

    #[test]
    fn rejects_bad_mass_and_cost() {
        let e = UncertainVertex::with_cells("a", 1.0, &[(0.0, 1.0, 0.4), (1.0, 2.0, 0.5)]);
        assert!(matches!(e, Err(Error::Invalid(m)) if m.contains("mass sum")));
        let e = UncertainVertex::with_cells("a", 0.0, &[(0.0, 1.0, 1.0)]);
        assert!(e.is_err());
    }

    #[test]
    fn rejects_unknown_member_and_singleton_edge() {
        let v = UncertainVertex::with_cells("a", 1.0, &[(0.0, 1.0, 1.0)]).unwrap();
        assert!(Instance::new(vec![v.clone()], vec![vec!["a".into(), "b".into()]]).is_err());
        assert!(Instance::new(vec![v.clone()], vec![vec!["a".into()]]).is_err());
        let single = Instance::new(vec![v], vec![]).unwrap();
        assert_eq!(single.hyperedges().len(), 0);
    }

    #[test]
    fn leftmost_tie_break_uses_hi_then_id() {
        let inst = Instance::new(
            vec![
                UncertainVertex::with_cells("b", 1.0, &[(0.0, 2.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("a", 1.0, &[(0.0, 3.0, 1.0)]).unwrap(),
                UncertainVertex::with_cells("c", 1.0, &[(0.0, 2.0, 1.0)]).unwrap(),
            ],
            vec![vec!["a".into(), "c".into(), "b".into()]],
        )
        .unwrap();
        let order: Vec<&str> = inst.hyperedges()[0].iter().map(|&v| inst.id(v)).collect();
        assert_eq!(order, vec!["b", "c", "a"]);
    }

    #[test]
    fn sampling_is_interior_and_deterministic() {
        let inst = fig1(0.1);
        let a = sample_realization(&inst, &mut ChaCha8Rng::seed_from_u64(5));
        let b = sample_realization(&inst, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
        assert!(Realization::new(&inst, a.weights).is_ok());
    }

    #[test]
    fn sampled_cell_frequency_matches_mass() {
        let inst = fig1(0.1);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let n = 100_000;
        let hits = (0..n)
            .filter(|_| sample_realization(&inst, &mut rng).weight(0) > 1.0)
            .count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.01, "{freq}");
    }

    #[test]
    fn zero_mass_cells_are_never_sampled() {
        let v = UncertainVertex::with_cells("a", 1.0, &[(0.0, 1.0, 1.0), (1.0, 2.0, 0.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            assert!(v.pmf.sample(&mut rng) < 1.0);
        }
    }

    #[test]
    fn prob_in_integrates_partial_cells() {
        let v = UncertainVertex::with_cells("a", 1.0, &[(0.0, 2.0, 0.6), (2.0, 3.0, 0.4)]).unwrap();
        let p = v.pmf.prob_in(&Interval::new(1.0, 2.5).unwrap());
        assert!((p - (0.3 + 0.2)).abs() < 1e-15);
    }
}
