//! Query algorithms.
//!
//! An algorithm is planned once per instance (probability estimation and
//! stage-1 selection happen there) and the resulting [`QueryPolicy`] is then
//! executed against any number of realizations.

mod baseline;
mod best_vc;
mod offline;
mod threshold;

pub use baseline::{Baseline, FixedCover, LeavesFirst};
pub use best_vc::{run_best_vc, BestVc};
pub use offline::{offline_opt, OfflineOpt, OfflineSolution, OptOracle};
pub use threshold::{
    hyper_d, hyper_ratio, optimal_d, per_vertex_delta, run_threshold_graph,
    run_threshold_hypergraph, threshold_ratio, threshold_sets, ProbMode, Threshold,
    ThresholdConfig, ThresholdLayers, ThresholdSets, MEMBERSHIP_TOL,
};

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::mandatory::{edge_status, is_feasible, EdgeStatus};
use crate::model::{Instance, QueryTranscript, Realization, Stage};
use crate::vcover::SolverRegistry;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub trait QueryPolicy: Send + Sync {
    /// The non-adaptive first-stage set, for two-stage policies.
    fn stage1(&self) -> Option<&BitSet> {
        None
    }
    fn execute(&self, instance: &Instance, real: &Realization) -> Result<QueryTranscript>;
}

pub trait QueryAlgorithm: Send + Sync {
    fn name(&self) -> String;
    /// Threshold on mandatory probabilities, where the algorithm has one.
    fn d(&self) -> Option<f64> {
        None
    }
    /// Approximation factor of the vertex-cover black box, where used.
    fn alpha(&self) -> Option<f64> {
        None
    }
    fn plan(&self, instance: &Instance, rng: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>>;
}

/// How a two-stage policy finishes after its first stage.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completion {
    /// One pass over unqueried vertices, querying those a queried neighbour
    /// certifies mandatory. Only complete for graphs whose cover graph is
    /// covered by stage 1.
    GraphMandatory,
    /// Round-robin over unresolved hyperedges, each querying its next open
    /// vertex until everything is oriented.
    Orientation,
}

/// Queries a fixed set, then completes adaptively.
pub struct TwoStagePolicy {
    pub stage1: BitSet,
    pub completion: Completion,
}

impl QueryPolicy for TwoStagePolicy {
    fn stage1(&self) -> Option<&BitSet> {
        Some(&self.stage1)
    }

    fn execute(&self, instance: &Instance, real: &Realization) -> Result<QueryTranscript> {
        let mut t = QueryTranscript::new(instance.n());
        for v in self.stage1.iter() {
            t.query(instance, real, v, Stage::Stage1);
        }
        match self.completion {
            Completion::GraphMandatory => complete_graph_mandatory(instance, real, &mut t),
            Completion::Orientation => complete_orientation(instance, real, &mut t, Stage::Stage2),
        }
        Ok(t)
    }
}

/// Queries every unqueried vertex whose interval contains the weight of a
/// queried co-member of some hyperedge.
pub fn complete_graph_mandatory(instance: &Instance, real: &Realization, t: &mut QueryTranscript) {
    let stage1 = t.queried().clone();
    let incidence = instance.incidence();
    for v in 0..instance.n() {
        if stage1.contains(v) {
            continue;
        }
        let iv = instance.interval(v);
        let certified = incidence[v].iter().any(|&e| {
            instance.hyperedges()[e]
                .iter()
                .any(|&u| u != v && stage1.contains(u) && iv.contains(real.weight(u)))
        });
        if certified {
            t.query(instance, real, v, Stage::Stage2);
        }
    }
}

/// Round-robin orientation: each unresolved hyperedge queries its open vertex
/// per round until every hyperedge is solved.
pub fn complete_orientation(
    instance: &Instance,
    real: &Realization,
    t: &mut QueryTranscript,
    stage: Stage,
) {
    let m = instance.hyperedges().len();
    let mut revealed = t.revealed(instance.n());
    let mut solved = vec![false; m];
    loop {
        let mut progressed = false;
        for e in 0..m {
            if solved[e] {
                continue;
            }
            match edge_status(instance, e, &revealed) {
                EdgeStatus::Solved(_) => solved[e] = true,
                EdgeStatus::Open(v) => {
                    t.query(instance, real, v, stage);
                    revealed[v] = Some(real.weight(v));
                    progressed = true;
                }
            }
        }
        if !progressed {
            break;
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageCosts {
    pub preprocess: f64,
    pub stage1: f64,
    pub stage2: f64,
}

/// One algorithm run paired with the offline optimum of the same realization.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub transcript: QueryTranscript,
    pub opt_cost: f64,
    pub stage_costs: StageCosts,
}

/// Plans, executes and checks one run against the offline optimum.
pub fn run_once(
    algorithm: &dyn QueryAlgorithm,
    instance: &Instance,
    real: &Realization,
    rng: &mut ChaCha8Rng,
) -> Result<RunOutcome> {
    let policy = algorithm.plan(instance, rng)?;
    let oracle = OptOracle::new(instance)?;
    finish_run(instance, real, policy.as_ref(), &oracle)
}

pub(crate) fn finish_run(
    instance: &Instance,
    real: &Realization,
    policy: &dyn QueryPolicy,
    oracle: &OptOracle,
) -> Result<RunOutcome> {
    let transcript = policy.execute(instance, real)?;
    if !is_feasible(instance, real, transcript.queried()) {
        return Err(Error::Invalid(
            "algorithm stopped with an infeasible query set".into(),
        ));
    }
    let opt_cost = oracle.opt(instance, real)?.cost;
    let stage_costs = StageCosts {
        preprocess: transcript.stage_cost(instance, Stage::Preprocess),
        stage1: transcript.stage_cost(instance, Stage::Stage1),
        stage2: transcript.stage_cost(instance, Stage::Stage2),
    };
    Ok(RunOutcome {
        transcript,
        opt_cost,
        stage_costs,
    })
}

/// Parameters shared by the named algorithms.
#[derive(Clone, Debug)]
pub struct AlgorithmSpec {
    /// Declared approximation factor; defaults to the solver's.
    pub alpha: Option<f64>,
    /// Threshold; `None` picks the optimal one for `alpha`.
    pub d: Option<f64>,
    pub epsilon: f64,
    pub delta: f64,
    /// Vertex-cover solver name.
    pub vc: String,
    /// Stage-1 ids for `fixed-cover`.
    pub cover: Vec<String>,
}

impl Default for AlgorithmSpec {
    fn default() -> Self {
        AlgorithmSpec {
            alpha: None,
            d: None,
            epsilon: 0.05,
            delta: 0.1,
            vc: "exact".into(),
            cover: Vec::new(),
        }
    }
}

type Factory =
    Box<dyn Fn(&AlgorithmSpec, &SolverRegistry) -> Result<Arc<dyn QueryAlgorithm>> + Send + Sync>;

/// Named algorithm constructors.
pub struct AlgorithmRegistry {
    entries: Vec<(&'static str, Factory)>,
    solvers: SolverRegistry,
}

impl AlgorithmRegistry {
    pub fn builtin() -> Self {
        let mut r = AlgorithmRegistry {
            entries: Vec::new(),
            solvers: SolverRegistry::builtin(),
        };
        r.register("threshold", |s, solvers| {
            let solver = solvers.get(&s.vc)?;
            let alpha = s.alpha.unwrap_or(solver.alpha());
            let d = s.d.unwrap_or(optimal_d(alpha)?);
            Ok(Arc::new(Threshold::new(ThresholdConfig {
                d,
                alpha,
                solver,
                prob_mode: ProbMode::ExactGraph,
                batch: Default::default(),
            })?))
        });
        r.register("threshold-hyper", |s, solvers| {
            let solver = solvers.get(&s.vc)?;
            let alpha = s.alpha.unwrap_or(solver.alpha());
            let mut cfg = ThresholdConfig::hypergraph(solver, alpha, s.epsilon, s.delta)?;
            if let Some(d) = s.d {
                cfg.d = d;
            }
            Ok(Arc::new(Threshold::new(cfg)?))
        });
        r.register("bestvc", |s, solvers| {
            Ok(Arc::new(BestVc {
                solver: solvers.get(&s.vc)?,
                prob_mode: None,
                epsilon: s.epsilon,
                delta: s.delta,
            }))
        });
        r.register("baseline", |_, _| Ok(Arc::new(Baseline)));
        r.register("leaves-first", |_, _| Ok(Arc::new(LeavesFirst)));
        r.register("offline-opt", |_, _| Ok(Arc::new(OfflineOpt)));
        r.register("fixed-cover", |s, _| {
            if s.cover.is_empty() {
                return Err(Error::Param("fixed-cover needs stage-1 ids".into()));
            }
            Ok(Arc::new(FixedCover::new(s.cover.clone())))
        });
        r
    }

    pub fn register<F>(&mut self, name: &'static str, factory: F)
    where
        F: Fn(&AlgorithmSpec, &SolverRegistry) -> Result<Arc<dyn QueryAlgorithm>>
            + Send
            + Sync
            + 'static,
    {
        self.entries.retain(|(n, _)| *n != name);
        self.entries.push((name, Box::new(factory)));
    }

    pub fn solvers(&self) -> &SolverRegistry {
        &self.solvers
    }

    pub fn solvers_mut(&mut self) -> &mut SolverRegistry {
        &mut self.solvers
    }

    pub fn create(&self, name: &str, spec: &AlgorithmSpec) -> Result<Arc<dyn QueryAlgorithm>> {
        let (_, f) = self
            .entries
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| Error::Unknown {
                kind: "algorithm",
                name: name.to_string(),
            })?;
        f(spec, &self.solvers)
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::stream_rng;
    use crate::model::testing::fig1;

    fn real(inst: &Instance, x: f64, y: f64, z: f64) -> Realization {
        Realization::from_ids(inst, &[("x", x), ("y", y), ("z", z)]).unwrap()
    }

    #[test]
    fn baseline_on_fig1_queries_x_only_when_x_is_low() {
        let inst = fig1(0.1);
        let out = run_once(
            &Baseline,
            &inst,
            &real(&inst, 0.5, 2.5, 2.5),
            &mut stream_rng(1, 0),
        )
        .unwrap();
        assert_eq!(out.transcript.total_cost, 1.0);
        assert_eq!(out.opt_cost, 1.0);
    }

    #[test]
    fn registry_builds_every_name() {
        let r = AlgorithmRegistry::builtin();
        let spec = AlgorithmSpec {
            cover: vec!["x".into()],
            ..Default::default()
        };
        for name in r.names() {
            let alg = r.create(name, &spec).unwrap();
            let inst = fig1(0.1);
            let mut rng = stream_rng(3, 0);
            let out = run_once(alg.as_ref(), &inst, &real(&inst, 1.5, 1.8, 2.5), &mut rng).unwrap();
            assert!(out.transcript.total_cost >= out.opt_cost, "{name}");
        }
        assert!(r.create("nope", &spec).is_err());
    }

    #[test]
    fn orientation_completion_handles_the_all_mandatory_case() {
        let inst = fig1(0.1);
        let r = real(&inst, 1.5, 1.8, 2.5);
        let mut t = QueryTranscript::new(3);
        complete_orientation(&inst, &r, &mut t, Stage::Stage2);
        assert_eq!(t.total_cost, 3.0);
    }
}
