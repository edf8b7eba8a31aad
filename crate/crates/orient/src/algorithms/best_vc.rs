use super::threshold::{per_vertex_delta, ProbMode};
use super::{Completion, QueryAlgorithm, QueryPolicy, RunOutcome, TwoStagePolicy};
use crate::error::Result;
use crate::mandatory::{estimate_profile, exact_prob_graph, SampleBatch};
use crate::model::{Instance, Realization};
use crate::vcover::{build_cover_graph, cover_stars, SolveContext, VcSolver};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Queries the cover minimizing `Σ (1 − p_v) c_v`, then completes by
/// orientation. Optimal among vertex-cover-based algorithms when the solver
/// is exact.
pub struct BestVc {
    pub solver: Arc<dyn VcSolver>,
    /// `None` uses exact probabilities on graphs and sampling otherwise.
    pub prob_mode: Option<ProbMode>,
    pub epsilon: f64,
    pub delta: f64,
}

impl BestVc {
    pub fn new(solver: Arc<dyn VcSolver>) -> Self {
        BestVc {
            solver,
            prob_mode: None,
            epsilon: 0.05,
            delta: 0.1,
        }
    }

    fn probabilities(&self, instance: &Instance, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        let mode = self.prob_mode.unwrap_or(if instance.is_graph() {
            ProbMode::ExactGraph
        } else {
            ProbMode::Sampled {
                epsilon: self.epsilon,
                delta: self.delta,
            }
        });
        Ok(match mode {
            ProbMode::ExactGraph => exact_prob_graph(instance)?.probs,
            ProbMode::Sampled { epsilon, delta } => {
                let dv = per_vertex_delta(delta, instance.n());
                estimate_profile(instance, epsilon, dv, SampleBatch::default(), rng)?.probs
            }
        })
    }
}

impl QueryAlgorithm for BestVc {
    fn name(&self) -> String {
        "bestvc".into()
    }
    fn alpha(&self) -> Option<f64> {
        Some(self.solver.alpha())
    }
    fn plan(&self, instance: &Instance, rng: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        let probs = self.probabilities(instance, rng)?;
        let weights: Vec<f64> = (0..instance.n())
            .map(|v| (1.0 - probs[v]).max(0.0) * instance.cost(v))
            .collect();
        let g = build_cover_graph(instance, &weights)?;
        let stars = cover_stars(instance);
        let ctx = SolveContext {
            stars: Some(&stars),
            layers: None,
        };
        let cover = self.solver.solve(&g, &ctx)?;
        Ok(Box::new(TwoStagePolicy {
            stage1: cover.members,
            completion: Completion::Orientation,
        }))
    }
}

pub fn run_best_vc(
    instance: &Instance,
    solver: Arc<dyn VcSolver>,
    prob_mode: ProbMode,
    real: &Realization,
    rng: &mut ChaCha8Rng,
) -> Result<RunOutcome> {
    let alg = BestVc {
        prob_mode: Some(prob_mode),
        ..BestVc::new(solver)
    };
    super::run_once(&alg, instance, real, rng)
}
