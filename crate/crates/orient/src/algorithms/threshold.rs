use super::{Completion, QueryAlgorithm, QueryPolicy, RunOutcome, TwoStagePolicy};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::mandatory::{estimate_profile, exact_prob_graph, SampleBatch};
use crate::model::{Instance, Realization};
use crate::vcover::{
    build_cover_graph, clique_reduce, cover_stars, interval_layer_cliques, lp_half_integral,
    CoverGraph, IntervalDpSolver, SolveContext, VcSolver, DEFAULT_DP_LAYERS,
};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// Slack on `p_v ≥ d` so that probabilities computed as exactly `d` in
/// floating point are not dropped by rounding.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

fn check_alpha(alpha: f64) -> Result<()> {
    if (1.0..=2.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Param(format!(
            "alpha must lie in [1, 2], got {alpha}"
        )))
    }
}

/// Threshold balancing both terms of the graph bound: `2 / (α + √(8 − α(4 − α)))`.
pub fn optimal_d(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(2.0 / (alpha + (8.0 - alpha * (4.0 - alpha)).sqrt()))
}

/// Graph competitive ratio `max{1/d, α + (2 − α)d}` at the optimal `d`.
pub fn threshold_ratio(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(0.5 * (alpha + (8.0 - alpha * (4.0 - alpha)).sqrt()))
}

/// Ratio guaranteed for hypergraphs when probabilities are estimated to
/// within `eps`.
pub fn hyper_ratio(alpha: f64, eps: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Param(format!("eps must lie in [0, 1), got {eps}")));
    }
    let b = 2.0 - alpha;
    let disc = alpha * alpha + 4.0 * b * (1.0 + alpha * eps + b * eps * eps);
    Ok(0.5 * (alpha + disc.sqrt() + 2.0 * b * eps))
}

/// Hypergraph threshold `1/R + ε`.
pub fn hyper_d(alpha: f64, eps: f64) -> Result<f64> {
    Ok(1.0 / hyper_ratio(alpha, eps)? + eps)
}

/// Per-vertex failure probability making all `n` estimates good with
/// probability `1 − δ`.
pub fn per_vertex_delta(delta: f64, n: usize) -> f64 {
    if n == 0 {
        return delta;
    }
    1.0 - (1.0 - delta).powf(1.0 / n as f64)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProbMode {
    ExactGraph,
    /// Estimated with accuracy `epsilon`, all vertices jointly correct with
    /// probability `1 − delta`.
    Sampled {
        epsilon: f64,
        delta: f64,
    },
}

#[derive(Clone)]
pub struct ThresholdConfig {
    pub d: f64,
    pub alpha: f64,
    pub solver: Arc<dyn VcSolver>,
    pub prob_mode: ProbMode,
    pub batch: SampleBatch,
}

impl std::fmt::Debug for ThresholdConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ThresholdConfig")
            .field("d", &self.d)
            .field("alpha", &self.alpha)
            .field("solver", &self.solver.name())
            .field("prob_mode", &self.prob_mode)
            .finish()
    }
}

impl ThresholdConfig {
    /// Exact probabilities and the optimal threshold for the solver's α.
    pub fn graph(solver: Arc<dyn VcSolver>) -> Result<Self> {
        let alpha = solver.alpha();
        Ok(ThresholdConfig {
            d: optimal_d(alpha)?,
            alpha,
            solver,
            prob_mode: ProbMode::ExactGraph,
            batch: SampleBatch::default(),
        })
    }

    pub fn hypergraph(
        solver: Arc<dyn VcSolver>,
        alpha: f64,
        epsilon: f64,
        delta: f64,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Param(format!(
                "delta must lie in (0, 1), got {delta}"
            )));
        }
        Ok(ThresholdConfig {
            d: hyper_d(alpha, epsilon)?,
            alpha,
            solver,
            prob_mode: ProbMode::Sampled { epsilon, delta },
            batch: SampleBatch::default(),
        })
    }

    fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)?;
        if !(0.0..=1.0).contains(&self.d) {
            return Err(Error::Param(format!(
                "d must lie in [0, 1], got {}",
                self.d
            )));
        }
        Ok(())
    }

    fn probabilities(&self, instance: &Instance, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
        Ok(match self.prob_mode {
            ProbMode::ExactGraph => exact_prob_graph(instance)?.probs,
            ProbMode::Sampled { epsilon, delta } => {
                let dv = per_vertex_delta(delta, instance.n());
                estimate_profile(instance, epsilon, dv, self.batch, rng)?.probs
            }
        })
    }
}

/// The sets the threshold rule selects.
#[derive(Clone, Debug, PartialEq)]
pub struct ThresholdSets {
    pub m: BitSet,
    pub v1: BitSet,
    pub v_half: BitSet,
    pub vc_prime: BitSet,
    pub stage1: BitSet,
}

/// `M = {p_v ≥ d}`, the half-integral LP on `g[V∖M]`, and the black-box cover
/// of `g[V_½]`; stage 1 is `M ∪ V_1 ∪ VC'`.
pub fn threshold_sets(
    g: &CoverGraph,
    probs: &[f64],
    d: f64,
    solver: &dyn VcSolver,
    ctx: &SolveContext<'_>,
) -> Result<ThresholdSets> {
    let n = g.n();
    let m = BitSet::from_indices(n, (0..n).filter(|&v| probs[v] >= d - MEMBERSHIP_TOL));
    let rest = g.induced(&m.complement());
    let lp = lp_half_integral(&rest);
    let vc_prime = solver.solve(&rest.induced(&lp.v_half), ctx)?.members;
    let mut stage1 = m.clone();
    stage1.union_with(&lp.v1);
    stage1.union_with(&vc_prime);
    debug_assert!(g.is_cover(&stage1));
    Ok(ThresholdSets {
        m,
        v1: lp.v1,
        v_half: lp.v_half,
        vc_prime,
        stage1,
    })
}

/// The threshold algorithm; on hypergraphs it works on the cover graph and
/// finishes by orientation.
pub struct Threshold {
    pub config: ThresholdConfig,
}

impl Threshold {
    pub fn new(config: ThresholdConfig) -> Result<Self> {
        config.validate()?;
        Ok(Threshold { config })
    }

    pub fn sets(&self, instance: &Instance, rng: &mut ChaCha8Rng) -> Result<ThresholdSets> {
        let probs = self.config.probabilities(instance, rng)?;
        let g = build_cover_graph(instance, &instance.costs())?;
        let stars = cover_stars(instance);
        let ctx = SolveContext {
            stars: Some(&stars),
            layers: None,
        };
        threshold_sets(&g, &probs, self.config.d, self.config.solver.as_ref(), &ctx)
    }
}

impl QueryAlgorithm for Threshold {
    fn name(&self) -> String {
        match self.config.prob_mode {
            ProbMode::ExactGraph => "threshold".into(),
            ProbMode::Sampled { .. } => "threshold-hyper".into(),
        }
    }
    fn d(&self) -> Option<f64> {
        Some(self.config.d)
    }
    fn alpha(&self) -> Option<f64> {
        Some(self.config.alpha)
    }
    fn plan(&self, instance: &Instance, rng: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        let sets = self.sets(instance, rng)?;
        let completion = match self.config.prob_mode {
            ProbMode::ExactGraph => Completion::GraphMandatory,
            ProbMode::Sampled { .. } => Completion::Orientation,
        };
        Ok(Box::new(TwoStagePolicy {
            stage1: sets.stage1,
            completion,
        }))
    }
}

/// Threshold for graphs given as a union of interval layers: cliques are
/// removed by local ratio first, and the layer dynamic program is the exact
/// black box on what remains.
pub struct ThresholdLayers {
    pub d: f64,
    /// Each layer lists vertex ids in left-endpoint order.
    pub layers: Vec<Vec<String>>,
    pub max_layers: usize,
}

impl ThresholdLayers {
    pub fn new(layers: Vec<Vec<String>>) -> Self {
        ThresholdLayers {
            d: optimal_d(1.0).expect("alpha 1 is in range"),
            layers,
            max_layers: DEFAULT_DP_LAYERS,
        }
    }

    fn layer_indices(&self, instance: &Instance) -> Vec<Vec<usize>> {
        self.layers
            .iter()
            .map(|l| l.iter().filter_map(|id| instance.index_of(id)).collect())
            .collect()
    }
}

impl QueryAlgorithm for ThresholdLayers {
    fn name(&self) -> String {
        "threshold-layers".into()
    }
    fn d(&self) -> Option<f64> {
        Some(self.d)
    }
    fn alpha(&self) -> Option<f64> {
        Some(1.0)
    }
    fn plan(&self, instance: &Instance, _: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        let probs = exact_prob_graph(instance)?.probs;
        let layers = self.layer_indices(instance);
        let g = build_cover_graph(instance, &instance.costs())?;
        let red = clique_reduce(&g, interval_layer_cliques(&layers));
        let ctx = SolveContext {
            stars: None,
            layers: Some(&layers),
        };
        let solver = IntervalDpSolver {
            max_layers: self.max_layers,
        };
        let mut stage1 = threshold_sets(&red.reduced, &probs, self.d, &solver, &ctx)?.stage1;
        stage1.union_with(&red.forced.members);
        Ok(Box::new(TwoStagePolicy {
            stage1,
            completion: Completion::GraphMandatory,
        }))
    }
}

pub fn run_threshold_graph(
    instance: &Instance,
    config: &ThresholdConfig,
    real: &Realization,
) -> Result<RunOutcome> {
    if !instance.is_graph() {
        return Err(Error::Unsupported(
            "run_threshold_graph needs a graph instance".into(),
        ));
    }
    if config.prob_mode != ProbMode::ExactGraph {
        return Err(Error::Param("graph runs use exact probabilities".into()));
    }
    let alg = Threshold::new(config.clone())?;
    super::run_once(
        &alg,
        instance,
        real,
        &mut crate::model::stream_rng(0, u64::MAX),
    )
}

pub fn run_threshold_hypergraph(
    instance: &Instance,
    config: &ThresholdConfig,
    real: &Realization,
    rng: &mut ChaCha8Rng,
) -> Result<RunOutcome> {
    if !matches!(config.prob_mode, ProbMode::Sampled { .. }) {
        return Err(Error::Param(
            "hypergraph runs estimate probabilities by sampling".into(),
        ));
    }
    let alg = Threshold::new(config.clone())?;
    super::run_once(&alg, instance, real, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;
    use crate::vcover::{AutoExactSolver, LocalRatioSolver};

    #[test]
    fn optimal_d_endpoints() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((optimal_d(1.0).unwrap() - 1.0 / phi).abs() < 1e-12);
        assert!((threshold_ratio(1.0).unwrap() - phi).abs() < 1e-12);
        assert_eq!(optimal_d(2.0).unwrap(), 0.5);
        assert_eq!(threshold_ratio(2.0).unwrap(), 2.0);
        assert!(optimal_d(0.5).is_err());
    }

    #[test]
    fn optimal_d_balances_both_branches() {
        for a in [1.0, 1.25, 1.5, 1.75, 2.0] {
            let d = optimal_d(a).unwrap();
            assert!((1.0 / d - (a + (2.0 - a) * d)).abs() < 1e-12);
            assert!((1.0 / d - threshold_ratio(a).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn hyper_ratio_reduces_to_graph_ratio_without_error() {
        for a in [1.0, 1.5, 2.0] {
            assert!((hyper_ratio(a, 0.0).unwrap() - threshold_ratio(a).unwrap()).abs() < 1e-12);
        }
        assert!(hyper_ratio(1.0, 0.05).unwrap() > threshold_ratio(1.0).unwrap());
    }

    #[test]
    fn per_vertex_delta_composes() {
        let dv = per_vertex_delta(0.1, 12);
        assert!(((1.0 - dv).powi(12) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn fig1_threshold_sets() {
        // ε = 0.1: p_x = 0.19, p_y = p_z = 0.5; nothing reaches d ≈ 0.618 and
        // the LP takes x.
        let inst = fig1(0.1);
        let alg =
            Threshold::new(ThresholdConfig::graph(Arc::new(AutoExactSolver)).unwrap()).unwrap();
        let s = alg
            .sets(&inst, &mut crate::model::stream_rng(0, 0))
            .unwrap();
        assert!(s.m.is_empty());
        assert_eq!(inst.ids_of(&s.stage1), ["x"]);
    }

    #[test]
    fn low_threshold_queries_everything_above_it() {
        let inst = fig1(0.1);
        let mut cfg = ThresholdConfig::graph(Arc::new(LocalRatioSolver)).unwrap();
        cfg.d = 0.5;
        let s = Threshold::new(cfg)
            .unwrap()
            .sets(&inst, &mut crate::model::stream_rng(0, 0))
            .unwrap();
        assert_eq!(inst.ids_of(&s.m), ["y", "z"]);
        assert_eq!(inst.ids_of(&s.stage1), ["y", "z"]);
    }

    #[test]
    fn config_validation() {
        let mut cfg = ThresholdConfig::graph(Arc::new(AutoExactSolver)).unwrap();
        cfg.d = 1.5;
        assert!(Threshold::new(cfg).is_err());
        assert!(ThresholdConfig::hypergraph(Arc::new(AutoExactSolver), 1.0, 0.05, 1.5).is_err());
    }
}
