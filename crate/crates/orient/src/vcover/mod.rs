//! Vertex-cover instances and the solvers the query algorithms plug in.
//!
//! Solvers sit behind [`VcSolver`] and are looked up by name in a
//! [`SolverRegistry`], so algorithms take their black box as configuration.

mod clique;
mod exact;
mod few_hyperedges;
mod flow;
mod graph;
mod interval_dp;
mod local_ratio;
mod lp;

pub use clique::{clique_reduce, first_triangle, interval_layer_cliques, CliqueReduction};
pub use exact::{vc_exact_small, ExactSmall, DEFAULT_EXACT_BOUND};
pub use few_hyperedges::{few_hyperedges_on, vc_few_hyperedges, DEFAULT_FEW_BOUND};
pub use graph::{
    build_cover_graph, cover_stars, Bipartition, Cover, CoverGraph, HalfIntegralSolution, Star,
};
pub use interval_dp::{vc_interval_union_dp, DEFAULT_DP_LAYERS};
pub use local_ratio::vc_local_ratio_2approx;
pub use lp::{lp_half_integral, vc_bipartite_exact};

use crate::error::{Error, Result};
use std::sync::Arc;

/// Side information some solvers need beyond the graph itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct SolveContext<'a> {
    /// Hyperedge stars generating the vertex-cover instance.
    pub stars: Option<&'a [Star]>,
    /// Interval-layer vertex orders.
    pub layers: Option<&'a [Vec<usize>]>,
}

pub trait VcSolver: Send + Sync {
    fn name(&self) -> &'static str;
    /// Approximation factor the solver guarantees.
    fn alpha(&self) -> f64;
    fn solve(&self, g: &CoverGraph, ctx: &SolveContext<'_>) -> Result<Cover>;
}

pub struct ExactSmallSolver(pub ExactSmall);

impl VcSolver for ExactSmallSolver {
    fn name(&self) -> &'static str {
        "exact-small"
    }
    fn alpha(&self) -> f64 {
        1.0
    }
    fn solve(&self, g: &CoverGraph, _: &SolveContext<'_>) -> Result<Cover> {
        self.0.solve(g)
    }
}

pub struct BipartiteSolver;

impl VcSolver for BipartiteSolver {
    fn name(&self) -> &'static str {
        "bipartite"
    }
    fn alpha(&self) -> f64 {
        1.0
    }
    fn solve(&self, g: &CoverGraph, _: &SolveContext<'_>) -> Result<Cover> {
        let sides = g.bipartition().ok_or(Error::NotBipartite)?;
        vc_bipartite_exact(g, &sides)
    }
}

pub struct FewHyperedgesSolver {
    pub bound: usize,
}

impl VcSolver for FewHyperedgesSolver {
    fn name(&self) -> &'static str {
        "few-hyperedges"
    }
    fn alpha(&self) -> f64 {
        1.0
    }
    fn solve(&self, g: &CoverGraph, ctx: &SolveContext<'_>) -> Result<Cover> {
        let stars = ctx
            .stars
            .ok_or_else(|| Error::Unsupported("few-hyperedges needs the hyperedge stars".into()))?;
        few_hyperedges_on(g, stars, self.bound)
    }
}

pub struct IntervalDpSolver {
    pub max_layers: usize,
}

impl VcSolver for IntervalDpSolver {
    fn name(&self) -> &'static str {
        "interval-dp"
    }
    fn alpha(&self) -> f64 {
        1.0
    }
    fn solve(&self, g: &CoverGraph, ctx: &SolveContext<'_>) -> Result<Cover> {
        let layers = ctx
            .layers
            .ok_or_else(|| Error::Unsupported("interval-dp needs interval layers".into()))?;
        vc_interval_union_dp(g, layers, self.max_layers)
    }
}

pub struct LocalRatioSolver;

impl VcSolver for LocalRatioSolver {
    fn name(&self) -> &'static str {
        "local-ratio"
    }
    fn alpha(&self) -> f64 {
        2.0
    }
    fn solve(&self, g: &CoverGraph, _: &SolveContext<'_>) -> Result<Cover> {
        Ok(vc_local_ratio_2approx(g))
    }
}

/// Picks an exact method the instance admits: branch and bound when every
/// component is small, else min-cut on bipartite graphs, else enumeration
/// over few hyperedges.
pub struct AutoExactSolver;

impl AutoExactSolver {
    /// Some optimal cover; skips canonical tie-breaking where that is costly.
    pub fn min_cover(g: &CoverGraph, ctx: &SolveContext<'_>) -> Result<Cover> {
        Self::dispatch(g, ctx, false)
    }

    fn dispatch(g: &CoverGraph, ctx: &SolveContext<'_>, canonical: bool) -> Result<Cover> {
        let small = ExactSmall::default();
        let fits = g.components().iter().all(|c| c.len() <= small.bound);
        if fits {
            return if canonical {
                small.solve(g)
            } else {
                small.min_cover(g)
            };
        }
        if let Some(sides) = g.bipartition() {
            return vc_bipartite_exact(g, &sides);
        }
        if let Some(stars) = ctx.stars {
            if let Ok(c) = few_hyperedges_on(g, stars, DEFAULT_FEW_BOUND) {
                return Ok(c);
            }
        }
        Err(Error::Unsupported(
            "no exact vertex-cover method applies: a non-bipartite component exceeds the \
             branch-and-bound bound and there are too many hyperedges"
                .into(),
        ))
    }
}

impl VcSolver for AutoExactSolver {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn alpha(&self) -> f64 {
        1.0
    }
    fn solve(&self, g: &CoverGraph, ctx: &SolveContext<'_>) -> Result<Cover> {
        Self::dispatch(g, ctx, true)
    }
}

/// Named vertex-cover solvers.
pub struct SolverRegistry {
    entries: Vec<Arc<dyn VcSolver>>,
}

impl SolverRegistry {
    pub fn builtin() -> Self {
        let mut r = SolverRegistry {
            entries: Vec::new(),
        };
        r.register(Arc::new(AutoExactSolver));
        r.register(Arc::new(ExactSmallSolver(ExactSmall::default())));
        r.register(Arc::new(BipartiteSolver));
        r.register(Arc::new(FewHyperedgesSolver {
            bound: DEFAULT_FEW_BOUND,
        }));
        r.register(Arc::new(IntervalDpSolver {
            max_layers: DEFAULT_DP_LAYERS,
        }));
        r.register(Arc::new(LocalRatioSolver));
        r
    }

    /// Adds a solver, replacing any existing one with the same name.
    pub fn register(&mut self, solver: Arc<dyn VcSolver>) {
        self.entries.retain(|s| s.name() != solver.name());
        self.entries.push(solver);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn VcSolver>> {
        self.entries
            .iter()
            .find(|s| s.name() == name)
            .cloned()
            .ok_or_else(|| Error::Unknown {
                kind: "vertex-cover solver",
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|s| s.name()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = SolverRegistry::builtin();
        assert_eq!(r.get("local-ratio").unwrap().alpha(), 2.0);
        assert!(r.get("nope").is_err());
        assert!(r.names().contains(&"few-hyperedges"));
    }

    #[test]
    fn auto_exact_falls_back_to_min_cut_on_large_stars() {
        let g = CoverGraph::new(vec![1.0; 40], (1..40).map(|i| (0, i))).unwrap();
        let c = AutoExactSolver.solve(&g, &SolveContext::default()).unwrap();
        assert_eq!(c.members.to_vec(), vec![0]);
    }

    #[test]
    fn context_requirements_are_reported() {
        let g = CoverGraph::new(vec![1.0; 2], [(0, 1)]).unwrap();
        let r = SolverRegistry::builtin();
        assert!(r
            .get("few-hyperedges")
            .unwrap()
            .solve(&g, &SolveContext::default())
            .is_err());
        assert!(r
            .get("interval-dp")
            .unwrap()
            .solve(&g, &SolveContext::default())
            .is_err());
    }
}
