use super::{QueryAlgorithm, QueryPolicy};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::mandatory::{is_feasible, mandatory_set};
use crate::model::{is_reduced, Instance, QueryTranscript, Realization, Stage};
use crate::vcover::{
    build_cover_graph, cover_stars, AutoExactSolver, Cover, CoverGraph, SolveContext, Star,
};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug, PartialEq)]
pub struct OfflineSolution {
    pub query: BitSet,
    pub cost: f64,
}

/// Optimal query sets: the mandatory set plus a minimum cover of the cover
/// graph on the remaining vertices. This characterization needs a reduced
/// instance.
pub struct OptOracle {
    g: CoverGraph,
    stars: Vec<Star>,
}

impl OptOracle {
    pub fn new(instance: &Instance) -> Result<Self> {
        if !is_reduced(instance) {
            return Err(Error::Unsupported(
                "the offline optimum needs a reduced instance; apply reduce first".into(),
            ));
        }
        Ok(OptOracle {
            g: build_cover_graph(instance, &instance.costs())?,
            stars: cover_stars(instance),
        })
    }

    /// Minimum cover of the cover graph restricted to `V ∖ m`.
    pub fn cover_outside(&self, m: &BitSet) -> Result<Cover> {
        let ctx = SolveContext {
            stars: Some(&self.stars),
            layers: None,
        };
        AutoExactSolver::min_cover(&self.g.induced(&m.complement()), &ctx)
    }

    pub fn opt(&self, instance: &Instance, real: &Realization) -> Result<OfflineSolution> {
        let m = mandatory_set(instance, real);
        let cover = self.cover_outside(&m)?;
        let cost = instance.total_cost(&m) + cover.weight;
        let mut query = m;
        query.union_with(&cover.members);
        assert!(
            is_feasible(instance, real, &query),
            "mandatory set plus cover is infeasible"
        );
        Ok(OfflineSolution { query, cost })
    }
}

pub fn offline_opt(instance: &Instance, real: &Realization) -> Result<OfflineSolution> {
    OptOracle::new(instance)?.opt(instance, real)
}

/// Queries the offline optimum of each realization; a reference point, not
/// an online algorithm.
pub struct OfflineOpt;

struct OfflinePolicy(OptOracle);

impl QueryPolicy for OfflinePolicy {
    fn execute(&self, instance: &Instance, real: &Realization) -> Result<QueryTranscript> {
        let sol = self.0.opt(instance, real)?;
        let mut t = QueryTranscript::new(instance.n());
        for v in sol.query.iter() {
            t.query(instance, real, v, Stage::Stage1);
        }
        Ok(t)
    }
}

impl QueryAlgorithm for OfflineOpt {
    fn name(&self) -> String {
        "offline-opt".into()
    }
    fn plan(&self, instance: &Instance, _: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        Ok(Box::new(OfflinePolicy(OptOracle::new(instance)?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::testing::fig1;

    #[test]
    fn fig1_optima() {
        let inst = fig1(0.1);
        let r = Realization::from_ids(&inst, &[("x", 1.5), ("y", 2.5), ("z", 2.5)]).unwrap();
        let s = offline_opt(&inst, &r).unwrap();
        assert_eq!((inst.ids_of(&s.query), s.cost), (vec!["y", "z"], 2.0));
        let r = Realization::from_ids(&inst, &[("x", 0.5), ("y", 2.5), ("z", 2.5)]).unwrap();
        let s = offline_opt(&inst, &r).unwrap();
        assert_eq!((inst.ids_of(&s.query), s.cost), (vec!["x"], 1.0));
    }

    #[test]
    fn everything_mandatory_costs_everything() {
        let inst = fig1(0.1);
        let r = Realization::from_ids(&inst, &[("x", 1.5), ("y", 1.8), ("z", 2.5)]).unwrap();
        assert_eq!(offline_opt(&inst, &r).unwrap().cost, 3.0);
    }
}
