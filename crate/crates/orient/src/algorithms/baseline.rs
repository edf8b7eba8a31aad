use super::{complete_orientation, Completion, QueryAlgorithm, QueryPolicy, TwoStagePolicy};
use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::mandatory::{edge_status, EdgeStatus};
use crate::model::{Instance, QueryTranscript, Realization, Stage};
use crate::vcover::build_cover_graph;
use rand_chacha::ChaCha8Rng;

/// Left-endpoint order per hyperedge, round-robin across hyperedges, with no
/// first stage.
pub struct Baseline;

struct BaselinePolicy;

impl QueryPolicy for BaselinePolicy {
    fn execute(&self, instance: &Instance, real: &Realization) -> Result<QueryTranscript> {
        let mut t = QueryTranscript::new(instance.n());
        complete_orientation(instance, real, &mut t, Stage::Stage2);
        Ok(t)
    }
}

impl QueryAlgorithm for Baseline {
    fn name(&self) -> String {
        "baseline".into()
    }
    fn plan(&self, _: &Instance, _: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        Ok(Box::new(BaselinePolicy))
    }
}

/// Queries the non-leftmost members of each hyperedge first, turning to the
/// leftmost vertex only once a revealed weight lands in its interval (or
/// nothing else is left).
pub struct LeavesFirst;

struct LeavesFirstPolicy;

impl QueryPolicy for LeavesFirstPolicy {
    fn execute(&self, instance: &Instance, real: &Realization) -> Result<QueryTranscript> {
        let n = instance.n();
        let mut t = QueryTranscript::new(n);
        let mut revealed = vec![None; n];
        let mut solved = vec![false; instance.hyperedges().len()];
        loop {
            let mut progressed = false;
            for (e, members) in instance.hyperedges().iter().enumerate() {
                if solved[e] {
                    continue;
                }
                if let EdgeStatus::Solved(_) = edge_status(instance, e, &revealed) {
                    solved[e] = true;
                    continue;
                }
                let a = members[0];
                let ia = instance.interval(a);
                let a_forced = revealed[a].is_none()
                    && members[1..]
                        .iter()
                        .any(|&u| revealed[u].is_some_and(|w| ia.contains(w)));
                let next = if a_forced {
                    a
                } else {
                    members[1..]
                        .iter()
                        .copied()
                        .find(|&u| revealed[u].is_none())
                        .unwrap_or(a)
                };
                t.query(instance, real, next, Stage::Stage2);
                revealed[next] = Some(real.weight(next));
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        Ok(t)
    }
}

impl QueryAlgorithm for LeavesFirst {
    fn name(&self) -> String {
        "leaves-first".into()
    }
    fn plan(&self, _: &Instance, _: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        Ok(Box::new(LeavesFirstPolicy))
    }
}

/// A given stage-1 cover of the cover graph, completed by orientation.
pub struct FixedCover {
    pub ids: Vec<String>,
}

impl FixedCover {
    pub fn new(ids: Vec<String>) -> Self {
        FixedCover { ids }
    }
}

impl QueryAlgorithm for FixedCover {
    fn name(&self) -> String {
        format!("fixed-cover:{}", self.ids.join(","))
    }
    fn plan(&self, instance: &Instance, _: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        let ids: Vec<&str> = self.ids.iter().map(String::as_str).collect();
        let stage1: BitSet = instance.set_of(&ids)?;
        let g = build_cover_graph(instance, &instance.costs())?;
        if !g.is_cover(&stage1) {
            return Err(Error::Invalid(format!(
                "{{{}}} does not cover the vertex-cover instance",
                self.ids.join(", ")
            )));
        }
        Ok(Box::new(TwoStagePolicy {
            stage1,
            completion: Completion::Orientation,
        }))
    }
}
