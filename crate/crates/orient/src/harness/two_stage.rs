//! Strict two-stage policies: a non-adaptive first stage followed by one
//! non-adaptive second stage.

use crate::algorithms::{QueryAlgorithm, QueryPolicy};
use crate::bitset::BitSet;
use crate::error::Result;
use crate::mandatory::{edge_status, EdgeStatus};
use crate::model::{Instance, QueryTranscript, Realization, Stage};
use rand_chacha::ChaCha8Rng;

/// Expected cost `k + (n − k) / 2^k` of querying a prefix of `k` staggered
/// intervals first on the two-stage lower-bound instance.
pub fn strict_two_stage_cost(n: usize, k: usize) -> f64 {
    let p = 0.5f64.powi(k as i32);
    n as f64 * p + k as f64 * (1.0 - p)
}

/// Best prefix length and its expected cost.
pub fn best_strict_two_stage(n: usize) -> (usize, f64) {
    (0..=n)
        .map(|k| (k, strict_two_stage_cost(n, k)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("range is nonempty")
}

/// Queries the `k` leftmost vertices, then every unqueried member of each
/// hyperedge still undecided.
pub struct PrefixTwoStage {
    pub k: usize,
}

struct PrefixPolicy {
    stage1: BitSet,
}

impl QueryPolicy for PrefixPolicy {
    fn stage1(&self) -> Option<&BitSet> {
        Some(&self.stage1)
    }

    fn execute(&self, instance: &Instance, real: &Realization) -> Result<QueryTranscript> {
        let n = instance.n();
        let mut t = QueryTranscript::new(n);
        for v in self.stage1.iter() {
            t.query(instance, real, v, Stage::Stage1);
        }
        let revealed = t.revealed(n);
        let mut second = BitSet::new(n);
        for (e, members) in instance.hyperedges().iter().enumerate() {
            if let EdgeStatus::Open(_) = edge_status(instance, e, &revealed) {
                for &v in members {
                    second.insert(v);
                }
            }
        }
        for v in second.iter() {
            t.query(instance, real, v, Stage::Stage2);
        }
        Ok(t)
    }
}

impl QueryAlgorithm for PrefixTwoStage {
    fn name(&self) -> String {
        format!("prefix-two-stage:{}", self.k)
    }
    fn plan(&self, instance: &Instance, _: &mut ChaCha8Rng) -> Result<Box<dyn QueryPolicy>> {
        let order = instance.left_sorted();
        let stage1 = BitSet::from_indices(instance.n(), order.into_iter().take(self.k));
        Ok(Box::new(PrefixPolicy { stage1 }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_endpoints() {
        assert_eq!(strict_two_stage_cost(8, 0), 8.0);
        assert_eq!(
            strict_two_stage_cost(8, 8),
            8.0 / 256.0 + 8.0 * (1.0 - 1.0 / 256.0)
        );
        assert_eq!(strict_two_stage_cost(8, 3), 1.0 + 3.0 * 0.875);
    }

    #[test]
    fn best_prefix_grows_with_n() {
        let costs: Vec<f64> = [64, 256, 1024]
            .iter()
            .map(|&n| best_strict_two_stage(n).1)
            .collect();
        assert!(costs.windows(2).all(|w| w[0] < w[1]));
    }
}
