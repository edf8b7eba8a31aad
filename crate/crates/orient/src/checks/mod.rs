//! Numerical acceptance checks: closed-form optima, lower bounds, ratio
//! guarantees and brute-force oracles, grouped into suites.

pub mod brute;
mod criteria;

pub use criteria::*;

use crate::error::{Error, Result};
use std::fmt;
use std::time::{Duration, Instant};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<28} {} ({:.1} s) {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// What a criterion body reports: pass/fail and a one-line summary.
pub(crate) type Outcome = Result<(bool, String)>;

pub(crate) fn timed(id: u8, name: &'static str, body: impl FnOnce() -> Outcome) -> CheckResult {
    let start = Instant::now();
    let (passed, detail) = match body() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CheckResult {
        id,
        name,
        passed,
        detail,
        elapsed: start.elapsed(),
    }
}

/// Named groups of criteria.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Oracles,
    ThresholdBound,
    LowerBounds,
    BestVc,
    Sampling,
    Split,
    Hypergraph,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "oracles",
        "thm4",
        "lower-bounds",
        "bestvc",
        "sampling",
        "split",
        "hypergraph",
        "all",
    ];

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "oracles" => Suite::Oracles,
            "thm4" => Suite::ThresholdBound,
            "lower-bounds" => Suite::LowerBounds,
            "bestvc" => Suite::BestVc,
            "sampling" => Suite::Sampling,
            "split" => Suite::Split,
            "hypergraph" => Suite::Hypergraph,
            "all" => Suite::All,
            _ => {
                return Err(Error::Unknown {
                    kind: "suite",
                    name: name.into(),
                })
            }
        })
    }

    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::Oracles => vec![10],
            Suite::ThresholdBound => vec![3, 4],
            Suite::LowerBounds => vec![1, 2, 7, 8, 9],
            Suite::BestVc => vec![5, 6],
            Suite::Sampling => vec![11],
            Suite::Split => vec![12],
            Suite::Hypergraph => vec![13],
            Suite::All => (1..=13).collect(),
        }
    }
}

/// Runs one criterion by number.
pub fn run_criterion(id: u8, seed: u64) -> Result<CheckResult> {
    Ok(match id {
        1 => fig1_exact_opt(seed),
        2 => general_lower_bound(seed),
        3 => threshold_upper_bound(seed),
        4 => threshold_tightness(seed),
        5 => bestvc_bipartite(seed),
        6 => bestvc_two_interval(seed),
        7 => single_hyperedge_lower_bound(seed),
        8 => two_stage_log_n(seed),
        9 => vc_three_halves(seed),
        10 => oracle_suite(seed),
        11 => sampling_accuracy(seed),
        12 => vertex_split_invariance(seed),
        13 => hypergraph_threshold(seed),
        _ => {
            return Err(Error::Param(format!(
                "no criterion {id}; they are numbered 1 to 13"
            )))
        }
    })
}

/// Runs every criterion of `suite`, calling `report` as each finishes.
pub fn run_suite(
    suite: Suite,
    seed: u64,
    mut report: impl FnMut(&CheckResult),
) -> Vec<CheckResult> {
    suite
        .criteria()
        .into_iter()
        .map(|id| {
            let r = run_criterion(id, seed).expect("suite criteria are in range");
            report(&r);
            r
        })
        .collect()
}
