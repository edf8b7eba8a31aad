//! Instance generators, exact and Monte-Carlo estimates of expected costs,
//! and vertex splitting.

pub mod constructions;
mod evaluate;
mod exact;
mod random;
mod split;
mod two_stage;

pub use constructions::{gen_paper, Construction, GenParams};
pub use evaluate::{
    evaluate, evaluate_with, paired_samples, write_csv, EvaluationReport, PairedSamples, ReportRow,
    CSV_HEADER, DEFAULT_BOOTSTRAP,
};
pub use exact::{exact_expected_opt, EXACT_COMBINATION_BOUND};
pub use random::{gen_random, generate, Generated, RandomFamily, RandomOptions};
pub use split::{random_generalized, vertex_split, GeneralizedInstance, MAX_GENERALIZED_VERTICES};
pub use two_stage::{best_strict_two_stage, strict_two_stage_cost, PrefixTwoStage};
