//! Prequential evaluation, multi-seed experiments and significance testing.

mod experiment;
pub mod export;
mod groups;
mod stats;
mod trace;

pub use experiment::{
    configured_threads, prequential, prequential_run, run_experiment, ExperimentConfig,
    ExperimentOutput, ExperimentResult, LearnerColumn, RunFailure, DEFAULT_WINDOW, THREADS_ENV,
};
pub use groups::{pairwise_tests, significance_groups, GroupEntry, PairwiseTest, ScenarioGroup};
pub use stats::{wilcoxon_rank_sum, wilcoxon_signed_rank, WilcoxonVariant, MAX_EXACT_N};
pub use trace::{MetricPoint, RunTrace};
