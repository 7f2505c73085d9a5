//! Diversity and sensitivity audits for multi-task benchmarks.
//!
//! Tasks are treated as voters and models as candidates. The crate provides
//!
//! * the two aggregation rules: mean score ([`cardinal_aggregate`]) and mean
//!   pairwise winning rate ([`ordinal_aggregate`]);
//! * diversity, the reversed Kendall's W over per-task rankings;
//! * sensitivity, the largest Kendall tau an irrelevant change can cause,
//!   searched by gradient descent ([`cardinal_sensitivity`],
//!   [`ordinal_sensitivity`]);
//! * brute-force certifiers for small instances ([`oracle`]);
//! * leaderboard ingestion, audit reports and task-subset analysis
//!   ([`workbench`]).
//!
//! Throughout, rank 1 is the best model.

pub mod benchmark;
pub mod error;
pub mod generate;
pub mod impute;
pub mod oracle;
pub mod rank;
pub mod sensitivity;
pub mod workbench;

pub use benchmark::{
    cardinal_aggregate, mean_scores, ordinal_aggregate, ordinal_aggregate_scores, ranks_per_task,
    top_fraction_split, winning_means, winning_rate_matrix, BenchmarkKind, ModelSplit, ScoreMatrix,
    WinningRateMatrix,
};
pub use error::{Error, Result};
pub use generate::{generate_constant, generate_random};
pub use impute::knn_impute;
pub use rank::{
    diversity_kendall_w, kendall_tau, mrc, pearson, rankdata_desc, regression_through_origin,
    RankMatrix, Ranking,
};
pub use sensitivity::{
    cardinal_sensitivity, epsilon_rule, ordinal_sensitivity, AttackResult, CardinalAttackConfig,
    OrdinalAttackConfig, Perturbation,
};
