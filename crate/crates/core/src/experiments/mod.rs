// SPDX-License-Identifier: MIT OR Apache-2.0

//! Monte Carlo harness.
//!
//! Every replication draws from its own [`SimRng`](crate::model::SimRng) stream
//! keyed by `(master_seed, n, truth index, replication index)` and results are
//! reduced in index order, so reports are bit-identical for any thread count.

mod oracle;
mod risk;
mod selectors;
mod separation;
mod stats;
mod tail;

pub use oracle::{
    brute_force_lse, brute_force_scan, run_oracle_check, OracleCheckConfig, OracleCheckReport,
    ORACLE_MAX_N,
};
pub use risk::{monte_carlo_risk, ExperimentConfig, RiskRecord, RiskReport, TruthRisk};
pub use selectors::{AlternativeGrid, EstimatorKind, Schedule, SetClass, TestKind, TruthSpec};
pub use separation::{separation_curve, SeparationConfig, SeparationRecord, SeparationReport};
pub use stats::{fit_log_log, mean_and_se, pairwise_sum, RateFit};
pub use tail::{tail_curve, TailConfig, TailRecord, TailReport};
