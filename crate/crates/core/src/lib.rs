// SPDX-License-Identifier: MIT OR Apache-2.0

//! Detection and estimation of an unknown segment `G ⊆ [0,1]` observed through
//! the regression `Y_i = 1(X_i ∈ G) + ξ_i` on a regular or uniform random design.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: segments, designs, subgaussian noise families, seeded streams
//!   and forward simulation.
//! - [`detect`]: the anchored emptiness test and the length-constrained scan test.
//! - [`estimate`]: the least-squares segment, the change-point estimator and the
//!   two-stage estimator for segments of known minimal length.
//! - [`theory`]: closed-form affinities and deviation envelopes.
//! - [`experiments`]: the Monte Carlo harness (risk curves, separation curves,
//!   tail curves, exhaustive oracles, log-log rate fits).
//! - [`cli`]: the `segdetect` command line front end.

pub mod cli;
pub mod detect;
pub mod error;
pub mod estimate;
pub mod experiments;
pub mod model;
mod prefix;
pub mod theory;

pub use detect::{scan_statistic, test_anchored, test_scan, ScanOutcome, TestResult};
pub use error::{Error, Result};
pub use estimate::{
    estimate_with_min_length, lse_changepoint, lse_segment, EstimateResult, Fallback, StageInfo,
};
pub use model::{
    generate_design, simulate, sym_diff_measure, DesignKind, DesignSpec, NoiseFamily, NoiseSpec,
    Sample, Segment, SimRng,
};
