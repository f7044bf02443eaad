// SPDX-License-Identifier: MIT OR Apache-2.0

//! Emptiness tests `H0: G = ∅` against `H1: |G| ≥ h`.
//!
//! [`test_anchored`] is for segments that start at 0: it only looks at the
//! design points in `[0, h]` and counts small responses. [`test_scan`] makes no
//! location assumption and scans every window of the design longer than `h`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Sample;
use crate::prefix::scan_prefix;

/// Outcome of an emptiness test.
///
/// For the anchored test `statistic` is the small-response count and `threshold`
/// is `c·N`, rejecting when `statistic ≤ threshold`. For the scan test
/// `statistic` is the maximal window value and `threshold` is 0, rejecting when
/// `statistic ≥ threshold`; it is `None` when no window is long enough.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TestResult {
    pub reject: bool,
    pub statistic: Option<f64>,
    pub threshold: f64,
    /// Anchored test: number of design points in `[0, h]`.
    /// Scan test: number of feasible windows.
    pub n_used: usize,
}

impl TestResult {
    pub fn is_feasible(&self) -> bool {
        self.statistic.is_some()
    }
}

/// Maximal scan window value and its position.
///
/// `k` and `l` are design positions counted from 1; the window `[X_k, X_l)`
/// covers responses `k..=l-1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScanOutcome {
    Feasible { value: f64, k: usize, l: usize },
    Infeasible,
}

impl ScanOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            ScanOutcome::Feasible { value, .. } => Some(*value),
            ScanOutcome::Infeasible => None,
        }
    }

    pub fn window(&self) -> Option<(usize, usize)> {
        match self {
            ScanOutcome::Feasible { k, l, .. } => Some((*k, *l)),
            ScanOutcome::Infeasible => None,
        }
    }
}

pub(crate) fn check_length(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::param(format!("window length h must lie in (0, 1], got {h}")));
    }
    Ok(())
}

/// Anchored test: with `N = #{i : x_i ≤ h}` and `S = #{i ≤ N : y_i ≤ 1/2}`,
/// reject emptiness iff `N ≥ 1` and `S ≤ c·N`.
///
/// `c` should lie strictly between `P[ξ ≤ -1/2]` and `P[ξ ≤ 1/2]`; see
/// [`NoiseSpec::default_anchored_fraction`](crate::NoiseSpec::default_anchored_fraction).
pub fn test_anchored(sample: &Sample, h: f64, c: f64) -> Result<TestResult> {
    check_length(h)?;
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::param(format!("count fraction c must lie in (0, 1), got {c}")));
    }
    let n_used = sample.x().partition_point(|&x| x <= h);
    let small = sample.y()[..n_used].iter().filter(|&&y| y <= 0.5).count();
    let threshold = c * n_used as f64;
    Ok(TestResult {
        reject: n_used >= 1 && small as f64 <= threshold,
        statistic: Some(small as f64),
        threshold,
        n_used,
    })
}

/// Maximum of `½ Σ_{i=k}^{l-1} (2y_i - 1)` over `1 ≤ k < l ≤ n` with
/// `x_l - x_k > h`, in linear time.
///
/// For each `l` the feasible `k` form a prefix `1..=K(l)` with `K` non-decreasing
/// in `l`, so a running minimum of the prefix sums over that prefix suffices.
/// Ties go to the smallest `l`, then the smallest `k`.
pub fn scan_statistic(sample: &Sample, h: f64) -> Result<ScanOutcome> {
    check_length(h)?;
    let x = sample.x();
    let prefix = scan_prefix(sample.y());
    let mut best: Option<(f64, usize, usize)> = None;
    let mut included = 0usize;
    let mut min_prefix = f64::INFINITY;
    let mut min_k = 0usize;
    for l in 2..=x.len() {
        let xl = x[l - 1];
        while included + 1 < l && xl - x[included] > h {
            // k = included + 1 contributes P[k - 1] = P[included]
            if prefix[included] < min_prefix {
                min_prefix = prefix[included];
                min_k = included + 1;
            }
            included += 1;
        }
        if included == 0 {
            continue;
        }
        let value = prefix[l - 1] - min_prefix;
        if best.is_none_or(|(v, _, _)| value > v) {
            best = Some((value, min_k, l));
        }
    }
    Ok(match best {
        Some((value, k, l)) => ScanOutcome::Feasible { value, k, l },
        None => ScanOutcome::Infeasible,
    })
}

/// Number of index pairs `k < l` with `x_l - x_k > h`.
pub fn feasible_window_count(x: &[f64], h: f64) -> usize {
    let mut included = 0usize;
    let mut total = 0usize;
    for l in 2..=x.len() {
        while included + 1 < l && x[l - 1] - x[included] > h {
            included += 1;
        }
        total += included;
    }
    total
}

/// Scan test: reject emptiness iff the scan statistic is non-negative.
/// When no window is long enough the test accepts and `statistic` is `None`.
pub fn test_scan(sample: &Sample, h: f64) -> Result<TestResult> {
    let outcome = scan_statistic(sample, h)?;
    let statistic = outcome.value();
    Ok(TestResult {
        reject: statistic.is_some_and(|v| v >= 0.0),
        statistic,
        threshold: 0.0,
        n_used: feasible_window_count(sample.x(), h),
    })
}
