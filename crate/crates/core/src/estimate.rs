// SPDX-License-Identifier: MIT OR Apache-2.0

//! Segment estimators.
//!
//! - [`lse_segment`]: least squares over all segments, i.e. the contiguous run
//!   of design points maximising `Σ (2Y_i - 1)`.
//! - [`lse_changepoint`]: least squares over anchored segments `[0, θ]`.
//! - [`estimate_with_min_length`]: sample-split estimator for segments of
//!   length at least `mu`. A pilot least-squares fit on the even positions gives
//!   a midpoint inside `G`; each endpoint is then a change point seen from that
//!   midpoint on the odd positions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Sample, Segment};
use crate::prefix::{lse_prefix, prefix_sums};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fallback {
    /// The pilot fit on the even positions was empty.
    EmptyPilot,
    /// No odd position on one side of the pilot midpoint; the pilot is returned.
    EmptySide,
}

/// Intermediate quantities of [`estimate_with_min_length`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StageInfo {
    pub pilot: Segment,
    pub midpoint: Option<f64>,
    pub pilot_size: usize,
    /// Odd positions at or left of the midpoint.
    pub left_size: usize,
    /// Odd positions at or right of the midpoint.
    pub right_size: usize,
    pub fallback: Option<Fallback>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EstimateResult {
    pub segment: Segment,
    /// First and last design positions (counted from 1) inside `segment`.
    pub index_window: Option<(usize, usize)>,
    /// Criterion value attained by `segment`: `Σ (2Y_i - 1)` over the points inside.
    pub criterion: f64,
    pub stage_info: Option<StageInfo>,
}

/// Best contiguous window of a prefix array: `(value, i, j)` maximising
/// `P[j] - P[i-1]` over `1 ≤ i ≤ j ≤ n`, smallest `j` then smallest `i` on ties.
pub(crate) fn best_window(prefix: &[f64]) -> Option<(f64, usize, usize)> {
    let n = prefix.len().checked_sub(1)?;
    let mut best: Option<(f64, usize, usize)> = None;
    let mut min_prefix = f64::INFINITY;
    let mut min_at = 0usize;
    for j in 1..=n {
        if prefix[j - 1] < min_prefix {
            min_prefix = prefix[j - 1];
            min_at = j - 1;
        }
        let value = prefix[j] - min_prefix;
        if best.is_none_or(|(v, _, _)| value > v) {
            best = Some((value, min_at + 1, j));
        }
    }
    best
}

/// Smallest maximiser `M` of `P[M]` over `M = 0..=n`, with its value.
pub(crate) fn best_prefix(prefix: &[f64]) -> (usize, f64) {
    let mut arg = 0usize;
    let mut best = prefix[0];
    for (m, &v) in prefix.iter().enumerate().skip(1) {
        if v > best {
            best = v;
            arg = m;
        }
    }
    (arg, best)
}

/// Least-squares segment. Returns the empty set when no window has a positive sum.
pub fn lse_segment(sample: &Sample) -> EstimateResult {
    let prefix = lse_prefix(sample.y());
    match best_window(&prefix) {
        Some((value, i, j)) if value > 0.0 => {
            let x = sample.x();
            EstimateResult {
                segment: Segment::new(x[i - 1], x[j - 1]).expect("sorted design in [0, 1]"),
                index_window: Some((i, j)),
                criterion: value,
                stage_info: None,
            }
        }
        _ => EstimateResult {
            segment: Segment::EMPTY,
            index_window: None,
            criterion: 0.0,
            stage_info: None,
        },
    }
}

/// Change-point estimate `[0, x_M]` where `M` maximises `F(M) = Σ_{i≤M} (2Y_i - 1)`
/// over `M = 0..=n` with `F(0) = 0`; `M = 0` gives the empty set.
pub fn lse_changepoint(sample: &Sample) -> EstimateResult {
    let prefix = lse_prefix(sample.y());
    let (m, value) = best_prefix(&prefix);
    if m == 0 {
        return EstimateResult {
            segment: Segment::EMPTY,
            index_window: None,
            criterion: 0.0,
            stage_info: None,
        };
    }
    EstimateResult {
        segment: Segment::anchored(sample.x()[m - 1]).expect("design in [0, 1]"),
        index_window: Some((1, m)),
        criterion: value,
        stage_info: None,
    }
}

/// Last point of the change-point fit on `(x, y)` read in the given order,
/// or `None` when the fit keeps no point.
fn changepoint_end(x: &[f64], y: &[f64]) -> Option<f64> {
    let prefix = prefix_sums(y.iter().map(|&v| 2.0 * v - 1.0));
    let (m, _) = best_prefix(&prefix);
    (m > 0).then(|| x[m - 1])
}

/// Two-stage estimator for segments with `|G| ≥ mu`, intended for the regular design.
///
/// 1. Positions are split by parity (counted from 1): even positions feed a
///    pilot [`lse_segment`] fit whose midpoint is `m`.
/// 2. The odd positions with `x ≥ m`, read left to right, give the right end by
///    a change-point fit. The odd positions with `x ≤ m`, read right to left,
///    give the left end the same way.
/// 3. The result `[ã, b̃]` is clamped so that `ã ≤ m ≤ b̃`.
///
/// An empty pilot yields the empty set; an empty side yields the pilot. Both
/// cases are flagged in [`StageInfo::fallback`].
pub fn estimate_with_min_length(sample: &Sample, mu: f64) -> Result<EstimateResult> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::param(format!("minimal length mu must lie in (0, 1), got {mu}")));
    }
    if sample.len() < 4 {
        return Err(Error::InvalidSample(format!(
            "the two-stage estimator needs at least 4 points, got {}",
            sample.len()
        )));
    }
    let n = sample.len();
    let even: Vec<usize> = (1..n).step_by(2).collect();
    let (pilot_x, pilot_y) = sample.columns_at(&even);
    let pilot_sample = Sample::new(pilot_x, pilot_y)?;
    let pilot = lse_segment(&pilot_sample).segment;

    let mut info = StageInfo {
        pilot,
        midpoint: pilot.midpoint(),
        pilot_size: even.len(),
        left_size: 0,
        right_size: 0,
        fallback: None,
    };
    let Some(mid) = info.midpoint else {
        info.fallback = Some(Fallback::EmptyPilot);
        return Ok(EstimateResult {
            segment: Segment::EMPTY,
            index_window: None,
            criterion: 0.0,
            stage_info: Some(info),
        });
    };

    let x = sample.x();
    let right: Vec<usize> = (0..n).step_by(2).filter(|&i| x[i] >= mid).collect();
    let left: Vec<usize> = (0..n).step_by(2).rev().filter(|&i| x[i] <= mid).collect();
    info.left_size = left.len();
    info.right_size = right.len();
    if left.is_empty() || right.is_empty() {
        info.fallback = Some(Fallback::EmptySide);
        return Ok(EstimateResult {
            segment: pilot,
            index_window: None,
            criterion: sample.lse_criterion(&pilot),
            stage_info: Some(info),
        });
    }

    let (rx, ry) = sample.columns_at(&right);
    let (lx, ly) = sample.columns_at(&left);
    let b = changepoint_end(&rx, &ry).unwrap_or(mid).max(mid);
    let a = changepoint_end(&lx, &ly).unwrap_or(mid).min(mid);
    let segment = Segment::new(a, b)?;
    Ok(EstimateResult {
        segment,
        index_window: None,
        criterion: sample.lse_criterion(&segment),
        stage_info: Some(info),
    })
}
