// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

/// Pairwise (cascade) summation in fixed index order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const BLOCK: usize = 16;
    if values.len() <= BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Mean and plug-in standard error `sqrt(var / R)` with `var = Σ (v - mean)² / R`.
pub fn mean_and_se(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let r = values.len() as f64;
    let mean = pairwise_sum(values) / r;
    let sq: Vec<f64> = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&sq) / r;
    (mean, (var / r).sqrt())
}

/// Ordinary least squares fit of `ln y` on `ln x`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RateFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    /// Standard error of the slope; needs at least three points.
    pub slope_se: Option<f64>,
    /// 95% confidence interval of the slope from the t distribution.
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub points: usize,
}

/// Log-log regression. `None` with fewer than two points or any non-positive value.
pub fn fit_log_log(x: &[f64], y: &[f64]) -> Option<RateFit> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    if x.iter().chain(y).any(|v| !(v.is_finite() && *v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 { 1.0 - ssr / syy } else { 1.0 };
    let (slope_se, ci_low, ci_high) = if lx.len() >= 3 {
        let df = k - 2.0;
        let se = (ssr / df / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, df)
            .map(|d| d.inverse_cdf(0.975))
            .unwrap_or(f64::NAN);
        (Some(se), Some(slope - t * se), Some(slope + t * se))
    } else {
        (None, None, None)
    };
    Some(RateFit {
        slope,
        intercept,
        r_squared,
        slope_se,
        ci_low,
        ci_high,
        points: lx.len(),
    })
}
