// SPDX-License-Identifier: MIT OR Apache-2.0

//! Closed-form theoretical quantities: Hellinger affinities between the data
//! laws of two segments, deviation envelopes of the estimators, and the order
//! statistic gap bound for the uniform design.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{regular_grid, sym_diff_measure, DesignKind, DesignSpec, Segment};

/// Constants of the deviation envelopes.
///
/// `c0` is explicit: `2 / (1 - e^{-1/(8σ²)})`. `c1` and `c2` are only known to
/// exist; the defaults are placeholders for plotting overlays.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConstants {
    pub sigma: f64,
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
}

impl BoundConstants {
    pub fn for_sigma(sigma: f64) -> Result<Self> {
        check_sigma(sigma)?;
        Ok(BoundConstants {
            sigma,
            c0: changepoint_constant(sigma),
            c1: 10.0,
            c2: 1.0 / (32.0 * sigma * sigma),
        })
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("sigma", self.sigma), ("c0", self.c0), ("c1", self.c1), ("c2", self.c2)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(format!("bound constant {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::param(format!("sigma must be positive, got {sigma}")));
    }
    Ok(())
}

/// `C0 = 2 (1 - e^{-1/(8σ²)})^{-1}`.
pub fn changepoint_constant(sigma: f64) -> f64 {
    2.0 / (-(-1.0 / (8.0 * sigma * sigma)).exp_m1())
}

/// Number of regular-grid points `i/n` inside `g1 △ g2`.
pub fn grid_points_in_sym_diff(g1: &Segment, g2: &Segment, n: usize) -> usize {
    regular_grid(n)
        .into_iter()
        .filter(|&x| g1.contains(x) != g2.contains(x))
        .count()
}

/// Affinity `∫ sqrt(dP_{g1} dP_{g2})` between the laws of the full sample under
/// Gaussian noise of standard deviation `sigma`.
///
/// Regular design: `exp(-#{i : i/n ∈ g1 △ g2} / (8σ²))`.
/// Uniform design: `(1 - (1 - e^{-1/(8σ²)}) |g1 △ g2|)^n`.
///
/// This is `1 - H²/2` with `H²` the squared Hellinger distance.
pub fn hellinger_affinity(g1: &Segment, g2: &Segment, design: &DesignSpec, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    design.validate()?;
    let scale = 1.0 / (8.0 * sigma * sigma);
    Ok(match design.kind {
        DesignKind::Dd => {
            let count = grid_points_in_sym_diff(g1, g2, design.n);
            (-(count as f64) * scale).exp()
        }
        DesignKind::Rd => {
            let per_point = 1.0 + (-scale).exp_m1() * sym_diff_measure(g1, g2);
            per_point.powi(design.n as i32)
        }
    })
}

/// `min(1, C0 e^{-x/(8σ²)})`: bound on `P[n |Ĝ △ G| ≥ x]` for the change-point
/// estimator on the regular design. Returns 1 for `x ≤ 0`.
pub fn changepoint_tail_envelope(x: f64, constants: &BoundConstants) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 1.0;
    }
    let s2 = constants.sigma * constants.sigma;
    (constants.c0 * (-x / (8.0 * s2)).exp()).min(1.0)
}

/// `min(1, C1 e^{-C2 x})`: bound on `P[n(|Ĝ △ G| - 4 ln n / (C2 n)) ≥ x]` for the
/// least-squares segment. Returns 1 for `x ≤ 0`.
pub fn lse_tail_envelope(x: f64, n: usize, constants: &BoundConstants) -> Result<f64> {
    if n < 2 {
        return Err(Error::param(format!("envelope needs n >= 2, got {n}")));
    }
    if x.is_nan() || x <= 0.0 {
        return Ok(1.0);
    }
    Ok((constants.c1 * (-constants.c2 * x).exp()).min(1.0))
}

/// Maps a raw deviation `d = |Ĝ △ G|` onto the envelope's argument
/// `x = n (d - 4 ln n / (C2 n))`.
pub fn lse_deviation_to_x(d: f64, n: usize, constants: &BoundConstants) -> f64 {
    let nf = n as f64;
    nf * d - 4.0 * nf.ln() / constants.c2
}

/// `min(1, n exp(-n h (1 - e^{-u}) + u (l - k)))`, a bound on `P[X_l - X_k > h]`
/// for the sorted uniform design.
pub fn rd_gap_bound(k: usize, l: usize, n: usize, h: f64, u: f64) -> Result<f64> {
    if !(1 <= k && k < l && l <= n) {
        return Err(Error::param(format!("need 1 <= k < l <= n, got k={k}, l={l}, n={n}")));
    }
    if h.is_nan() || u.is_nan() || h <= 0.0 || u <= 0.0 {
        return Err(Error::param(format!("need h > 0 and u > 0, got h={h}, u={u}")));
    }
    let nf = n as f64;
    let exponent = nf * h * (-u).exp_m1() + u * (l - k) as f64;
    Ok((nf * exponent.exp()).min(1.0))
}
