// SPDX-License-Identifier: MIT OR Apache-2.0

//! Exhaustive quadratic-time counterparts of the linear-time searches.
//!
//! They enumerate every candidate window explicitly and share only the prefix
//! array with the fast routes, so agreement is exact including tie-breaking.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::detect::{check_length, scan_statistic, ScanOutcome};
use crate::error::{Error, Result};
use crate::estimate::{lse_segment, EstimateResult};
use crate::model::{generate_design, simulate, DesignKind, DesignSpec, NoiseSpec, Sample, Segment, SimRng, StreamKey};
use crate::prefix::{lse_prefix, scan_prefix};

/// Largest sample the exhaustive searches accept.
pub const ORACLE_MAX_N: usize = 2000;

fn guard(n: usize) -> Result<()> {
    if n > ORACLE_MAX_N {
        return Err(Error::OracleGuard { n, limit: ORACLE_MAX_N });
    }
    Ok(())
}

/// Least-squares segment by enumerating all `n(n+1)/2` windows and the empty set.
pub fn brute_force_lse(sample: &Sample) -> Result<EstimateResult> {
    guard(sample.len())?;
    let prefix = lse_prefix(sample.y());
    let n = sample.len();
    let mut best: Option<(f64, usize, usize)> = None;
    for j in 1..=n {
        for i in 1..=j {
            let value = prefix[j] - prefix[i - 1];
            if best.is_none_or(|(v, _, _)| value > v) {
                best = Some((value, i, j));
            }
        }
    }
    Ok(match best {
        Some((value, i, j)) if value > 0.0 => EstimateResult {
            segment: Segment::new(sample.x()[i - 1], sample.x()[j - 1])?,
            index_window: Some((i, j)),
            criterion: value,
            stage_info: None,
        },
        _ => EstimateResult {
            segment: Segment::EMPTY,
            index_window: None,
            criterion: 0.0,
            stage_info: None,
        },
    })
}

/// Scan statistic by enumerating every pair `k < l` with `x_l - x_k > h`.
pub fn brute_force_scan(sample: &Sample, h: f64) -> Result<ScanOutcome> {
    guard(sample.len())?;
    check_length(h)?;
    let x = sample.x();
    let prefix = scan_prefix(sample.y());
    let mut best: Option<(f64, usize, usize)> = None;
    for l in 2..=x.len() {
        for k in 1..l {
            if x[l - 1] - x[k - 1] > h {
                let value = prefix[l - 1] - prefix[k - 1];
                if best.is_none_or(|(v, _, _)| value > v) {
                    best = Some((value, k, l));
                }
            }
        }
    }
    Ok(match best {
        Some((value, k, l)) => ScanOutcome::Feasible { value, k, l },
        None => ScanOutcome::Infeasible,
    })
}

/// Randomised comparison of the fast searches against the exhaustive ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleCheckConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_n_min")]
    pub n_min: usize,
    #[serde(default = "default_n_max")]
    pub n_max: usize,
    #[serde(default = "default_sigmas")]
    pub sigmas: Vec<f64>,
    /// Every `noiseless_every`-th sample has no noise, which produces exact ties.
    #[serde(default = "default_noiseless_every")]
    pub noiseless_every: usize,
    #[serde(default)]
    pub master_seed: u64,
}

fn default_samples() -> usize {
    1000
}
fn default_n_min() -> usize {
    2
}
fn default_n_max() -> usize {
    50
}
fn default_sigmas() -> Vec<f64> {
    vec![0.25, 0.5, 1.0]
}
fn default_noiseless_every() -> usize {
    5
}

impl Default for OracleCheckConfig {
    fn default() -> Self {
        OracleCheckConfig {
            samples: default_samples(),
            n_min: default_n_min(),
            n_max: default_n_max(),
            sigmas: default_sigmas(),
            noiseless_every: default_noiseless_every(),
            master_seed: 0,
        }
    }
}

impl OracleCheckConfig {
    pub fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::config("oracle check needs at least one sample"));
        }
        if self.n_min < 2 || self.n_min > self.n_max {
            return Err(Error::config(format!(
                "need 2 <= n_min <= n_max, got n_min = {}, n_max = {}",
                self.n_min, self.n_max
            )));
        }
        guard(self.n_max)?;
        if self.sigmas.is_empty() {
            return Err(Error::config("oracle check needs at least one sigma"));
        }
        for &s in &self.sigmas {
            NoiseSpec::gaussian(s)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheckReport {
    pub samples: usize,
    pub lse_mismatches: usize,
    pub scan_mismatches: usize,
    pub scan_infeasible: usize,
    /// Zero-based indices of the first few mismatching samples.
    pub first_mismatches: Vec<usize>,
}

impl OracleCheckReport {
    pub fn passed(&self) -> bool {
        self.lse_mismatches == 0 && self.scan_mismatches == 0
    }
}

/// The `index`-th random case: design, truth, noise and window length.
fn oracle_case(config: &OracleCheckConfig, index: usize) -> Result<(Sample, f64)> {
    let mut rng = SimRng::for_key(StreamKey::new(config.master_seed, 0, 0, index));
    let n = rng.random_range(config.n_min..=config.n_max);
    let kind = if index.is_multiple_of(2) { DesignKind::Dd } else { DesignKind::Rd };
    let x = generate_design(&DesignSpec::new(kind, n)?, &mut rng);
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    let g = if rng.random_bool(0.15) {
        Segment::EMPTY
    } else {
        Segment::new(u.min(v), u.max(v))?
    };
    let noise = if config.noiseless_every > 0 && index.is_multiple_of(config.noiseless_every) {
        NoiseSpec::noiseless()
    } else {
        NoiseSpec::gaussian(config.sigmas[index % config.sigmas.len()])?
    };
    let sample = simulate(&x, &g, &noise, &mut rng)?;
    let h = rng.random_range(0.001..0.8);
    Ok((sample, h))
}

pub fn run_oracle_check(config: &OracleCheckConfig) -> Result<OracleCheckReport> {
    config.validate()?;
    let mut report = OracleCheckReport {
        samples: config.samples,
        lse_mismatches: 0,
        scan_mismatches: 0,
        scan_infeasible: 0,
        first_mismatches: Vec::new(),
    };
    for index in 0..config.samples {
        let (sample, h) = oracle_case(config, index)?;
        let lse_ok = lse_segment(&sample) == brute_force_lse(&sample)?;
        let fast = scan_statistic(&sample, h)?;
        let scan_ok = fast == brute_force_scan(&sample, h)?;
        if fast == ScanOutcome::Infeasible {
            report.scan_infeasible += 1;
        }
        report.lse_mismatches += usize::from(!lse_ok);
        report.scan_mismatches += usize::from(!scan_ok);
        if (!lse_ok || !scan_ok) && report.first_mismatches.len() < 10 {
            report.first_mismatches.push(index);
        }
    }
    Ok(report)
}
