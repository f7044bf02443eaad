// SPDX-License-Identifier: MIT OR Apache-2.0

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::risk::{cell_errors, ExperimentConfig};
use super::selectors::{EstimatorKind, SetClass, TruthSpec};
use crate::error::{Error, Result};
use crate::model::{DesignKind, NoiseSpec, Segment};
use crate::theory::{changepoint_tail_envelope, BoundConstants};

/// Slack on `n |Ĝ △ G| ≥ x` absorbing rounding in the sym-diff measure.
const EXCEEDANCE_SLACK: f64 = 1e-9;

/// Tail experiment: `P[n |Ĝ △ G| ≥ x]` for one truth at one sample size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    pub design: DesignKind,
    pub n: usize,
    pub noise: NoiseSpec,
    pub estimator: EstimatorKind,
    pub class: SetClass,
    pub truth: TruthSpec,
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
    pub x_grid: Vec<f64>,
}

impl TailConfig {
    fn as_risk_config(&self) -> ExperimentConfig {
        ExperimentConfig {
            design: self.design,
            n_grid: vec![self.n],
            noise: self.noise,
            estimator: self.estimator,
            class: self.class,
            truth_grid: vec![self.truth],
            replications: self.replications,
            master_seed: self.master_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.as_risk_config().validate()?;
        if self.x_grid.is_empty() {
            return Err(Error::config("x_grid is empty"));
        }
        if let Some(x) = self.x_grid.iter().find(|x| !x.is_finite()) {
            return Err(Error::config(format!("x_grid entries must be finite, got {x}")));
        }
        Ok(())
    }

    /// Constants of the change-point envelope, when it applies.
    fn envelope_constants(&self) -> Option<BoundConstants> {
        if self.estimator != EstimatorKind::LseChangepoint || self.design != DesignKind::Dd {
            return None;
        }
        let sigma = self.noise.subgaussian_sigma().filter(|&s| s > 0.0)?;
        BoundConstants::for_sigma(sigma).ok()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailRecord {
    pub x: f64,
    pub exceedance: f64,
    /// Binomial standard error.
    pub se: f64,
    pub envelope: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailReport {
    pub config: TailConfig,
    pub truth: Segment,
    pub records: Vec<TailRecord>,
    pub runtime_secs: f64,
}

/// Empirical exceedance curve with the theoretical envelope overlaid where known.
pub fn tail_curve(config: &TailConfig) -> Result<TailReport> {
    config.validate()?;
    let started = Instant::now();
    let truth = config.truth.resolve(config.n)?;
    let nf = config.n as f64;
    let scaled: Vec<f64> = cell_errors(&config.as_risk_config(), config.n, 0, &truth)?
        .into_iter()
        .map(|e| nf * e)
        .collect();
    let reps = config.replications as f64;
    let constants = config.envelope_constants();
    let records = config
        .x_grid
        .iter()
        .map(|&x| {
            let hits = scaled.iter().filter(|&&d| d >= x - EXCEEDANCE_SLACK).count();
            let p = hits as f64 / reps;
            TailRecord {
                x,
                exceedance: p,
                se: (p * (1.0 - p) / reps).sqrt(),
                envelope: constants.as_ref().map(|k| changepoint_tail_envelope(x, k)),
            }
        })
        .collect();
    Ok(TailReport {
        config: config.clone(),
        truth,
        records,
        runtime_secs: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(noise: NoiseSpec) -> TailConfig {
        TailConfig {
            design: DesignKind::Dd,
            n: 200,
            noise,
            estimator: EstimatorKind::LseChangepoint,
            class: SetClass::Anchored,
            truth: TruthSpec::fixed(0.0, 0.5),
            replications: 200,
            master_seed: 9,
            x_grid: vec![0.0, 1.5, 4.0, 16.0],
        }
    }

    #[test]
    fn noiseless_never_exceeds_resolution() {
        let report = tail_curve(&config(NoiseSpec::noiseless())).unwrap();
        assert_eq!(report.records[0].exceedance, 1.0);
        assert!(report.records[1..].iter().all(|r| r.exceedance == 0.0 && r.envelope.is_none()));
    }

    #[test]
    fn exceedance_is_monotone_and_enveloped() {
        let report = tail_curve(&config(NoiseSpec::gaussian(0.5).unwrap())).unwrap();
        let p: Vec<f64> = report.records.iter().map(|r| r.exceedance).collect();
        assert!(p.windows(2).all(|w| w[0] >= w[1]));
        assert!(report.records.iter().all(|r| r.envelope.is_some() && r.se >= 0.0));
    }

    #[test]
    fn envelope_only_for_changepoint_on_regular_design() {
        let cfg = TailConfig {
            estimator: EstimatorKind::LseSegment,
            class: SetClass::All,
            ..config(NoiseSpec::gaussian(0.5).unwrap())
        };
        assert!(tail_curve(&cfg).unwrap().records.iter().all(|r| r.envelope.is_none()));
        let bad = TailConfig { x_grid: vec![], ..cfg };
        assert!(bad.validate().is_err());
    }
}
