// SPDX-License-Identifier: MIT OR Apache-2.0

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::selectors::{EstimatorKind, SetClass, TruthSpec};
use super::stats::{fit_log_log, mean_and_se, RateFit};
use crate::error::{Error, Result};
use crate::model::{
    generate_design, regular_grid, simulate, sym_diff_measure, DesignKind, DesignSpec, NoiseSpec,
    Segment, SimRng, StreamKey,
};

/// Empirical risk experiment: `sup_{G ∈ truth_grid} E_G |G △ Ĝ_n|` for each `n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub design: DesignKind,
    pub n_grid: Vec<usize>,
    pub noise: NoiseSpec,
    pub estimator: EstimatorKind,
    pub class: SetClass,
    pub truth_grid: Vec<TruthSpec>,
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
}

pub(crate) fn check_n_grid(n_grid: &[usize], min_n: usize) -> Result<()> {
    if n_grid.is_empty() {
        return Err(Error::config("n_grid is empty"));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config("n_grid must be strictly increasing"));
    }
    if n_grid[0] < min_n {
        return Err(Error::config(format!("n_grid entries must be at least {min_n}, got {}", n_grid[0])));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.estimator.check_against(&self.class)?;
        check_n_grid(&self.n_grid, self.estimator.min_n())?;
        self.noise.validate()?;
        if self.replications == 0 {
            return Err(Error::config("replications must be at least 1"));
        }
        if self.truth_grid.is_empty() {
            return Err(Error::config("truth_grid is empty"));
        }
        for &n in &self.n_grid {
            for (i, t) in self.truth_grid.iter().enumerate() {
                let g = t.resolve(n)?;
                if !self.class.contains(&g) {
                    return Err(Error::config(format!(
                        "truth {i} resolves to {g} at n = {n}, outside class {}",
                        self.class.label()
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruthRisk {
    pub truth_index: usize,
    pub segment: Segment,
    pub mean: f64,
    pub se: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskRecord {
    pub n: usize,
    pub truths: Vec<TruthRisk>,
    pub sup_risk: f64,
    pub sup_se: f64,
    pub sup_truth_index: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RiskReport {
    pub config: ExperimentConfig,
    pub records: Vec<RiskRecord>,
    /// Slope of `ln(sup risk)` against `ln n`.
    pub fit_log_n: Option<RateFit>,
    /// Slope of `ln(sup risk)` against `ln(ln n / n)`.
    pub fit_log_ln_n_over_n: Option<RateFit>,
    pub runtime_secs: f64,
}

impl RiskReport {
    pub fn ns(&self) -> Vec<usize> {
        self.records.iter().map(|r| r.n).collect()
    }

    pub fn sup_risks(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.sup_risk).collect()
    }
}

/// Sym-diff error of one replication.
fn replication_error(
    config: &ExperimentConfig,
    grid: Option<&[f64]>,
    n: usize,
    truth_index: usize,
    truth: &Segment,
    rep: usize,
) -> Result<f64> {
    let mut rng = SimRng::for_key(StreamKey::new(config.master_seed, n, truth_index, rep));
    let random_design;
    let design = match grid {
        Some(x) => x,
        None => {
            random_design = generate_design(&DesignSpec::new(config.design, n)?, &mut rng);
            &random_design
        }
    };
    let sample = simulate(design, truth, &config.noise, &mut rng)?;
    let est = config.estimator.apply(&sample)?;
    Ok(sym_diff_measure(&est.segment, truth))
}

/// Errors of every replication for one `(n, truth)` cell, in replication order.
pub(crate) fn cell_errors(
    config: &ExperimentConfig,
    n: usize,
    truth_index: usize,
    truth: &Segment,
) -> Result<Vec<f64>> {
    let grid = (config.design == DesignKind::Dd).then(|| regular_grid(n));
    (0..config.replications)
        .into_par_iter()
        .map(|rep| replication_error(config, grid.as_deref(), n, truth_index, truth, rep))
        .collect()
}

/// Runs every `(n, truth)` cell and fits the rate of the supremum.
pub fn monte_carlo_risk(config: &ExperimentConfig) -> Result<RiskReport> {
    config.validate()?;
    let started = Instant::now();
    let mut records = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let mut truths = Vec::with_capacity(config.truth_grid.len());
        for (truth_index, spec) in config.truth_grid.iter().enumerate() {
            let segment = spec.resolve(n)?;
            let errors = cell_errors(config, n, truth_index, &segment)?;
            let (mean, se) = mean_and_se(&errors);
            truths.push(TruthRisk { truth_index, segment, mean, se });
        }
        // first maximiser on ties
        let worst = truths
            .iter()
            .fold(&truths[0], |best, t| if t.mean > best.mean { t } else { best });
        records.push(RiskRecord {
            n,
            sup_risk: worst.mean,
            sup_se: worst.se,
            sup_truth_index: worst.truth_index,
            truths,
        });
    }
    let ns: Vec<f64> = records.iter().map(|r| r.n as f64).collect();
    let sup: Vec<f64> = records.iter().map(|r| r.sup_risk).collect();
    let rate: Vec<f64> = ns.iter().map(|&n| n.ln() / n).collect();
    Ok(RiskReport {
        config: config.clone(),
        fit_log_n: fit_log_log(&ns, &sup),
        fit_log_ln_n_over_n: fit_log_log(&rate, &sup),
        records,
        runtime_secs: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn changepoint_config(noise: NoiseSpec) -> ExperimentConfig {
        ExperimentConfig {
            design: DesignKind::Dd,
            n_grid: vec![10, 100, 1000],
            noise,
            estimator: EstimatorKind::LseChangepoint,
            class: SetClass::Anchored,
            truth_grid: vec![TruthSpec::fixed(0.0, 0.5)],
            replications: 3,
            master_seed: 1,
        }
    }

    #[test]
    fn noiseless_changepoint_within_grid_resolution() {
        let report = monte_carlo_risk(&changepoint_config(NoiseSpec::noiseless())).unwrap();
        for r in &report.records {
            assert!(r.sup_risk <= 1.0 / r.n as f64 + 1e-15);
            assert_eq!(r.truths[0].se, 0.0);
        }
    }

    #[test]
    fn sup_dominates_every_truth_and_grows_with_grid() {
        let mut cfg = ExperimentConfig {
            design: DesignKind::Rd,
            n_grid: vec![50, 100],
            noise: NoiseSpec::gaussian(0.5).unwrap(),
            estimator: EstimatorKind::LseSegment,
            class: SetClass::All,
            truth_grid: vec![TruthSpec::fixed(0.2, 0.6), TruthSpec::Empty],
            replications: 40,
            master_seed: 3,
        };
        let small = monte_carlo_risk(&cfg).unwrap();
        for r in &small.records {
            assert!(r.truths.iter().all(|t| t.mean <= r.sup_risk && t.se >= 0.0));
        }
        cfg.truth_grid.push(TruthSpec::fixed(0.45, 0.5));
        let large = monte_carlo_risk(&cfg).unwrap();
        for (s, l) in small.records.iter().zip(&large.records) {
            assert!(l.sup_risk >= s.sup_risk);
            // shared truths reuse their streams
            assert_eq!(s.truths[0], l.truths[0]);
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let cfg = ExperimentConfig {
            replications: 64,
            noise: NoiseSpec::gaussian(0.5).unwrap(),
            ..changepoint_config(NoiseSpec::noiseless())
        };
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| monte_carlo_risk(&cfg).unwrap())
        };
        let (a, b) = (run(1), run(4));
        assert_eq!(a.records, b.records);
        assert_eq!(a.fit_log_n, b.fit_log_n);
    }

    #[test]
    fn configuration_errors() {
        let base = changepoint_config(NoiseSpec::noiseless());
        let mismatch = ExperimentConfig { estimator: EstimatorKind::LseSegment, ..base.clone() };
        assert!(matches!(monte_carlo_risk(&mismatch), Err(Error::Config(_))));
        let unsorted = ExperimentConfig { n_grid: vec![100, 10], ..base.clone() };
        assert!(unsorted.validate().is_err());
        let outside = ExperimentConfig { truth_grid: vec![TruthSpec::fixed(0.1, 0.5)], ..base.clone() };
        assert!(outside.validate().is_err());
        let zero = ExperimentConfig { replications: 0, ..base.clone() };
        assert!(zero.validate().is_err());
        let small_mu = ExperimentConfig {
            estimator: EstimatorKind::MinLength { mu: 0.3 },
            class: SetClass::MinLength { mu: 0.3 },
            truth_grid: vec![TruthSpec::fixed(0.1, 0.2)],
            ..base
        };
        assert!(small_mu.validate().is_err());
    }
}
