// SPDX-License-Identifier: MIT OR Apache-2.0

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::risk::check_n_grid;
use super::selectors::{AlternativeGrid, Schedule, SetClass, TestKind};
use super::stats::pairwise_sum;
use crate::detect::{check_length, test_anchored, test_scan, TestResult};
use crate::error::{Error, Result};
use crate::model::{
    generate_design, regular_grid, simulate, DesignKind, DesignSpec, NoiseSpec, Sample, Segment,
    SimRng, StreamKey,
};

/// Test-error experiment: type-I error under the empty set plus the worst
/// type-II error over a grid of alternatives of measure at least `h(n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparationConfig {
    pub design: DesignKind,
    pub n_grid: Vec<usize>,
    pub noise: NoiseSpec,
    pub test: TestKind,
    pub h: Schedule,
    pub alternatives: AlternativeGrid,
    pub replications: usize,
    #[serde(default)]
    pub master_seed: u64,
}

impl SeparationConfig {
    pub fn validate(&self) -> Result<()> {
        check_n_grid(&self.n_grid, 1)?;
        self.noise.validate()?;
        if self.replications == 0 {
            return Err(Error::config("replications must be at least 1"));
        }
        let class = self.test.class();
        if let TestKind::Anchored { c } = self.test {
            match c {
                Some(c) if !(c > 0.0 && c < 1.0) => {
                    return Err(Error::config(format!("count fraction c must lie in (0, 1), got {c}")))
                }
                Some(_) => {}
                None => {
                    self.noise.default_anchored_fraction()?;
                }
            }
        }
        for &n in &self.n_grid {
            let h = self.h.at(n);
            check_length(h).map_err(|e| Error::config(format!("at n = {n}: {e}")))?;
            for g in self.alternatives.resolve(n, self.h)? {
                if !class.contains(&g) {
                    return Err(Error::config(format!(
                        "alternative {g} at n = {n} lies outside class {} of the {} test",
                        class.label(),
                        self.test.label()
                    )));
                }
            }
        }
        if class == SetClass::Anchored && self.alternatives.positions.iter().any(|&p| p != 0.0) {
            return Err(Error::config("the anchored test needs every alternative position to be 0"));
        }
        Ok(())
    }

    fn run_test(&self, sample: &Sample, h: f64) -> Result<TestResult> {
        match self.test {
            TestKind::Anchored { c } => {
                let c = match c {
                    Some(c) => c,
                    None => self.noise.default_anchored_fraction()?,
                };
                test_anchored(sample, h, c)
            }
            TestKind::Scan => test_scan(sample, h),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationRecord {
    pub n: usize,
    pub h: f64,
    pub type_i: f64,
    pub type_i_se: f64,
    /// Worst type-II error over the alternatives.
    pub type_ii_sup: f64,
    pub type_ii_se: f64,
    pub worst_alternative: Segment,
    /// Per-alternative type-II errors, in grid order.
    pub type_ii: Vec<f64>,
    pub gamma: f64,
    /// Replications, null and alternatives together, without a feasible window.
    pub infeasible: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeparationReport {
    pub config: SeparationConfig,
    pub records: Vec<SeparationRecord>,
    pub runtime_secs: f64,
}

impl SeparationReport {
    pub fn gammas(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.gamma).collect()
    }
}

fn binomial_se(p: f64, reps: usize) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

/// Rejection indicators and infeasible count for one truth; stream index `truth_index`.
fn cell(
    config: &SeparationConfig,
    grid: Option<&[f64]>,
    n: usize,
    h: f64,
    truth_index: usize,
    truth: &Segment,
) -> Result<(f64, usize)> {
    let outcomes: Vec<TestResult> = (0..config.replications)
        .into_par_iter()
        .map(|rep| {
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
            config.run_test(&sample, h)
        })
        .collect::<Result<_>>()?;
    let rejects: Vec<f64> = outcomes.iter().map(|t| if t.reject { 1.0 } else { 0.0 }).collect();
    let infeasible = outcomes.iter().filter(|t| !t.is_feasible()).count();
    Ok((pairwise_sum(&rejects) / config.replications as f64, infeasible))
}

/// Estimates `γ_n = P_∅[reject] + sup_G P_G[accept]` on each `n` of the grid.
/// The null uses truth index 0 and alternative `j` uses index `j + 1`.
pub fn separation_curve(config: &SeparationConfig) -> Result<SeparationReport> {
    config.validate()?;
    let started = Instant::now();
    let reps = config.replications;
    let mut records = Vec::with_capacity(config.n_grid.len());
    for &n in &config.n_grid {
        let h = config.h.at(n);
        let grid = (config.design == DesignKind::Dd).then(|| regular_grid(n));
        let (type_i, mut infeasible) = cell(config, grid.as_deref(), n, h, 0, &Segment::EMPTY)?;
        let alternatives = config.alternatives.resolve(n, config.h)?;
        let mut type_ii = Vec::with_capacity(alternatives.len());
        for (j, g) in alternatives.iter().enumerate() {
            let (power, inf) = cell(config, grid.as_deref(), n, h, j + 1, g)?;
            type_ii.push(1.0 - power);
            infeasible += inf;
        }
        let worst = (0..type_ii.len()).fold(0, |w, j| if type_ii[j] > type_ii[w] { j } else { w });
        records.push(SeparationRecord {
            n,
            h,
            type_i,
            type_i_se: binomial_se(type_i, reps),
            type_ii_sup: type_ii[worst],
            type_ii_se: binomial_se(type_ii[worst], reps),
            worst_alternative: alternatives[worst],
            gamma: type_i + type_ii[worst],
            type_ii,
            infeasible,
        });
    }
    Ok(SeparationReport {
        config: config.clone(),
        records,
        runtime_secs: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scan_config(noise: NoiseSpec) -> SeparationConfig {
        SeparationConfig {
            design: DesignKind::Dd,
            n_grid: vec![50, 200],
            noise,
            test: TestKind::Scan,
            h: Schedule::constant(0.1),
            alternatives: AlternativeGrid { positions: vec![0.0, 0.3, 0.5], length_factors: vec![1.0] },
            replications: 20,
            master_seed: 5,
        }
    }

    #[test]
    fn noiseless_tests_separate_perfectly() {
        let report = separation_curve(&scan_config(NoiseSpec::noiseless())).unwrap();
        for r in &report.records {
            assert_eq!(r.gamma, 0.0, "{r:?}");
        }
        let anchored = SeparationConfig {
            test: TestKind::Anchored { c: None },
            alternatives: AlternativeGrid::anchored(),
            ..scan_config(NoiseSpec::noiseless())
        };
        for r in &separation_curve(&anchored).unwrap().records {
            assert_eq!(r.gamma, 0.0);
        }
    }

    #[test]
    fn gamma_is_sum_of_components() {
        let cfg = SeparationConfig {
            h: Schedule::new(1.0, -1.0, 1.0),
            design: DesignKind::Rd,
            replications: 50,
            ..scan_config(NoiseSpec::gaussian(1.0).unwrap())
        };
        for r in &separation_curve(&cfg).unwrap().records {
            assert_eq!(r.gamma, r.type_i + r.type_ii_sup);
            assert!((0.0..=1.0).contains(&r.type_i) && (0.0..=1.0).contains(&r.type_ii_sup));
            assert!(r.type_ii.iter().all(|&t| t <= r.type_ii_sup));
        }
    }

    #[test]
    fn tiny_windows_always_reject() {
        // every single-point window is feasible, so the null rejects whenever some y_i ≥ 1/2
        let cfg = SeparationConfig {
            n_grid: vec![1000],
            h: Schedule::constant(1e-6),
            replications: 10,
            ..scan_config(NoiseSpec::gaussian(0.5).unwrap())
        };
        let r = &separation_curve(&cfg).unwrap().records[0];
        assert_eq!(r.type_i, 1.0);
    }

    #[test]
    fn configuration_errors() {
        let base = scan_config(NoiseSpec::noiseless());
        let off_anchor = SeparationConfig { test: TestKind::Anchored { c: None }, ..base.clone() };
        assert!(matches!(separation_curve(&off_anchor), Err(Error::Config(_))));
        let short = SeparationConfig {
            alternatives: AlternativeGrid { positions: vec![0.5], length_factors: vec![0.5] },
            ..base.clone()
        };
        assert!(short.validate().is_err());
        let long_h = SeparationConfig { h: Schedule::constant(2.0), ..base.clone() };
        assert!(long_h.validate().is_err());
        let bad_c = SeparationConfig {
            test: TestKind::Anchored { c: Some(1.5) },
            alternatives: AlternativeGrid::anchored(),
            ..base
        };
        assert!(bad_c.validate().is_err());
    }
}
