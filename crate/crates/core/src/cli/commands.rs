// SPDX-License-Identifier: MIT OR Apache-2.0

//! Subcommand configs and their result tables.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::output::{Cell, Table};
use crate::detect::{scan_statistic, test_anchored, test_scan};
use crate::error::{Error, Result};
use crate::estimate::{EstimateResult, Fallback};
use crate::experiments::{
    monte_carlo_risk, run_oracle_check, separation_curve, tail_curve, EstimatorKind,
    ExperimentConfig, OracleCheckConfig, SeparationConfig, TailConfig, TestKind, TruthSpec,
};
use crate::model::{
    generate_design, simulate, sym_diff_measure, DesignKind, DesignSpec, NoiseSpec, Sample,
    Segment, SimRng, StreamKey,
};
use crate::theory::{grid_points_in_sym_diff, hellinger_affinity};

/// Outcome of one subcommand: tables to persist and the stdout summary.
pub struct Outcome {
    pub tables: Vec<Table>,
    pub summary: String,
    /// Set when a built-in check failed; maps to a runtime-error exit.
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(tables: Vec<Table>, summary: String) -> Self {
        Outcome { tables, summary, failure: None }
    }
}

/// Configs carrying a master seed that `--seed` may override.
pub trait Seeded {
    fn seed(&self) -> u64;
    fn set_seed(&mut self, seed: u64);
}

macro_rules! seeded {
    ($($t:ty),*) => {$(
        impl Seeded for $t {
            fn seed(&self) -> u64 { self.master_seed }
            fn set_seed(&mut self, seed: u64) { self.master_seed = seed; }
        }
    )*};
}

seeded!(SimulateConfig, DetectConfig, EstimateConfig, ExperimentConfig, SeparationConfig, TailConfig, OracleCheckConfig);

fn segment_cells(g: &Segment) -> [Cell; 3] {
    [g.is_empty().into(), g.a().into(), g.b().into()]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub design: DesignKind,
    pub n: usize,
    pub truth: TruthSpec,
    pub noise: NoiseSpec,
    #[serde(default)]
    pub master_seed: u64,
}

impl SimulateConfig {
    fn draw(&self) -> Result<(Sample, Segment)> {
        let spec = DesignSpec::new(self.design, self.n)?;
        let truth = self.truth.resolve(self.n)?;
        let mut rng = SimRng::for_key(StreamKey::new(self.master_seed, self.n, 0, 0));
        let x = generate_design(&spec, &mut rng);
        Ok((simulate(&x, &truth, &self.noise, &mut rng)?, truth))
    }
}

pub fn run_simulate(cfg: &SimulateConfig) -> Result<Outcome> {
    let (sample, truth) = cfg.draw()?;
    let mut t = Table::new("sample", &["i", "x", "y", "in_truth"]);
    for (i, (&x, &y)) in sample.x().iter().zip(sample.y()).enumerate() {
        t.push(vec![(i + 1).into(), x.into(), y.into(), truth.contains(x).into()]);
    }
    let summary = format!("simulate: n = {}, truth {truth}, {} points inside", sample.len(), sample.count_in(&truth));
    Ok(Outcome::ok(vec![t], summary))
}

/// Where detect and estimate get their data.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SampleSource {
    /// CSV with `x` and `y` columns; `#` lines are skipped. Relative paths
    /// resolve against the config file's directory.
    File { path: PathBuf },
    Simulated { design: DesignKind, n: usize, truth: TruthSpec, noise: NoiseSpec },
}

impl SampleSource {
    /// Noise of a simulated source; file samples are treated as symmetric.
    fn noise(&self) -> NoiseSpec {
        match self {
            SampleSource::Simulated { noise, .. } => *noise,
            SampleSource::File { .. } => NoiseSpec::noiseless(),
        }
    }

    /// The sample and, when simulated, its truth.
    fn load(&self, base: &Path, seed: u64) -> Result<(Sample, Option<Segment>)> {
        match self {
            SampleSource::File { path } => Ok((read_sample(&base.join(path))?, None)),
            SampleSource::Simulated { design, n, truth, noise } => {
                let cfg = SimulateConfig { design: *design, n: *n, truth: *truth, noise: *noise, master_seed: seed };
                let (s, g) = cfg.draw()?;
                Ok((s, Some(g)))
            }
        }
    }
}

pub fn read_sample(path: &Path) -> Result<Sample> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::config(format!("cannot read sample {}: {e}", path.display())))?;
    let headers = reader.headers()?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::config(format!("{}: missing column `{name}`", path.display())))
    };
    let (xi, yi) = (column("x")?, column("y")?);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        let field = |i: usize| -> Result<f64> {
            let raw = record.get(i).unwrap_or("");
            raw.parse().map_err(|_| {
                let line = record.position().map_or(row + 2, |p| p.line() as usize);
                Error::InvalidSample(format!("{}:{line}: cannot parse `{raw}` as a number", path.display()))
            })
        };
        x.push(field(xi)?);
        y.push(field(yi)?);
    }
    Sample::new(x, y)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectConfig {
    pub data: SampleSource,
    pub test: TestKind,
    pub h: f64,
    #[serde(default)]
    pub master_seed: u64,
}

pub fn run_detect(cfg: &DetectConfig, base: &Path) -> Result<Outcome> {
    let (sample, _) = cfg.data.load(base, cfg.master_seed)?;
    let (result, window) = match cfg.test {
        TestKind::Anchored { c } => {
            let c = match c {
                Some(c) => c,
                None => cfg.data.noise().default_anchored_fraction()?,
            };
            (test_anchored(&sample, cfg.h, c)?, None)
        }
        TestKind::Scan => (test_scan(&sample, cfg.h)?, scan_statistic(&sample, cfg.h)?.window()),
    };
    let mut t = Table::new(
        "detect",
        &["test", "n", "h", "reject", "feasible", "statistic", "threshold", "n_used", "window_k", "window_l"],
    );
    t.push(vec![
        cfg.test.label().into(),
        sample.len().into(),
        cfg.h.into(),
        result.reject.into(),
        result.is_feasible().into(),
        result.statistic.into(),
        result.threshold.into(),
        result.n_used.into(),
        window.map(|w| w.0).into(),
        window.map(|w| w.1).into(),
    ]);
    let stat = result.statistic.map_or("none (no feasible window)".to_string(), |s| s.to_string());
    let summary = format!("detect: {} test, reject = {}, statistic = {stat}", cfg.test.label(), result.reject);
    Ok(Outcome::ok(vec![t], summary))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub data: SampleSource,
    pub estimator: EstimatorKind,
    #[serde(default)]
    pub master_seed: u64,
}

fn fallback_label(f: Fallback) -> &'static str {
    match f {
        Fallback::EmptyPilot => "empty_pilot",
        Fallback::EmptySide => "empty_side",
    }
}

pub fn run_estimate(cfg: &EstimateConfig, base: &Path) -> Result<Outcome> {
    let (sample, truth) = cfg.data.load(base, cfg.master_seed)?;
    let est: EstimateResult = cfg.estimator.apply(&sample)?;
    let mut t = Table::new(
        "estimate",
        &[
            "estimator", "n", "empty", "a", "b", "measure", "criterion", "first_index", "last_index",
            "pilot_empty", "pilot_a", "pilot_b", "midpoint", "pilot_size", "left_size", "right_size",
            "fallback", "truth_empty", "truth_a", "truth_b", "sym_diff",
        ],
    );
    let mut row: Vec<Cell> = vec![cfg.estimator.label().into(), sample.len().into()];
    row.extend(segment_cells(&est.segment));
    row.extend([
        est.segment.measure().into(),
        est.criterion.into(),
        est.index_window.map(|w| w.0).into(),
        est.index_window.map(|w| w.1).into(),
    ]);
    match &est.stage_info {
        Some(s) => {
            row.extend(segment_cells(&s.pilot));
            row.extend([
                s.midpoint.into(),
                s.pilot_size.into(),
                s.left_size.into(),
                s.right_size.into(),
                s.fallback.map(fallback_label).into(),
            ]);
        }
        None => row.extend(std::iter::repeat_n(Cell::Missing, 8)),
    }
    match &truth {
        Some(g) => {
            row.extend(segment_cells(g));
            row.push(sym_diff_measure(g, &est.segment).into());
        }
        None => row.extend(std::iter::repeat_n(Cell::Missing, 4)),
    }
    t.push(row);
    let mut summary = format!("estimate: {} gives {}", cfg.estimator.label(), est.segment);
    if let Some(g) = truth {
        summary.push_str(&format!(", sym-diff {} against truth {g}", sym_diff_measure(&g, &est.segment)));
    }
    Ok(Outcome::ok(vec![t], summary))
}

pub fn run_risk(cfg: &ExperimentConfig) -> Result<(Outcome, f64)> {
    let report = monte_carlo_risk(cfg)?;
    let mut risk = Table::new("risk", &["n", "sup_risk", "sup_se", "sup_truth_index", "n_sup_risk", "sup_risk_over_rate"]);
    let mut truths = Table::new("risk_truths", &["n", "truth_index", "empty", "a", "b", "mean", "se"]);
    for r in &report.records {
        let n = r.n as f64;
        risk.push(vec![
            r.n.into(),
            r.sup_risk.into(),
            r.sup_se.into(),
            r.sup_truth_index.into(),
            (n * r.sup_risk).into(),
            (r.sup_risk * n / n.ln()).into(),
        ]);
        for t in &r.truths {
            let mut row: Vec<Cell> = vec![r.n.into(), t.truth_index.into()];
            row.extend(segment_cells(&t.segment));
            row.extend([t.mean.into(), t.se.into()]);
            truths.push(row);
        }
    }
    let mut fit = Table::new(
        "risk_fit",
        &["regressor", "slope", "intercept", "r_squared", "slope_se", "ci_low", "ci_high", "points"],
    );
    for (name, f) in [("ln_n", &report.fit_log_n), ("ln_rate", &report.fit_log_ln_n_over_n)] {
        let mut row: Vec<Cell> = vec![name.into()];
        match f {
            Some(f) => row.extend([
                f.slope.into(),
                f.intercept.into(),
                f.r_squared.into(),
                f.slope_se.into(),
                f.ci_low.into(),
                f.ci_high.into(),
                f.points.into(),
            ]),
            None => row.extend(std::iter::repeat_n(Cell::Missing, 7)),
        }
        fit.push(row);
    }
    let slope = report.fit_log_n.as_ref().map_or("n/a".to_string(), |f| format!("{:.4}", f.slope));
    let summary = format!(
        "risk: {} n values, {} truths, slope of ln(sup risk) on ln n = {slope}",
        report.records.len(),
        cfg.truth_grid.len()
    );
    Ok((Outcome::ok(vec![risk, truths, fit], summary), report.runtime_secs))
}

pub fn run_separation(cfg: &SeparationConfig) -> Result<(Outcome, f64)> {
    let report = separation_curve(cfg)?;
    let mut main = Table::new(
        "separation",
        &[
            "n", "h", "type_i", "type_i_se", "type_ii_sup", "type_ii_se", "worst_a", "worst_b", "gamma",
            "infeasible",
        ],
    );
    let mut alts = Table::new("separation_alternatives", &["n", "alternative_index", "a", "b", "type_ii"]);
    for r in &report.records {
        main.push(vec![
            r.n.into(),
            r.h.into(),
            r.type_i.into(),
            r.type_i_se.into(),
            r.type_ii_sup.into(),
            r.type_ii_se.into(),
            r.worst_alternative.a().into(),
            r.worst_alternative.b().into(),
            r.gamma.into(),
            r.infeasible.into(),
        ]);
        for (j, g) in cfg.alternatives.resolve(r.n, cfg.h)?.iter().enumerate() {
            alts.push(vec![r.n.into(), j.into(), g.a().into(), g.b().into(), r.type_ii[j].into()]);
        }
    }
    let last = report.records.last().expect("n_grid is non-empty");
    let summary = format!(
        "separation: {} test, {} n values, gamma = {:.4} at n = {}",
        cfg.test.label(),
        report.records.len(),
        last.gamma,
        last.n
    );
    Ok((Outcome::ok(vec![main, alts], summary), report.runtime_secs))
}

pub fn run_tail(cfg: &TailConfig) -> Result<(Outcome, f64)> {
    let report = tail_curve(cfg)?;
    let mut t = Table::new("tail", &["x", "exceedance", "se", "envelope"]);
    let mut violations = 0;
    for r in &report.records {
        if r.envelope.is_some_and(|e| r.exceedance > e + 3.0 * r.se) {
            violations += 1;
        }
        t.push(vec![r.x.into(), r.exceedance.into(), r.se.into(), r.envelope.into()]);
    }
    let summary = format!(
        "tail: n = {}, truth {}, {} x values, {violations} above envelope + 3 SE",
        cfg.n,
        report.truth,
        report.records.len()
    );
    Ok((Outcome::ok(vec![t], summary), report.runtime_secs))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffinityConfig {
    pub design: DesignKind,
    pub n: usize,
    pub sigma: f64,
    pub g1: Segment,
    pub g2: Segment,
}

pub fn run_affinity(cfg: &AffinityConfig) -> Result<Outcome> {
    let spec = DesignSpec::new(cfg.design, cfg.n)?;
    let rho = hellinger_affinity(&cfg.g1, &cfg.g2, &spec, cfg.sigma)?;
    let points = (cfg.design == DesignKind::Dd).then(|| grid_points_in_sym_diff(&cfg.g1, &cfg.g2, cfg.n));
    let mut t = Table::new("affinity", &["design", "n", "sigma", "sym_diff", "grid_points", "affinity"]);
    t.push(vec![
        cfg.design.label().into(),
        cfg.n.into(),
        cfg.sigma.into(),
        sym_diff_measure(&cfg.g1, &cfg.g2).into(),
        points.into(),
        rho.into(),
    ]);
    Ok(Outcome::ok(vec![t], format!("{rho:.5}")))
}

pub fn run_oracle(cfg: &OracleCheckConfig) -> Result<Outcome> {
    let report = run_oracle_check(cfg)?;
    let mut t = Table::new(
        "oracle_check",
        &["samples", "lse_mismatches", "scan_mismatches", "scan_infeasible", "passed"],
    );
    t.push(vec![
        report.samples.into(),
        report.lse_mismatches.into(),
        report.scan_mismatches.into(),
        report.scan_infeasible.into(),
        report.passed().into(),
    ]);
    let summary = format!(
        "oracle-check: {} samples, {} segment mismatches, {} scan mismatches",
        report.samples, report.lse_mismatches, report.scan_mismatches
    );
    let failure = (!report.passed()).then(|| format!("oracle mismatch on samples {:?}", report.first_mismatches));
    Ok(Outcome { tables: vec![t], summary, failure })
}
