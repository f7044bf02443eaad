// SPDX-License-Identifier: MIT OR Apache-2.0

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimate::{estimate_with_min_length, lse_changepoint, lse_segment, EstimateResult};
use crate::model::{Sample, Segment};

/// Sequence `factor · n^n_power · (ln n)^log_power`.
///
/// In config documents a bare number is a constant schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScheduleRepr")]
pub struct Schedule {
    pub factor: f64,
    pub n_power: f64,
    pub log_power: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ScheduleRepr {
    Constant(f64),
    Rule {
        factor: Option<f64>,
        #[serde(default)]
        n_power: f64,
        #[serde(default)]
        log_power: f64,
    },
}

impl TryFrom<ScheduleRepr> for Schedule {
    type Error = Error;

    fn try_from(r: ScheduleRepr) -> Result<Self> {
        let s = match r {
            ScheduleRepr::Constant(v) => Schedule::constant(v),
            ScheduleRepr::Rule {
                factor,
                n_power,
                log_power,
            } => Schedule {
                factor: factor.unwrap_or(1.0),
                n_power,
                log_power,
            },
        };
        if !(s.factor.is_finite() && s.factor > 0.0 && s.n_power.is_finite() && s.log_power.is_finite()) {
            return Err(Error::param(format!("schedule must have a positive finite factor, got {s:?}")));
        }
        Ok(s)
    }
}

impl Schedule {
    pub fn constant(value: f64) -> Self {
        Schedule {
            factor: value,
            n_power: 0.0,
            log_power: 0.0,
        }
    }

    pub fn new(factor: f64, n_power: f64, log_power: f64) -> Self {
        Schedule {
            factor,
            n_power,
            log_power,
        }
    }

    pub fn at(&self, n: usize) -> f64 {
        let nf = n as f64;
        let mut v = self.factor;
        if self.n_power != 0.0 {
            v *= nf.powf(self.n_power);
        }
        if self.log_power != 0.0 {
            v *= nf.ln().powf(self.log_power);
        }
        v
    }
}

/// One truth of the grid approximating a class supremum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TruthSpec {
    Empty,
    Fixed { a: f64, b: f64 },
    /// Segment of length `length(n)` placed at relative `position ∈ [0, 1]`:
    /// `a = position · (1 - L)`, so 0 anchors at the left edge, 1 at the right.
    Scaled { position: f64, length: Schedule },
}

impl TruthSpec {
    pub fn fixed(a: f64, b: f64) -> Self {
        TruthSpec::Fixed { a, b }
    }

    pub fn resolve(&self, n: usize) -> Result<Segment> {
        match *self {
            TruthSpec::Empty => Ok(Segment::EMPTY),
            TruthSpec::Fixed { a, b } => Segment::new(a, b),
            TruthSpec::Scaled { position, length } => {
                if !(0.0..=1.0).contains(&position) {
                    return Err(Error::param(format!("truth position must lie in [0, 1], got {position}")));
                }
                let len = length.at(n).clamp(0.0, 1.0);
                let a = position * (1.0 - len);
                Segment::new(a, (a + len).min(1.0))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SetClass {
    /// All segments.
    #[serde(rename = "S")]
    All,
    /// Segments anchored at 0.
    #[serde(rename = "S0")]
    Anchored,
    /// Segments of length at least `mu`.
    #[serde(rename = "S_mu")]
    MinLength { mu: f64 },
}

impl SetClass {
    pub fn contains(&self, g: &Segment) -> bool {
        match *self {
            SetClass::All => true,
            SetClass::Anchored => g.a().is_none_or(|a| a == 0.0),
            SetClass::MinLength { mu } => g.measure() >= mu * (1.0 - 1e-12),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SetClass::All => "S".into(),
            SetClass::Anchored => "S0".into(),
            SetClass::MinLength { mu } => format!("S_mu({mu})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EstimatorKind {
    LseSegment,
    LseChangepoint,
    MinLength { mu: f64 },
}

impl EstimatorKind {
    pub fn apply(&self, sample: &Sample) -> Result<EstimateResult> {
        match *self {
            EstimatorKind::LseSegment => Ok(lse_segment(sample)),
            EstimatorKind::LseChangepoint => Ok(lse_changepoint(sample)),
            EstimatorKind::MinLength { mu } => estimate_with_min_length(sample, mu),
        }
    }

    /// The class this estimator is built for.
    pub fn class(&self) -> SetClass {
        match *self {
            EstimatorKind::LseSegment => SetClass::All,
            EstimatorKind::LseChangepoint => SetClass::Anchored,
            EstimatorKind::MinLength { mu } => SetClass::MinLength { mu },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            EstimatorKind::LseSegment => "lse_segment",
            EstimatorKind::LseChangepoint => "lse_changepoint",
            EstimatorKind::MinLength { .. } => "min_length",
        }
    }

    pub(crate) fn check_against(&self, class: &SetClass) -> Result<()> {
        if self.class() != *class {
            return Err(Error::config(format!(
                "estimator `{}` targets class {} but the experiment declares class {}",
                self.label(),
                self.class().label(),
                class.label()
            )));
        }
        if let EstimatorKind::MinLength { mu } = self {
            if !(*mu > 0.0 && *mu < 1.0) {
                return Err(Error::config(format!("mu must lie in (0, 1), got {mu}")));
            }
        }
        Ok(())
    }

    /// Smallest sample size the estimator accepts.
    pub(crate) fn min_n(&self) -> usize {
        match self {
            EstimatorKind::MinLength { .. } => 4,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestKind {
    /// Anchored count test; `c` defaults to the centre of the admissible interval.
    Anchored {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
    Scan,
}

impl TestKind {
    pub fn class(&self) -> SetClass {
        match self {
            TestKind::Anchored { .. } => SetClass::Anchored,
            TestKind::Scan => SetClass::All,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TestKind::Anchored { .. } => "anchored",
            TestKind::Scan => "scan",
        }
    }
}

/// Alternatives `|G| = factor · h` at the given relative positions
/// (see [`TruthSpec::Scaled`]).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternativeGrid {
    pub positions: Vec<f64>,
    #[serde(default = "unit_factors")]
    pub length_factors: Vec<f64>,
}

fn unit_factors() -> Vec<f64> {
    vec![1.0]
}

impl AlternativeGrid {
    pub fn translates(count: usize) -> Self {
        let positions = if count <= 1 {
            vec![0.0]
        } else {
            (0..count).map(|i| i as f64 / (count - 1) as f64).collect()
        };
        AlternativeGrid {
            positions,
            length_factors: unit_factors(),
        }
    }

    pub fn anchored() -> Self {
        AlternativeGrid {
            positions: vec![0.0],
            length_factors: unit_factors(),
        }
    }

    /// Alternatives at window length `h`, checked to have measure at least `h`.
    pub fn resolve(&self, n: usize, h: Schedule) -> Result<Vec<Segment>> {
        let hn = h.at(n);
        let mut out = Vec::with_capacity(self.positions.len() * self.length_factors.len());
        for &factor in &self.length_factors {
            for &position in &self.positions {
                let len = Schedule::new(h.factor * factor, h.n_power, h.log_power);
                let g = TruthSpec::Scaled { position, length: len }.resolve(n)?;
                if g.measure() < hn * (1.0 - 1e-9) {
                    return Err(Error::config(format!(
                        "alternative at position {position} with factor {factor} has measure {} < h = {hn} at n = {n}",
                        g.measure()
                    )));
                }
                out.push(g);
            }
        }
        if out.is_empty() {
            return Err(Error::config("the alternative grid is empty"));
        }
        Ok(out)
    }
}
