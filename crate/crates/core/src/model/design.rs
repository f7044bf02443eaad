// SPDX-License-Identifier: MIT OR Apache-2.0

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Deterministic regular grid or i.i.d. uniform design.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignKind {
    /// `X_i = i / n`.
    #[serde(alias = "DD")]
    Dd,
    /// `X_i` i.i.d. uniform on `[0, 1]`, stored sorted.
    #[serde(alias = "RD")]
    Rd,
}

impl DesignKind {
    pub fn label(self) -> &'static str {
        match self {
            DesignKind::Dd => "dd",
            DesignKind::Rd => "rd",
        }
    }
}

impl std::str::FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dd" => Ok(DesignKind::Dd),
            "rd" => Ok(DesignKind::Rd),
            other => Err(Error::param(format!("unknown design kind `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSpec {
    pub kind: DesignKind,
    pub n: usize,
}

impl DesignSpec {
    pub fn new(kind: DesignKind, n: usize) -> Result<Self> {
        let spec = DesignSpec { kind, n };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::param("design size n must be at least 1"));
        }
        Ok(())
    }
}

/// Regular grid `(1/n, 2/n, ..., 1)`.
pub fn regular_grid(n: usize) -> Vec<f64> {
    let nf = n as f64;
    (1..=n).map(|i| i as f64 / nf).collect()
}

/// Design points in ascending order. DD ignores `rng`.
pub fn generate_design<R: Rng + ?Sized>(spec: &DesignSpec, rng: &mut R) -> Vec<f64> {
    match spec.kind {
        DesignKind::Dd => regular_grid(spec.n),
        DesignKind::Rd => {
            let mut x: Vec<f64> = (0..spec.n).map(|_| rng.random::<f64>()).collect();
            x.sort_unstable_by(f64::total_cmp);
            x
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SimRng;

    #[test]
    fn regular_design_is_the_grid() {
        let mut rng = SimRng::new(0, 0);
        let spec = DesignSpec::new(DesignKind::Dd, 4).unwrap();
        assert_eq!(generate_design(&spec, &mut rng), vec![0.25, 0.5, 0.75, 1.0]);
        let spec = DesignSpec::new(DesignKind::Dd, 1).unwrap();
        assert_eq!(generate_design(&spec, &mut rng), vec![1.0]);
    }

    #[test]
    fn random_design_sorted_in_unit_interval_and_reproducible() {
        let spec = DesignSpec::new(DesignKind::Rd, 100).unwrap();
        let x = generate_design(&spec, &mut SimRng::new(42, 0));
        assert_eq!(x.len(), 100);
        assert!(x.windows(2).all(|w| w[0] <= w[1]));
        assert!(x.iter().all(|&v| (0.0..=1.0).contains(&v)));
        assert_eq!(x, generate_design(&spec, &mut SimRng::new(42, 0)));
        assert_ne!(x, generate_design(&spec, &mut SimRng::new(43, 0)));
    }

    #[test]
    fn zero_size_rejected() {
        assert!(DesignSpec::new(DesignKind::Dd, 0).is_err());
    }

    #[test]
    fn kind_parses_both_spellings() {
        let k: DesignKind = serde_json::from_str("\"DD\"").unwrap();
        assert_eq!(k, DesignKind::Dd);
        let k: DesignKind = serde_json::from_str("\"rd\"").unwrap();
        assert_eq!(k, DesignKind::Rd);
        assert_eq!("RD".parse::<DesignKind>().unwrap(), DesignKind::Rd);
    }
}
