// SPDX-License-Identifier: MIT OR Apache-2.0

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseFamily {
    /// No noise: responses are the exact indicator.
    #[serde(alias = "noiseless")]
    None,
    /// `N(0, sigma^2)`.
    Gaussian,
    /// Uniform on `[-s, s]` with `s = sqrt(3) * sigma`.
    Uniform,
    /// `±sigma` with probability 1/2 each.
    Rademacher,
}

/// Noise law. `sigma` is the subgaussian constant: `E[e^{uξ}] ≤ e^{sigma^2 u^2 / 2}`
/// holds for every `u`; for the bounded families it is not the standard deviation
/// parameter of the textbook parametrisation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub family: NoiseFamily,
    #[serde(default)]
    pub sigma: f64,
}

impl NoiseSpec {
    pub fn new(family: NoiseFamily, sigma: f64) -> Result<Self> {
        let spec = NoiseSpec { family, sigma };
        spec.validate()?;
        Ok(spec)
    }

    pub fn noiseless() -> Self {
        NoiseSpec {
            family: NoiseFamily::None,
            sigma: 0.0,
        }
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        NoiseSpec::new(NoiseFamily::Gaussian, sigma)
    }

    pub fn validate(&self) -> Result<()> {
        if self.family != NoiseFamily::None && !(self.sigma.is_finite() && self.sigma > 0.0) {
            return Err(Error::param(format!(
                "noise sigma must be positive and finite, got {}",
                self.sigma
            )));
        }
        Ok(())
    }

    pub fn is_noiseless(&self) -> bool {
        self.family == NoiseFamily::None
    }

    /// Subgaussian constant, `None` when there is no noise.
    pub fn subgaussian_sigma(&self) -> Option<f64> {
        (!self.is_noiseless()).then_some(self.sigma)
    }

    /// Half-width of the support for the bounded families.
    fn half_width(&self) -> f64 {
        match self.family {
            NoiseFamily::Uniform => 3f64.sqrt() * self.sigma,
            _ => self.sigma,
        }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.family {
            NoiseFamily::None => 0.0,
            NoiseFamily::Gaussian => {
                let z: f64 = rng.sample(StandardNormal);
                self.sigma * z
            }
            NoiseFamily::Uniform => {
                let s = self.half_width();
                s * (2.0 * rng.random::<f64>() - 1.0)
            }
            NoiseFamily::Rademacher => {
                if rng.random::<bool>() {
                    self.sigma
                } else {
                    -self.sigma
                }
            }
        }
    }

    /// `P[ξ ≤ t]`.
    pub fn cdf(&self, t: f64) -> f64 {
        match self.family {
            NoiseFamily::None => {
                if t >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseFamily::Gaussian => 0.5 * erfc(-t / (self.sigma * std::f64::consts::SQRT_2)),
            NoiseFamily::Uniform => {
                let s = self.half_width();
                ((t + s) / (2.0 * s)).clamp(0.0, 1.0)
            }
            NoiseFamily::Rademacher => {
                if t < -self.sigma {
                    0.0
                } else if t < self.sigma {
                    0.5
                } else {
                    1.0
                }
            }
        }
    }

    /// Exact moment generating function `E[e^{uξ}]`.
    pub fn mgf(&self, u: f64) -> f64 {
        match self.family {
            NoiseFamily::None => 1.0,
            NoiseFamily::Gaussian => (0.5 * self.sigma * self.sigma * u * u).exp(),
            NoiseFamily::Uniform => {
                let su = self.half_width() * u;
                if su == 0.0 {
                    1.0
                } else {
                    su.sinh() / su
                }
            }
            NoiseFamily::Rademacher => (self.sigma * u).cosh(),
        }
    }

    /// Open interval `(P[ξ ≤ -1/2], P[ξ ≤ 1/2])` of admissible count fractions
    /// for the anchored test.
    pub fn anchored_fraction_interval(&self) -> (f64, f64) {
        (self.cdf(-0.5), self.cdf(0.5))
    }

    /// Centre of [`anchored_fraction_interval`](Self::anchored_fraction_interval).
    pub fn default_anchored_fraction(&self) -> Result<f64> {
        let (lo, hi) = self.anchored_fraction_interval();
        if lo >= hi {
            return Err(Error::param(format!(
                "noise {:?} with sigma {} leaves no admissible fraction: P[xi <= -1/2] = {lo} >= P[xi <= 1/2] = {hi}",
                self.family, self.sigma
            )));
        }
        Ok(0.5 * (lo + hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SimRng;

    #[test]
    fn sigma_must_be_positive() {
        assert!(NoiseSpec::gaussian(0.0).is_err());
        assert!(NoiseSpec::gaussian(-1.0).is_err());
        assert!(NoiseSpec::new(NoiseFamily::Uniform, f64::NAN).is_err());
        assert!(NoiseSpec::noiseless().validate().is_ok());
    }

    #[test]
    fn gaussian_default_fraction_is_one_half() {
        for sigma in [0.1, 0.25, 0.5, 1.0, 3.0] {
            let c = NoiseSpec::gaussian(sigma).unwrap().default_anchored_fraction().unwrap();
            assert!((c - 0.5).abs() < 1e-12);
        }
        let (lo, hi) = NoiseSpec::gaussian(0.25).unwrap().anchored_fraction_interval();
        // Φ(-2), Φ(2)
        assert!((lo - 0.022_750_131_948_179_2).abs() < 1e-10, "{lo}");
        assert!((hi - 0.977_249_868_051_820_8).abs() < 1e-10, "{hi}");
    }

    #[test]
    fn wide_rademacher_has_no_admissible_fraction() {
        let wide = NoiseSpec::new(NoiseFamily::Rademacher, 0.75).unwrap();
        assert!(wide.default_anchored_fraction().is_err());
        let narrow = NoiseSpec::new(NoiseFamily::Rademacher, 0.25).unwrap();
        assert_eq!(narrow.default_anchored_fraction().unwrap(), 0.5);
    }

    #[test]
    fn exact_mgf_within_subgaussian_bound() {
        for family in [NoiseFamily::Gaussian, NoiseFamily::Uniform, NoiseFamily::Rademacher] {
            for sigma in [0.25, 1.0, 2.0] {
                let spec = NoiseSpec::new(family, sigma).unwrap();
                for u in [-3.0, -1.0, -0.1, 0.1, 0.5, 1.0, 2.0, 5.0] {
                    let bound = (0.5 * sigma * sigma * u * u).exp();
                    assert!(spec.mgf(u) <= bound * (1.0 + 1e-12), "{family:?} {sigma} {u}");
                }
            }
        }
    }

    #[test]
    fn empirical_mgf_within_subgaussian_bound() {
        let draws = 200_000;
        for family in [NoiseFamily::Gaussian, NoiseFamily::Uniform, NoiseFamily::Rademacher] {
            let sigma = 0.5;
            let spec = NoiseSpec::new(family, sigma).unwrap();
            let mut rng = SimRng::new(5, family as u64);
            let xs: Vec<f64> = (0..draws).map(|_| spec.sample(&mut rng)).collect();
            for u in [-2.0, -1.0, 1.0, 2.0] {
                let vals: Vec<f64> = xs.iter().map(|x| (u * x).exp()).collect();
                let mean = vals.iter().sum::<f64>() / draws as f64;
                let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / draws as f64;
                let se = (var / draws as f64).sqrt();
                let bound = (0.5 * sigma * sigma * u * u).exp();
                assert!(mean <= bound + 4.0 * se, "{family:?} u={u}: {mean} > {bound}");
            }
        }
    }

    #[test]
    fn cdf_matches_empirical_frequency() {
        for family in [NoiseFamily::Gaussian, NoiseFamily::Uniform, NoiseFamily::Rademacher] {
            let spec = NoiseSpec::new(family, 0.4).unwrap();
            let mut rng = SimRng::new(9, 1);
            let draws = 100_000;
            let below = (0..draws).filter(|_| spec.sample(&mut rng) <= 0.3).count();
            let p = below as f64 / draws as f64;
            assert!((p - spec.cdf(0.3)).abs() < 0.01, "{family:?}");
        }
    }
}
