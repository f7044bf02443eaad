// SPDX-License-Identifier: MIT OR Apache-2.0

use rand::Rng;

use super::{NoiseSpec, Segment};
use crate::error::{Error, Result};

/// Design points in ascending order together with their responses.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl Sample {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidSample("a sample needs at least one point".into()));
        }
        if x.len() != y.len() {
            return Err(Error::InvalidSample(format!(
                "design has {} points but there are {} responses",
                x.len(),
                y.len()
            )));
        }
        if let Some(i) = x.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidSample(format!(
                "design point {} = {} lies outside [0, 1]",
                i + 1,
                x[i]
            )));
        }
        if let Some(i) = x.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidSample(format!(
                "design is not sorted at position {}",
                i + 2
            )));
        }
        if let Some(i) = y.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSample(format!("response {} is not finite", i + 1)));
        }
        Ok(Sample { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Points at the given zero-based positions, in the given order.
    ///
    /// The result need not be a valid [`Sample`] (the order may be reversed), so
    /// it is returned as raw columns.
    pub(crate) fn columns_at(&self, idx: &[usize]) -> (Vec<f64>, Vec<f64>) {
        idx.iter().map(|&i| (self.x[i], self.y[i])).unzip()
    }

    /// Least-squares criterion `Σ (2Y_i - 1) 1(X_i ∈ g)`.
    pub fn lse_criterion(&self, g: &Segment) -> f64 {
        self.x
            .iter()
            .zip(&self.y)
            .filter(|(x, _)| g.contains(**x))
            .map(|(_, y)| 2.0 * y - 1.0)
            .sum()
    }

    /// Number of design points inside `g`.
    pub fn count_in(&self, g: &Segment) -> usize {
        self.x.iter().filter(|x| g.contains(**x)).count()
    }
}

/// Responses `y_i = 1(x_i ∈ g) + ξ_i` on a sorted design.
pub fn simulate<R: Rng + ?Sized>(
    design: &[f64],
    g: &Segment,
    noise: &NoiseSpec,
    rng: &mut R,
) -> Result<Sample> {
    noise.validate()?;
    let y = design
        .iter()
        .map(|&x| {
            let signal = if g.contains(x) { 1.0 } else { 0.0 };
            signal + noise.sample(rng)
        })
        .collect();
    Sample::new(design.to_vec(), y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_design, regular_grid, DesignKind, DesignSpec, SimRng};

    #[test]
    fn noiseless_indicator() {
        let x = regular_grid(10);
        let g = Segment::new(0.3, 0.6).unwrap();
        let s = simulate(&x, &g, &NoiseSpec::noiseless(), &mut SimRng::new(0, 0)).unwrap();
        assert_eq!(s.y(), &[0., 0., 1., 1., 1., 1., 0., 0., 0., 0.]);

        let s = simulate(&x, &Segment::EMPTY, &NoiseSpec::noiseless(), &mut SimRng::new(0, 0))
            .unwrap();
        assert!(s.y().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn seeded_simulation_repeats() {
        let x = regular_grid(50);
        let g = Segment::new(0.0, 0.5).unwrap();
        let noise = NoiseSpec::gaussian(1.0).unwrap();
        let a = simulate(&x, &g, &noise, &mut SimRng::new(3, 1)).unwrap();
        let b = simulate(&x, &g, &noise, &mut SimRng::new(3, 1)).unwrap();
        assert_eq!(a, b);
        let c = simulate(&x, &g, &noise, &mut SimRng::new(3, 2)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn random_design_simulation() {
        let mut rng = SimRng::new(1, 1);
        let x = generate_design(&DesignSpec::new(DesignKind::Rd, 30).unwrap(), &mut rng);
        let s = simulate(&x, &Segment::EMPTY, &NoiseSpec::gaussian(0.1).unwrap(), &mut rng)
            .unwrap();
        assert_eq!(s.len(), 30);
    }

    #[test]
    fn invalid_samples_rejected() {
        assert!(Sample::new(vec![], vec![]).is_err());
        assert!(Sample::new(vec![0.1, 0.2], vec![1.0]).is_err());
        assert!(Sample::new(vec![0.2, 0.1], vec![1.0, 1.0]).is_err());
        assert!(Sample::new(vec![0.2, 1.2], vec![1.0, 1.0]).is_err());
        assert!(Sample::new(vec![0.2], vec![f64::NAN]).is_err());
    }

    #[test]
    fn criterion_counts_closed_membership() {
        let s = Sample::new(vec![0.25, 0.5, 0.75, 1.0], vec![1.0, 1.0, 0.0, 0.0]).unwrap();
        let g = Segment::new(0.25, 0.5).unwrap();
        assert_eq!(s.lse_criterion(&g), 2.0);
        assert_eq!(s.count_in(&g), 2);
        assert_eq!(s.lse_criterion(&Segment::EMPTY), 0.0);
    }
}
