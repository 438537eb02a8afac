use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A uniformly spaced, strictly increasing grid of radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RGrid {
    values: Vec<f64>,
    step: f64,
}

impl RGrid {
    /// `start, start + step, ..., start + (count - 1) * step`.
    pub fn uniform(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(start >= 0.0 && start.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid start must be >= 0, got {start}"
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid step must be > 0, got {step}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidParameter("grid needs at least one radius".into()));
        }
        // i / (1 / step) keeps decimal steps such as 0.1 exact at every node.
        let inv = 1.0 / step;
        let values = if (inv - inv.round()).abs() < 1e-9 {
            (0..count).map(|i| start + i as f64 / inv.round()).collect()
        } else {
            (0..count).map(|i| start + i as f64 * step).collect()
        };
        Ok(Self { values, step })
    }

    /// `{0, step, 2 step, ...}` up to and including `r_max` (within rounding).
    pub fn up_to(r_max: f64, step: f64) -> Result<Self> {
        if !(r_max >= 0.0 && r_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "r_max must be >= 0, got {r_max}"
            )));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid step must be > 0, got {step}"
            )));
        }
        let count = (r_max / step + 1e-9).floor() as usize + 1;
        Self::uniform(0.0, step, count)
    }

    /// The study grid `D_R = {0.1 x : x = 0, 1, ..., 10 R}`.
    pub fn study(r_max: f64) -> Result<Self> {
        Self::up_to(r_max, 0.1)
    }

    /// Builds a grid from explicit values, checking spacing.
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("grid needs at least one radius".into()));
        }
        if values[0] < 0.0 || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "grid radii must be finite and >= 0".into(),
            ));
        }
        let step = if values.len() > 1 {
            values[1] - values[0]
        } else {
            1.0
        };
        for w in values.windows(2) {
            let s = w[1] - w[0];
            if s <= 0.0 || (s - step).abs() > 1e-9 * step.max(1.0) {
                return Err(Error::InvalidParameter(
                    "grid radii must be strictly increasing and uniformly spaced".into(),
                ));
            }
        }
        Ok(Self { values, step })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("grid is never empty")
    }

    /// Number of leading grid points with `r <= bound` (with a small
    /// tolerance for decimal grids).
    pub fn count_up_to(&self, bound: f64) -> usize {
        let tol = 1e-9 * self.step;
        self.values.partition_point(|&r| r <= bound + tol)
    }

    /// The prefix of the grid lying in `[0, bound]`.
    pub fn restricted(&self, bound: f64) -> Result<Self> {
        let k = self.count_up_to(bound);
        if k == 0 {
            return Err(Error::GridMismatch(format!("no grid point lies in [0, {bound}]")));
        }
        Ok(Self {
            values: self.values[..k].to_vec(),
            step: self.step,
        })
    }

    /// Whether two grids coincide pointwise to rounding.
    pub fn matches(&self, other: &RGrid) -> bool {
        self.len() == other.len()
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| (a - b).abs() <= 1e-9 * self.step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn study_grid() {
        let g = RGrid::study(1.0).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g.values()[3], 0.3);
        assert_eq!(g.max(), 1.0);
        let g5 = RGrid::study(5.0).unwrap();
        assert_eq!(g5.len(), 51);
        assert_eq!(g5.restricted(2.0).unwrap().len(), 21);
        assert!(g5.restricted(-1.0).is_err());
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(RGrid::uniform(-1.0, 0.1, 3).is_err());
        assert!(RGrid::uniform(0.0, 0.0, 3).is_err());
        assert!(RGrid::from_values(vec![0.0, 0.2, 0.3]).is_err());
        assert!(RGrid::from_values(vec![0.5, 0.4]).is_err());
        assert!(RGrid::from_values(vec![0.0, 0.5, 1.0]).is_ok());
    }
}
