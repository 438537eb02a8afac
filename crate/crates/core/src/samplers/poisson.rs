use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{CubeWindow, PointPattern};
use crate::rng::RngSeed;
use crate::samplers::poisson_count;

/// `count` i.i.d. uniform points in the window, appended to `coords`.
pub fn uniform_points<R: Rng + ?Sized>(
    rng: &mut R,
    window: &CubeWindow,
    count: usize,
    coords: &mut Vec<f64>,
) {
    let (lo, side) = (-window.half_side(), window.side());
    coords.reserve(count * window.dim());
    for _ in 0..count * window.dim() {
        coords.push(lo + side * rng.random::<f64>());
    }
}

/// Homogeneous Poisson process of intensity `rho` on the window.
pub fn sample_poisson(window: &CubeWindow, rho: f64, seed: RngSeed) -> Result<PointPattern> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "intensity must be positive, got {rho}"
        )));
    }
    let mut rng = seed.rng();
    let count = poisson_count(&mut rng, rho * window.volume());
    let mut coords = Vec::new();
    uniform_points(&mut rng, window, count, &mut coords);
    PointPattern::new(*window, coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_inside() {
        let w = CubeWindow::new(2, 400.0).unwrap();
        let a = sample_poisson(&w, 1.0, RngSeed::new(7, 0)).unwrap();
        let b = sample_poisson(&w, 1.0, RngSeed::new(7, 0)).unwrap();
        assert_eq!(a, b);
        assert!(a.points().all(|p| w.contains(p)));
        let c = sample_poisson(&w, 1.0, RngSeed::new(7, 1)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn rejects_nonpositive_rho() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        assert!(sample_poisson(&w, 0.0, RngSeed::from(1)).is_err());
        assert!(sample_poisson(&w, -2.0, RngSeed::from(1)).is_err());
    }

    #[test]
    fn mean_count() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        let reps = 10_000;
        let total: usize = (0..reps)
            .map(|i| sample_poisson(&w, 1.0, RngSeed::new(3, i)).unwrap().len())
            .sum();
        let mean = total as f64 / reps as f64;
        // 3 standard errors of the mean: 3 * sqrt(100 / 10000).
        assert!((mean - 100.0).abs() < 0.3, "{mean}");
    }
}
