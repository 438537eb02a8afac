//! Edge-corrected summary statistics on a grid of radii: Ripley's K, the
//! kernel pair-correlation estimator and the nearest-neighbour distribution.
//!
//! The intensity `rho` is always supplied by the caller; nothing here
//! estimates it. Pair sums run over ordered pairs `x != y`.

mod curve;
mod grid;
mod kfunction;
mod nn;
mod pcf;
mod weights;

pub use curve::{CurveEstimate, Statistic};
pub use grid::RGrid;
pub use kfunction::{brute_force_k, estimate_k};
pub use nn::estimate_nn;
pub use pcf::{epanechnikov, estimate_pcf, DEFAULT_BANDWIDTH};
pub use weights::edge_weight;

use crate::error::{Error, Result};

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "intensity must be positive, got {rho}"
        )))
    }
}

/// Volume of the unit ball in `d` dimensions.
pub fn unit_ball_volume(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    std::f64::consts::PI.powf(half) / statrs::function::gamma::gamma(1.0 + half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-12);
        assert!((unit_ball_volume(2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
    }
}
