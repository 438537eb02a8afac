use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::unit_ball_volume;
use crate::geometry::CubeWindow;
use crate::gibbs::{GibbsModel, Interaction, PairPotential, PerfectSampler};
use crate::rng::RngSeed;

/// Outcome of [`calibrate_strauss_activity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    pub tau: f64,
    /// Monte Carlo intensity at `tau`.
    pub intensity: f64,
    pub std_error: f64,
}

fn mc_intensity(
    model: &GibbsModel,
    window: &CubeWindow,
    replications: usize,
    seed: RngSeed,
) -> Result<(f64, f64)> {
    let sampler = PerfectSampler::new(*window, model.clone())?;
    let counts = (0..replications as u64)
        .into_par_iter()
        .map(|rep| sampler.sample(seed.derive(&[rep])).map(|(p, _)| p.len() as f64))
        .collect::<Result<Vec<f64>>>()?;
    let m = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / m;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0).max(1.0);
    let v = window.volume();
    Ok((mean / v, (var / m).sqrt() / v))
}

/// Bisection on the activity of a planar Strauss model so that its Monte
/// Carlo intensity matches `target`. Every step reuses the same streams.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_strauss_activity(
    gamma: f64,
    radius: f64,
    beta: f64,
    target: f64,
    window: &CubeWindow,
    replications: usize,
    iterations: usize,
    seed: RngSeed,
) -> Result<Calibration> {
    if replications < 2 {
        return Err(Error::SampleTooSmall {
            needed: 2,
            got: replications,
        });
    }
    let potential = PairPotential::strauss(gamma, radius)?;
    let tau_max = 1.0 / (unit_ball_volume(window.dim()) * radius.powi(window.dim() as i32));
    let model = |tau: f64| {
        GibbsModel::new(
            Interaction::PairPotential(potential.clone()),
            tau,
            beta,
            window.dim(),
        )
    };
    let (mut lo, mut hi) = (0.0, tau_max * (1.0 - 1e-9));
    let mut best = None;
    for _ in 0..iterations.max(1) {
        let tau = 0.5 * (lo + hi);
        let (intensity, std_error) = mc_intensity(&model(tau)?, window, replications, seed)?;
        best = Some(Calibration {
            tau,
            intensity,
            std_error,
        });
        if intensity < target {
            lo = tau;
        } else {
            hi = tau;
        }
    }
    Ok(best.expect("at least one iteration"))
}
