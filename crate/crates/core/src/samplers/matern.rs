use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CubeWindow, PointPattern};
use crate::rng::RngSeed;
use crate::samplers::poisson_count;

/// Matérn cluster process: Poisson parents of intensity `kappa`, each with a
/// Poisson(`mean_offspring`) number of offspring uniform in the ball of
/// radius `cluster_radius` about it. Intensity is `kappa * mean_offspring`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaternClusterParams {
    pub kappa: f64,
    pub mean_offspring: f64,
    pub cluster_radius: f64,
}

impl MaternClusterParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("mean_offspring", self.mean_offspring),
            ("cluster_radius", self.cluster_radius),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    pub fn intensity(&self) -> f64 {
        self.kappa * self.mean_offspring
    }
}

/// Parents are drawn on the window dilated by the cluster radius, so every
/// offspring that can land in the window is generated.
pub fn sample_matern_cluster(
    window: &CubeWindow,
    params: &MaternClusterParams,
    seed: RngSeed,
) -> Result<PointPattern> {
    params.validate()?;
    let d = window.dim();
    let mut rng = seed.rng();
    let outer = window.half_side() + params.cluster_radius;
    let parents = poisson_count(&mut rng, params.kappa * (2.0 * outer).powi(d as i32));
    let mut parent = vec![0.0; d];
    let mut child = vec![0.0; d];
    let mut coords = Vec::new();
    for _ in 0..parents {
        for c in parent.iter_mut() {
            *c = -outer + 2.0 * outer * rng.random::<f64>();
        }
        let kids = poisson_count(&mut rng, params.mean_offspring);
        for _ in 0..kids {
            uniform_in_ball(&mut rng, &parent, params.cluster_radius, &mut child);
            if window.contains(&child) {
                coords.extend_from_slice(&child);
            }
        }
    }
    PointPattern::new(*window, coords)
}

fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, center: &[f64], radius: f64, out: &mut [f64]) {
    let d = center.len();
    let mut norm2 = 0.0;
    for o in out.iter_mut() {
        let z: f64 = rng.sample(StandardNormal);
        *o = z;
        norm2 += z * z;
    }
    let scale = radius * rng.random::<f64>().powf(1.0 / d as f64) / norm2.sqrt();
    for (o, c) in out.iter_mut().zip(center) {
        *o = c + *o * scale;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        let p = MaternClusterParams {
            kappa: 1.0,
            mean_offspring: 0.0,
            cluster_radius: 0.5,
        };
        assert!(sample_matern_cluster(&w, &p, RngSeed::from(1)).is_err());
    }

    #[test]
    fn mean_count_matches_intensity() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        let p = MaternClusterParams {
            kappa: 1.0,
            mean_offspring: 1.0,
            cluster_radius: 0.5,
        };
        let reps = 4000;
        let counts: Vec<f64> = (0..reps)
            .map(|i| sample_matern_cluster(&w, &p, RngSeed::new(11, i)).unwrap().len() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / reps as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        let se = (var / reps as f64).sqrt();
        assert!((mean - 100.0).abs() < 3.0 * se, "{mean} ± {se}");
    }

    #[test]
    fn deterministic() {
        let w = CubeWindow::new(2, 400.0).unwrap();
        let p = MaternClusterParams {
            kappa: 0.25,
            mean_offspring: 4.0,
            cluster_radius: 0.5,
        };
        assert_eq!(
            sample_matern_cluster(&w, &p, RngSeed::new(2, 9)).unwrap(),
            sample_matern_cluster(&w, &p, RngSeed::new(2, 9)).unwrap()
        );
    }
}
