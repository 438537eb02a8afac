//! Samplers for the non-Gibbs reference models: homogeneous Poisson,
//! log-Gaussian Cox with exponential covariance, and Matérn cluster.
//!
//! Every sampler is a pure function of its inputs and an [`RngSeed`].
//!
//! [`RngSeed`]: crate::rng::RngSeed

mod lgcp;
mod matern;
mod poisson;

pub use lgcp::{sample_lgcp, LgcpParams, LgcpSampler, DENSE_MAX_CELLS};
pub use matern::{sample_matern_cluster, MaternClusterParams};
pub use poisson::{sample_poisson, uniform_points};

use rand::Rng;
use rand_distr::{Distribution, Poisson};

/// Poisson variate with mean `mean >= 0` (zero mean gives zero).
pub(crate) fn poisson_count<R: Rng + ?Sized>(rng: &mut R, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean)
        .expect("finite positive Poisson mean")
        .sample(rng) as usize
}
