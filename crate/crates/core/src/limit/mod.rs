//! Gaussian limit of the scaled K-estimator and the goodness-of-fit test
//! built on it.
//!
//! Under the null, `sqrt(n) (K(r) - E K(r))` on a grid of radii is close to
//! a centered Gaussian vector whose covariance is known in closed form for
//! a planar Poisson process and estimated by simulation otherwise. The test
//! compares a functional of the observed deviation with the `(1 - alpha)`
//! quantile of the same functional over simulated Gaussian paths.

mod covariance;
mod gof;
mod paths;

pub use covariance::{
    monte_carlo_limit, null_limit, poisson_limit_covariance, LimitModel, Provenance, MIN_MC_REPLICATIONS,
};
pub use gof::{
    estimate_quantile, gof_test, integral_statistic, ks_statistic, sample_integral_statistics,
    sample_sup_statistics, GofResult, GofTester, StatisticKind, DEFAULT_QUANTILE_PATHS, MIN_QUANTILE_SAMPLES,
};
pub use paths::{GaussianPaths, PATH_BLOCK};
