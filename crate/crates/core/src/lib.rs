//! Simulation and inference for stationary point processes built around
//! Ripley's K-function.
//!
//! * [`geometry`]: cube windows, point patterns, edge-correction geometry.
//! * [`samplers`]: Poisson, log-Gaussian Cox and Matérn cluster processes.
//! * [`gibbs`]: perfect simulation of finite-range Gibbs processes by
//!   thinning a free birth-death process along ancestor clans.
//! * [`estimators`]: edge-corrected K, pair-correlation and
//!   nearest-neighbour estimators on a grid of radii.
//! * [`limit`]: the Gaussian limit of the scaled K-estimator, Gaussian path
//!   simulation and the Kolmogorov–Smirnov type goodness-of-fit test.
//! * [`harness`]: experiment configuration and rejection-rate tables.

pub mod cli;
pub mod error;
pub mod estimators;
pub mod geometry;
pub mod gibbs;
pub mod harness;
pub mod limit;
pub mod models;
pub mod rng;
pub mod samplers;
pub mod spatial;
pub mod stats;

pub use error::{Error, Result};
pub use estimators::{CurveEstimate, RGrid, Statistic};
pub use geometry::{CubeWindow, EdgeCorrection, PointPattern};
pub use rng::RngSeed;
