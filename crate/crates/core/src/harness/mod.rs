//! Experiment configuration, rejection-rate tables and calibration helpers.
//!
//! An experiment is described by a TOML file with three sections:
//!
//! ```toml
//! [experiment]
//! windows = [2500.0, 10000.0]        # window volumes n
//! r_values = [1.0, 2.0, 3.0, 4.0, 5.0]
//! alpha = 0.05
//! replications = 1000
//! quantile_paths = 20000
//! correction = "border"
//! seed = 2024
//!
//! [null]
//! model = "poisson"
//! rho = 1.0
//!
//! [data]
//! model = "lgcp"
//! sigma2 = 0.2
//! scale = 2.0
//! ```
//!
//! Worker threads default to the number of cores; the `KCLT_WORKERS`
//! environment variable overrides it.

mod calibrate;
mod config;
mod table;

pub use calibrate::{calibrate_strauss_activity, Calibration};
pub use config::{ExperimentSettings, ExperimentSpec, DEFAULT_GIBBS_VOLUME_CAP};
pub use table::{data_seed, run_rejection_experiment, CellStatus, RejectionCell, RejectionTable};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "KCLT_WORKERS";

/// Sizes the global thread pool from `KCLT_WORKERS` when set. Has no effect
/// once the pool exists.
pub fn configure_workers_from_env() -> crate::Result<()> {
    let Ok(value) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let workers: usize = value.trim().parse().map_err(|_| {
        crate::Error::Parse(format!("{WORKERS_ENV} must be a positive integer, got '{value}'"))
    })?;
    if workers == 0 {
        return Err(crate::Error::Parse(format!("{WORKERS_ENV} must be positive")));
    }
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global();
    Ok(())
}
