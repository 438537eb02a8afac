use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::EdgeCorrection;
use crate::limit::{StatisticKind, DEFAULT_QUANTILE_PATHS};
use crate::models::ModelSpec;
use crate::rng::RngSeed;

/// Largest window volume simulated for Gibbs models unless overridden.
pub const DEFAULT_GIBBS_VOLUME_CAP: f64 = 10_000.0;

fn default_alpha() -> f64 {
    0.05
}
fn default_replications() -> usize {
    1000
}
fn default_paths() -> usize {
    DEFAULT_QUANTILE_PATHS
}
fn default_correction() -> EdgeCorrection {
    EdgeCorrection::Border
}
fn default_step() -> f64 {
    0.1
}
fn default_dim() -> usize {
    2
}
fn default_cap() -> f64 {
    DEFAULT_GIBBS_VOLUME_CAP
}

/// Numeric settings of a rejection-rate experiment: the `[experiment]`
/// section of a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSettings {
    /// Window volumes `n`.
    pub windows: Vec<f64>,
    /// Upper ends `R` of the radius intervals `[0, R]`.
    pub r_values: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default = "default_paths")]
    pub quantile_paths: usize,
    /// Replications for a simulated null limit.
    #[serde(default = "default_replications")]
    pub limit_replications: usize,
    #[serde(default = "default_correction")]
    pub correction: EdgeCorrection,
    #[serde(default)]
    pub statistic: StatisticKind,
    #[serde(default = "default_step")]
    pub grid_step: f64,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
    /// Gibbs models are not simulated on windows larger than this.
    #[serde(default = "default_cap")]
    pub gibbs_volume_cap: f64,
    /// Run the cells of one window concurrently.
    #[serde(default)]
    pub parallel_cells: bool,
}

/// A full experiment: settings, the null model and the data model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub experiment: ExperimentSettings,
    pub null: ModelSpec,
    pub data: ModelSpec,
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment spec serializes")
    }

    pub fn seed(&self) -> RngSeed {
        RngSeed::new(self.experiment.seed, self.experiment.stream)
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.experiment;
        if e.replications == 0 {
            return Err(Error::InvalidParameter("replications must be >= 1".into()));
        }
        if !(e.alpha > 0.0 && e.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1), got {}",
                e.alpha
            )));
        }
        if e.r_values.is_empty() || e.r_values.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidParameter(
                "r_values must be a non-empty list of positive radii".into(),
            ));
        }
        if e.windows.is_empty() || e.windows.iter().any(|&n| !(n > 0.0 && n.is_finite())) {
            return Err(Error::InvalidParameter(
                "windows must be a non-empty list of positive volumes".into(),
            ));
        }
        if e.grid_step.is_nan() || e.grid_step <= 0.0 {
            return Err(Error::InvalidParameter("grid_step must be positive".into()));
        }
        e.correction.validate_dim(e.dim)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TABLE1: &str = r#"
[experiment]
windows = [400.0, 2500.0]
r_values = [1.0, 2.0, 3.0, 4.0, 5.0]
replications = 1000
seed = 2024

[null]
model = "poisson"
rho = 1.0

[data]
model = "lgcp"
sigma2 = 0.2
scale = 2.0
"#;

    #[test]
    fn parse_defaults() {
        let spec = ExperimentSpec::from_toml(TABLE1).unwrap();
        assert_eq!(spec.experiment.alpha, 0.05);
        assert_eq!(spec.experiment.correction, EdgeCorrection::Border);
        assert_eq!(spec.experiment.statistic, StatisticKind::Sup);
        assert_eq!(spec.data, ModelSpec::lgcp(0.2, 2.0));
        let again = ExperimentSpec::from_toml(&spec.to_toml()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn invalid_rejected() {
        let bad = TABLE1.replace("replications = 1000", "replications = 0");
        assert!(ExperimentSpec::from_toml(&bad).is_err());
        let bad = TABLE1.replace("r_values = [1.0,", "r_values = [-1.0,");
        assert!(ExperimentSpec::from_toml(&bad).is_err());
        let bad = TABLE1.replace("seed = 2024", "seed = 2024\nbogus = 1");
        assert!(ExperimentSpec::from_toml(&bad).is_err());
    }
}
