//! Model descriptions shared by the limit computations, the experiment
//! harness and the command line.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CubeWindow, PointPattern};
use crate::gibbs::{
    GibbsModel, Interaction, PairPotential, PerfectSampler, PotentialStep, DEFAULT_AREA_RESOLUTION,
};
use crate::rng::RngSeed;
use crate::samplers::{sample_matern_cluster, sample_poisson, LgcpParams, LgcpSampler, MaternClusterParams};

/// Strauss activities giving unit intensity at interaction radius 0.4.
pub const STRAUSS_UNIT_ACTIVITY: [(f64, f64); 3] = [(0.2, 1.556), (0.5, 1.298), (0.8, 1.107)];

/// Tabulated unit-intensity activity for a Strauss model of radius 0.4.
pub fn strauss_unit_activity(gamma: f64, radius: f64) -> Option<f64> {
    if (radius - 0.4).abs() > 1e-12 {
        return None;
    }
    STRAUSS_UNIT_ACTIVITY
        .iter()
        .find(|(g, _)| (g - gamma).abs() < 1e-12)
        .map(|&(_, tau)| tau)
}

fn one() -> f64 {
    1.0
}

fn two() -> usize {
    2
}

fn area_resolution() -> usize {
    DEFAULT_AREA_RESOLUTION
}

/// A point process model, tagged by `model`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Poisson {
        #[serde(default = "one")]
        rho: f64,
    },
    /// Log-Gaussian Cox process; `mu` defaults to `-sigma2 / 2`.
    Lgcp {
        sigma2: f64,
        scale: f64,
        #[serde(default)]
        mu: Option<f64>,
        #[serde(default = "one")]
        grid_resolution: f64,
    },
    Matern {
        kappa: f64,
        mean_offspring: f64,
        cluster_radius: f64,
    },
    /// Planar Strauss model; `tau` defaults to the tabulated unit-intensity
    /// activity when one exists.
    Strauss {
        gamma: f64,
        #[serde(default = "strauss_radius")]
        radius: f64,
        #[serde(default)]
        tau: Option<f64>,
        #[serde(default = "one")]
        beta: f64,
    },
    Pair {
        #[serde(default)]
        hardcore: f64,
        #[serde(default)]
        steps: Vec<PotentialStep>,
        tau: f64,
        #[serde(default = "one")]
        beta: f64,
        #[serde(default = "two")]
        dim: usize,
    },
    AreaInteraction {
        disk_radius: f64,
        #[serde(default = "area_resolution")]
        resolution: usize,
        tau: f64,
        #[serde(default = "one")]
        beta: f64,
    },
    HardKBall {
        ball_radius: f64,
        k: usize,
        tau: f64,
        #[serde(default = "one")]
        beta: f64,
    },
}

fn strauss_radius() -> f64 {
    0.4
}

impl ModelSpec {
    pub fn poisson(rho: f64) -> Self {
        ModelSpec::Poisson { rho }
    }

    pub fn lgcp(sigma2: f64, scale: f64) -> Self {
        ModelSpec::Lgcp {
            sigma2,
            scale,
            mu: None,
            grid_resolution: 1.0,
        }
    }

    pub fn strauss(gamma: f64) -> Self {
        ModelSpec::Strauss {
            gamma,
            radius: 0.4,
            tau: None,
            beta: 1.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Poisson { .. } => "poisson",
            ModelSpec::Lgcp { .. } => "lgcp",
            ModelSpec::Matern { .. } => "matern",
            ModelSpec::Strauss { .. } => "strauss",
            ModelSpec::Pair { .. } => "pair",
            ModelSpec::AreaInteraction { .. } => "area_interaction",
            ModelSpec::HardKBall { .. } => "hard_k_ball",
        }
    }

    pub fn is_poisson(&self) -> bool {
        matches!(self, ModelSpec::Poisson { .. })
    }

    pub fn lgcp_params(&self) -> Option<LgcpParams> {
        match *self {
            ModelSpec::Lgcp {
                sigma2,
                scale,
                mu,
                grid_resolution,
            } => Some(LgcpParams {
                sigma2,
                scale,
                mu: mu.unwrap_or(-0.5 * sigma2),
                grid_resolution,
            }),
            _ => None,
        }
    }

    /// The Gibbs model behind a Gibbs family, in dimension `dim` where the
    /// family allows it.
    pub fn gibbs_model(&self) -> Result<Option<GibbsModel>> {
        let model = match self {
            ModelSpec::Strauss {
                gamma,
                radius,
                tau,
                beta,
            } => {
                let tau = match tau {
                    Some(t) => *t,
                    None => strauss_unit_activity(*gamma, *radius).ok_or_else(|| {
                        Error::InvalidParameter(format!(
                            "no tabulated activity for Strauss gamma={gamma} radius={radius}; set tau"
                        ))
                    })?,
                };
                GibbsModel::new(
                    Interaction::PairPotential(PairPotential::strauss(*gamma, *radius)?),
                    tau,
                    *beta,
                    2,
                )?
            }
            ModelSpec::Pair {
                hardcore,
                steps,
                tau,
                beta,
                dim,
            } => GibbsModel::new(
                Interaction::PairPotential(PairPotential::new(*hardcore, steps.clone())?),
                *tau,
                *beta,
                *dim,
            )?,
            ModelSpec::AreaInteraction {
                disk_radius,
                resolution,
                tau,
                beta,
            } => GibbsModel::new(
                Interaction::AreaInteraction {
                    disk_radius: *disk_radius,
                    resolution: *resolution,
                },
                *tau,
                *beta,
                2,
            )?,
            ModelSpec::HardKBall {
                ball_radius,
                k,
                tau,
                beta,
            } => GibbsModel::new(
                Interaction::HardKBall {
                    ball_radius: *ball_radius,
                    k: *k,
                },
                *tau,
                *beta,
                2,
            )?,
            _ => return Ok(None),
        };
        Ok(Some(model))
    }

    /// Intensity when known in closed form.
    pub fn intensity(&self) -> Option<f64> {
        match self {
            ModelSpec::Poisson { rho } => Some(*rho),
            ModelSpec::Lgcp { .. } => self.lgcp_params().map(|p| p.intensity()),
            ModelSpec::Matern {
                kappa,
                mean_offspring,
                ..
            } => Some(kappa * mean_offspring),
            ModelSpec::Strauss {
                gamma, radius, tau, ..
            } if tau.is_none() => strauss_unit_activity(*gamma, *radius).map(|_| 1.0),
            _ => None,
        }
    }

    /// Validates the parameters and precomputes what repeated sampling on
    /// `window` needs.
    pub fn prepare(&self, window: &CubeWindow) -> Result<PreparedModel> {
        let inner = match self {
            ModelSpec::Poisson { rho } => {
                if !(*rho > 0.0 && rho.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "rho must be positive, got {rho}"
                    )));
                }
                Prepared::Poisson(*rho)
            }
            ModelSpec::Lgcp { .. } => {
                let params = self.lgcp_params().expect("lgcp variant");
                Prepared::Lgcp(std::sync::Arc::new(LgcpSampler::new(window, &params)?))
            }
            ModelSpec::Matern {
                kappa,
                mean_offspring,
                cluster_radius,
            } => {
                let params = MaternClusterParams {
                    kappa: *kappa,
                    mean_offspring: *mean_offspring,
                    cluster_radius: *cluster_radius,
                };
                params.validate()?;
                Prepared::Matern(params)
            }
            _ => {
                let model = self.gibbs_model()?.expect("gibbs variant");
                Prepared::Gibbs(Box::new(PerfectSampler::new(*window, model)?))
            }
        };
        Ok(PreparedModel {
            window: *window,
            inner,
        })
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let json = serde_json::to_string(self).map_err(|_| fmt::Error)?;
        f.write_str(&json)
    }
}

#[derive(Debug, Clone)]
enum Prepared {
    Poisson(f64),
    Lgcp(std::sync::Arc<LgcpSampler>),
    Matern(MaternClusterParams),
    Gibbs(Box<PerfectSampler>),
}

/// A model bound to a window, ready for repeated sampling.
#[derive(Debug, Clone)]
pub struct PreparedModel {
    window: CubeWindow,
    inner: Prepared,
}

impl PreparedModel {
    pub fn window(&self) -> &CubeWindow {
        &self.window
    }

    pub fn sample(&self, seed: RngSeed) -> Result<PointPattern> {
        match &self.inner {
            Prepared::Poisson(rho) => sample_poisson(&self.window, *rho, seed),
            Prepared::Lgcp(s) => s.sample(seed),
            Prepared::Matern(p) => sample_matern_cluster(&self.window, p, seed),
            Prepared::Gibbs(s) => s.sample(seed).map(|(p, _)| p),
        }
    }
}
