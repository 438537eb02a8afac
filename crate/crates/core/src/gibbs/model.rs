use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::unit_ball_volume;

/// Default sub-grid resolution (per axis) for uncovered-area integration.
pub const DEFAULT_AREA_RESOLUTION: usize = 64;

/// One constant piece `phi(t) = value` for `t` up to `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialStep {
    pub upper: f64,
    pub value: f64,
}

/// A finite-range pair potential: infinite on `[0, hardcore]`, then
/// piecewise constant, zero beyond the last step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPotential {
    hardcore: f64,
    steps: Vec<PotentialStep>,
}

impl PairPotential {
    pub fn new(hardcore: f64, steps: Vec<PotentialStep>) -> Result<Self> {
        if !(hardcore >= 0.0 && hardcore.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "hardcore radius must be >= 0, got {hardcore}"
            )));
        }
        let mut prev = hardcore;
        for s in &steps {
            if !(s.upper > prev && s.upper.is_finite()) {
                return Err(Error::InvalidParameter(
                    "potential steps must have increasing finite upper radii beyond the hardcore".into(),
                ));
            }
            if !(s.value >= 0.0 && s.value.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "potential values must be finite and >= 0, got {}",
                    s.value
                )));
            }
            prev = s.upper;
        }
        if steps.is_empty() && hardcore == 0.0 {
            return Err(Error::InvalidParameter("pair potential has zero range".into()));
        }
        Ok(Self { hardcore, steps })
    }

    /// Strauss potential `-ln(gamma)` on `[0, radius]`, for `0 < gamma <= 1`.
    pub fn strauss(gamma: f64, radius: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Strauss gamma must lie in (0, 1], got {gamma}"
            )));
        }
        Self::new(
            0.0,
            vec![PotentialStep {
                upper: radius,
                value: -gamma.ln(),
            }],
        )
    }

    pub fn hard_core(radius: f64) -> Result<Self> {
        Self::new(radius, Vec::new())
    }

    pub fn hardcore(&self) -> f64 {
        self.hardcore
    }

    pub fn steps(&self) -> &[PotentialStep] {
        &self.steps
    }

    pub fn range(&self) -> f64 {
        self.steps.last().map_or(self.hardcore, |s| s.upper)
    }

    pub fn value(&self, t: f64) -> f64 {
        if t <= self.hardcore {
            return f64::INFINITY;
        }
        self.steps.iter().find(|s| t <= s.upper).map_or(0.0, |s| s.value)
    }
}

/// Energy functional of the Gibbs model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Interaction {
    PairPotential(PairPotential),
    /// `Psi(X)` is the area of the union of disks of `disk_radius` about the points.
    AreaInteraction {
        disk_radius: f64,
        resolution: usize,
    },
    /// Infinite energy once some ball of `ball_radius` holds `k` points.
    HardKBall {
        ball_radius: f64,
        k: usize,
    },
}

impl Interaction {
    /// Interaction range `r^Psi`.
    pub fn range(&self) -> f64 {
        match self {
            Interaction::PairPotential(p) => p.range(),
            Interaction::AreaInteraction { disk_radius, .. } => 2.0 * disk_radius,
            Interaction::HardKBall { ball_radius, .. } => 2.0 * ball_radius,
        }
    }

    fn validate(&self, dim: usize) -> Result<()> {
        match *self {
            Interaction::PairPotential(_) => Ok(()),
            Interaction::AreaInteraction {
                disk_radius,
                resolution,
            } => {
                if dim != 2 {
                    return Err(Error::InvalidParameter(
                        "area interaction is implemented for d = 2 only".into(),
                    ));
                }
                if !(disk_radius > 0.0 && disk_radius.is_finite()) || resolution == 0 {
                    return Err(Error::InvalidParameter(
                        "area interaction needs a positive disk radius and resolution".into(),
                    ));
                }
                Ok(())
            }
            Interaction::HardKBall { ball_radius, k } => {
                if dim != 2 {
                    return Err(Error::InvalidParameter(
                        "hard k-ball interaction is implemented for d = 2 only".into(),
                    ));
                }
                if !(ball_radius > 0.0 && ball_radius.is_finite()) {
                    return Err(Error::InvalidParameter("ball radius must be positive".into()));
                }
                if k <= 2 {
                    return Err(Error::InvalidParameter(format!(
                        "hard k-ball needs k > 2, got {k}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// A finite-range Gibbs model with activity `tau` and inverse temperature
/// `beta`. Construction enforces `tau * kappa_d * range^d < 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GibbsModel {
    interaction: Interaction,
    tau: f64,
    beta: f64,
    dim: usize,
}

impl GibbsModel {
    pub fn new(interaction: Interaction, tau: f64, beta: f64, dim: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidParameter(format!(
                "Gibbs sampling supports d = 1, 2, 3, got {dim}"
            )));
        }
        interaction.validate(dim)?;
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "activity tau must be positive, got {tau}"
            )));
        }
        if !(beta >= 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be >= 0, got {beta}")));
        }
        let model = Self {
            interaction,
            tau,
            beta,
            dim,
        };
        let lambda = model.branching_mean();
        if lambda >= 1.0 {
            return Err(Error::Inadmissible { lambda });
        }
        Ok(model)
    }

    /// Planar Strauss model with activity `tau` and `beta = 1`.
    pub fn strauss(gamma: f64, radius: f64, tau: f64) -> Result<Self> {
        Self::new(
            Interaction::PairPotential(PairPotential::strauss(gamma, radius)?),
            tau,
            1.0,
            2,
        )
    }

    pub fn interaction(&self) -> &Interaction {
        &self.interaction
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn range(&self) -> f64 {
        self.interaction.range()
    }

    /// `lambda = tau * kappa_d * range^d`, the mean offspring of the
    /// branching process dominating ancestor clans.
    pub fn branching_mean(&self) -> f64 {
        self.tau * unit_ball_volume(self.dim) * self.range().powi(self.dim as i32)
    }

    /// Probability of accepting a birth with energy increment `delta`.
    pub fn acceptance(&self, delta: f64) -> f64 {
        if self.beta == 0.0 {
            1.0
        } else {
            (-self.beta * delta).exp()
        }
    }
}
