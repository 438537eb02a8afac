use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Edge correction factor applied to each ordered pair in the K-function sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeCorrection {
    /// `e = 1`.
    None,
    /// `e = |W| / |W ∩ (W + x - y)|`.
    Translation,
    /// Translation weight averaged over rotations of `x - y` (planar only).
    #[serde(alias = "rigid")]
    RigidMotion,
    /// Minus sampling: only `x` at least `r` from the boundary contribute.
    Border,
    /// Inverse fraction of the circle about `x` through `y` inside the window (planar only).
    Isotropic,
}

impl EdgeCorrection {
    pub const ALL: [EdgeCorrection; 5] = [
        EdgeCorrection::None,
        EdgeCorrection::Translation,
        EdgeCorrection::RigidMotion,
        EdgeCorrection::Border,
        EdgeCorrection::Isotropic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EdgeCorrection::None => "none",
            EdgeCorrection::Translation => "translation",
            EdgeCorrection::RigidMotion => "rigidmotion",
            EdgeCorrection::Border => "border",
            EdgeCorrection::Isotropic => "isotropic",
        }
    }

    /// Rigid motion and isotropic weights exist only in the plane.
    pub fn validate_dim(self, d: usize) -> Result<()> {
        match self {
            EdgeCorrection::RigidMotion | EdgeCorrection::Isotropic if d != 2 => {
                Err(Error::UnsupportedDimension {
                    correction: self.name(),
                    d,
                })
            }
            _ => Ok(()),
        }
    }

    /// Whether the weight of a pair depends on the radius `r`.
    pub fn depends_on_radius(self) -> bool {
        matches!(self, EdgeCorrection::Border)
    }
}

impl fmt::Display for EdgeCorrection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EdgeCorrection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "e1" => Ok(EdgeCorrection::None),
            "translation" | "translate" | "e2" => Ok(EdgeCorrection::Translation),
            "rigidmotion" | "rigid" | "rigid-motion" | "e3" => Ok(EdgeCorrection::RigidMotion),
            "border" | "e4" => Ok(EdgeCorrection::Border),
            "isotropic" | "ripley" | "e5" => Ok(EdgeCorrection::Isotropic),
            other => Err(Error::Parse(format!("unknown edge correction '{other}'"))),
        }
    }
}
