use std::f64::consts::PI;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate_k, RGrid};
use crate::geometry::{CubeWindow, EdgeCorrection};
use crate::models::ModelSpec;
use crate::rng::RngSeed;

/// Fewest replications accepted by [`monte_carlo_limit`].
pub const MIN_MC_REPLICATIONS: usize = 100;

const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Limit of `n Cov(K(r1), K(r2))` for a planar Poisson process of
/// intensity `rho`: `2 pi min(r1, r2)^2 / rho^2 + 4 pi^2 r1^2 r2^2 / rho`.
pub fn poisson_limit_covariance(dim: usize, r1: f64, r2: f64, rho: f64) -> Result<f64> {
    if dim != 2 {
        return Err(Error::InvalidParameter(format!(
            "closed-form Poisson covariance is planar only, got d = {dim}"
        )));
    }
    if !(r1 >= 0.0 && r2 >= 0.0) {
        return Err(Error::InvalidParameter("radii must be >= 0".into()));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "rho must be positive, got {rho}"
        )));
    }
    let m = r1.min(r2);
    Ok(2.0 * PI * m * m / (rho * rho) + 4.0 * PI * PI * r1 * r1 * r2 * r2 / rho)
}

/// Origin of a [`LimitModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    ClosedFormPoisson {
        rho: f64,
    },
    MonteCarlo {
        replications: usize,
        model: ModelSpec,
        window_volume: f64,
        correction: EdgeCorrection,
        rho: f64,
        seed: RngSeed,
    },
}

/// Mean curve and limiting covariance of the scaled K-estimator on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitModel {
    grid: RGrid,
    mean: Vec<f64>,
    covariance: DMatrix<f64>,
    provenance: Provenance,
}

impl LimitModel {
    pub fn new(
        grid: RGrid,
        mean: Vec<f64>,
        covariance: DMatrix<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        let k = grid.len();
        if mean.len() != k || covariance.nrows() != k || covariance.ncols() != k {
            return Err(Error::GridMismatch(format!(
                "grid has {k} radii, mean {} and covariance {}x{}",
                mean.len(),
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        if mean.iter().chain(covariance.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "limit model has non-finite entries".into(),
            ));
        }
        let scale = covariance.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..k {
            for j in 0..i {
                if (covariance[(i, j)] - covariance[(j, i)]).abs() > SYMMETRY_TOLERANCE * scale {
                    return Err(Error::InvalidParameter(format!(
                        "covariance is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self {
            grid,
            mean,
            covariance,
            provenance,
        })
    }

    /// Planar Poisson null: mean `pi r^2` and the closed-form covariance.
    pub fn poisson(grid: RGrid, rho: f64) -> Result<Self> {
        let r = grid.values();
        let k = r.len();
        let mut cov = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                cov[(i, j)] = poisson_limit_covariance(2, r[i], r[j], rho)?;
            }
        }
        let mean = r.iter().map(|&t| PI * t * t).collect();
        Self::new(grid, mean, cov, Provenance::ClosedFormPoisson { rho })
    }

    pub fn grid(&self) -> &RGrid {
        &self.grid
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn covariance(&self) -> &DMatrix<f64> {
        &self.covariance
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    /// The model on the grid points in `[0, bound]`.
    pub fn restricted(&self, bound: f64) -> Result<Self> {
        let grid = self.grid.restricted(bound)?;
        let k = grid.len();
        Ok(Self {
            grid,
            mean: self.mean[..k].to_vec(),
            covariance: self.covariance.view((0, 0), (k, k)).into_owned(),
            provenance: self.provenance.clone(),
        })
    }

    /// Writes `grid.csv`, `mean.csv`, `covariance.csv` and `provenance.json`.
    pub fn save(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        let mut grid = fs::File::create(dir.join("grid.csv"))?;
        writeln!(grid, "# step={}", self.grid.step())?;
        writeln!(grid, "r")?;
        for r in self.grid.values() {
            writeln!(grid, "{r}")?;
        }
        let mut mean = fs::File::create(dir.join("mean.csv"))?;
        writeln!(mean, "r,mean")?;
        for (r, m) in self.grid.values().iter().zip(&self.mean) {
            writeln!(mean, "{r},{m}")?;
        }
        let mut cov = fs::File::create(dir.join("covariance.csv"))?;
        for i in 0..self.covariance.nrows() {
            let row: Vec<String> = self.covariance.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(cov, "{}", row.join(","))?;
        }
        let prov = serde_json::to_string_pretty(&self.provenance).map_err(|e| Error::Parse(e.to_string()))?;
        fs::write(dir.join("provenance.json"), prov + "\n")?;
        Ok(())
    }

    pub fn load(dir: &Path) -> Result<Self> {
        let rows = |name: &str| -> Result<Vec<Vec<f64>>> {
            let file = fs::File::open(dir.join(name))?;
            let mut out = Vec::new();
            for line in BufReader::new(file).lines() {
                let line = line?;
                let line = line.trim();
                if line.is_empty()
                    || line.starts_with('#')
                    || line.starts_with(|c: char| c.is_ascii_alphabetic())
                {
                    continue;
                }
                let row = line
                    .split(',')
                    .map(|f| {
                        f.trim()
                            .parse::<f64>()
                            .map_err(|e| Error::Parse(format!("{name}: '{f}': {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.push(row);
            }
            Ok(out)
        };
        let radii: Vec<f64> = rows("grid.csv")?.into_iter().map(|r| r[0]).collect();
        let mean_rows = rows("mean.csv")?;
        let cov_rows = rows("covariance.csv")?;
        let k = radii.len();
        if mean_rows.len() != k || cov_rows.len() != k || cov_rows.iter().any(|r| r.len() != k) {
            return Err(Error::GridMismatch(format!(
                "limit files in {} disagree in size",
                dir.display()
            )));
        }
        for (r, row) in radii.iter().zip(&mean_rows) {
            if row.len() != 2 || (row[0] - r).abs() > 1e-12 * (1.0 + r.abs()) {
                return Err(Error::GridMismatch("mean.csv radii differ from grid.csv".into()));
            }
        }
        let mean = mean_rows.iter().map(|r| r[1]).collect();
        let covariance = DMatrix::from_fn(k, k, |i, j| cov_rows[i][j]);
        let text = fs::read_to_string(dir.join("provenance.json"))?;
        let provenance =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("provenance.json: {e}")))?;
        Self::new(RGrid::from_values(radii)?, mean, covariance, provenance)
    }
}

/// Mean curve and `n` times the covariance matrix of the K-estimator over
/// `replications` independent patterns of `model` on `window`.
pub fn monte_carlo_limit(
    model: &ModelSpec,
    window: &CubeWindow,
    grid: &RGrid,
    correction: EdgeCorrection,
    rho: f64,
    replications: usize,
    seed: RngSeed,
) -> Result<LimitModel> {
    if replications < MIN_MC_REPLICATIONS {
        return Err(Error::SampleTooSmall {
            needed: MIN_MC_REPLICATIONS,
            got: replications,
        });
    }
    let prepared = model.prepare(window)?;
    let curves = (0..replications as u64)
        .into_par_iter()
        .map(|rep| {
            let pattern = prepared.sample(seed.derive(&[rep]))?;
            Ok(estimate_k(&pattern, rho, grid, correction)?.values)
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let k = grid.len();
    let m = replications as f64;
    let mut mean = vec![0.0; k];
    for c in &curves {
        for (a, v) in mean.iter_mut().zip(c) {
            *a += v;
        }
    }
    mean.iter_mut().for_each(|a| *a /= m);
    let mut cov = DMatrix::zeros(k, k);
    for c in &curves {
        for i in 0..k {
            let di = c[i] - mean[i];
            for j in 0..=i {
                cov[(i, j)] += di * (c[j] - mean[j]);
            }
        }
    }
    let n = window.volume();
    for i in 0..k {
        for j in 0..=i {
            let v = cov[(i, j)] * n / (m - 1.0);
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let provenance = Provenance::MonteCarlo {
        replications,
        model: model.clone(),
        window_volume: n,
        correction,
        rho,
        seed,
    };
    LimitModel::new(grid.clone(), mean, cov, provenance)
}

/// Null limit for testing against `model`: closed form for a planar Poisson
/// null with translation or border correction, Monte Carlo otherwise.
pub fn null_limit(
    model: &ModelSpec,
    window: &CubeWindow,
    grid: &RGrid,
    correction: EdgeCorrection,
    replications: usize,
    seed: RngSeed,
) -> Result<LimitModel> {
    let rho = model.intensity().ok_or_else(|| {
        Error::InvalidParameter(format!(
            "intensity of {} is not known; give it explicitly",
            model.name()
        ))
    })?;
    match model {
        ModelSpec::Poisson { rho }
            if window.dim() == 2
                && matches!(correction, EdgeCorrection::Translation | EdgeCorrection::Border) =>
        {
            LimitModel::poisson(grid.clone(), *rho)
        }
        _ => monte_carlo_limit(model, window, grid, correction, rho, replications, seed),
    }
}
