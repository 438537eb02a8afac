use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{CubeWindow, PointPattern};
use crate::rng::RngSeed;
use crate::samplers::poisson_count;

/// Largest cell grid simulated by dense Cholesky factorization; bigger planar
/// grids use circulant embedding.
pub const DENSE_MAX_CELLS: usize = 4096;

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-6;

/// Log-Gaussian Cox process driven by a Gaussian field with covariance
/// `sigma2 * exp(-|h| / scale)` and mean `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LgcpParams {
    pub sigma2: f64,
    pub scale: f64,
    pub mu: f64,
    /// Field cells per unit length.
    pub grid_resolution: f64,
}

impl LgcpParams {
    /// Mean chosen as `-sigma2 / 2` so the intensity is one.
    pub fn unit_intensity(sigma2: f64, scale: f64) -> Self {
        Self {
            sigma2,
            scale,
            mu: -0.5 * sigma2,
            grid_resolution: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "sigma2 must be >= 0, got {}",
                self.sigma2
            )));
        }
        if !(self.scale > 0.0 && self.scale.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "scale must be > 0, got {}",
                self.scale
            )));
        }
        if !(self.grid_resolution >= 1.0 && self.grid_resolution.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "grid_resolution must be >= 1, got {}",
                self.grid_resolution
            )));
        }
        let rho = self.intensity();
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "implied intensity {rho} is not positive and finite"
            )));
        }
        Ok(())
    }

    /// `exp(mu + sigma2 / 2)`.
    pub fn intensity(&self) -> f64 {
        (self.mu + 0.5 * self.sigma2).exp()
    }

    fn covariance(&self, dist: f64) -> f64 {
        self.sigma2 * (-dist / self.scale).exp()
    }
}

enum FieldMethod {
    Constant,
    Dense(DMatrix<f64>),
    Circulant {
        size: usize,
        sqrt_eigs: Vec<f64>,
        fft: Arc<dyn Fft<f64>>,
    },
}

/// An LGCP sampler with the field factorization computed once for a window.
///
/// The field is taken constant on `m^d` cubic cells tiling the window, with
/// `m = ceil(L * grid_resolution)`; points are placed uniformly in cells.
pub struct LgcpSampler {
    window: CubeWindow,
    params: LgcpParams,
    cells_per_axis: usize,
    cell_side: f64,
    method: FieldMethod,
}

impl std::fmt::Debug for LgcpSampler {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let method = match self.method {
            FieldMethod::Constant => "constant",
            FieldMethod::Dense(_) => "dense",
            FieldMethod::Circulant { .. } => "circulant",
        };
        f.debug_struct("LgcpSampler")
            .field("window", &self.window)
            .field("params", &self.params)
            .field("cells_per_axis", &self.cells_per_axis)
            .field("method", &method)
            .finish()
    }
}

impl LgcpSampler {
    pub fn new(window: &CubeWindow, params: &LgcpParams) -> Result<Self> {
        params.validate()?;
        let d = window.dim();
        let m = (window.side() * params.grid_resolution).ceil().max(1.0) as usize;
        let cell_side = window.side() / m as f64;
        let ncells = m.pow(d as u32);
        let method = if params.sigma2 == 0.0 {
            FieldMethod::Constant
        } else if ncells <= DENSE_MAX_CELLS || d != 2 {
            FieldMethod::Dense(dense_factor(params, m, d, cell_side)?)
        } else {
            circulant_embedding(params, m, cell_side)?
        };
        Ok(Self {
            window: *window,
            params: *params,
            cells_per_axis: m,
            cell_side,
            method,
        })
    }

    pub fn cells_per_axis(&self) -> usize {
        self.cells_per_axis
    }

    pub fn uses_circulant_embedding(&self) -> bool {
        matches!(self.method, FieldMethod::Circulant { .. })
    }

    /// A zero-mean field sample, one value per cell (first axis fastest).
    pub fn sample_field<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let ncells = self.cells_per_axis.pow(self.window.dim() as u32);
        match &self.method {
            FieldMethod::Constant => vec![0.0; ncells],
            FieldMethod::Dense(factor) => {
                let xi = DVector::from_fn(ncells, |_, _| rng.sample::<f64, _>(StandardNormal));
                (factor * xi).as_slice().to_vec()
            }
            FieldMethod::Circulant { size, sqrt_eigs, fft } => {
                let big = *size;
                let mut buf: Vec<Complex64> = sqrt_eigs
                    .iter()
                    .map(|&s| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        Complex64::new(s * re, s * im)
                    })
                    .collect();
                fft2(&mut buf, big, fft.as_ref());
                let m = self.cells_per_axis;
                let mut field = Vec::with_capacity(m * m);
                for j in 0..m {
                    for i in 0..m {
                        field.push(buf[j * big + i].re);
                    }
                }
                field
            }
        }
    }

    pub fn sample(&self, seed: RngSeed) -> Result<PointPattern> {
        let mut rng = seed.rng();
        let d = self.window.dim();
        let m = self.cells_per_axis;
        let field = self.sample_field(&mut rng);
        let cell_volume = self.cell_side.powi(d as i32);
        let lo = -self.window.half_side();
        let mut coords = Vec::new();
        let mut corner = vec![0.0; d];
        for (cell, &z) in field.iter().enumerate() {
            let count = poisson_count(&mut rng, (self.params.mu + z).exp() * cell_volume);
            if count == 0 {
                continue;
            }
            let mut rem = cell;
            for c in corner.iter_mut() {
                *c = lo + (rem % m) as f64 * self.cell_side;
                rem /= m;
            }
            for _ in 0..count {
                for c in &corner {
                    let x = c + self.cell_side * rng.random::<f64>();
                    coords.push(x.min(-lo));
                }
            }
        }
        PointPattern::new(self.window, coords)
    }
}

/// Convenience wrapper: factorizes the field covariance and draws one pattern.
/// Prefer [`LgcpSampler`] for repeated draws.
pub fn sample_lgcp(window: &CubeWindow, params: &LgcpParams, seed: RngSeed) -> Result<PointPattern> {
    LgcpSampler::new(window, params)?.sample(seed)
}

fn cell_center(index: usize, m: usize, d: usize, side: f64, out: &mut [f64]) {
    let mut rem = index;
    for o in out.iter_mut().take(d) {
        *o = ((rem % m) as f64 + 0.5) * side;
        rem /= m;
    }
}

fn dense_factor(params: &LgcpParams, m: usize, d: usize, side: f64) -> Result<DMatrix<f64>> {
    let n = m.pow(d as u32);
    let mut a = vec![0.0; d];
    let mut b = vec![0.0; d];
    let cov = DMatrix::from_fn(n, n, |i, j| {
        cell_center(i, m, d, side, &mut a);
        cell_center(j, m, d, side, &mut b);
        let dist = a
            .iter()
            .zip(&b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        params.covariance(dist)
    });
    if let Some(chol) = cov.clone().cholesky() {
        return Ok(chol.l());
    }
    let mut jitter = JITTER_START * params.sigma2;
    while jitter <= JITTER_MAX * params.sigma2 {
        let mut jittered = cov.clone();
        for i in 0..n {
            jittered[(i, i)] += jitter;
        }
        if let Some(chol) = jittered.cholesky() {
            return Ok(chol.l());
        }
        jitter *= 2.0;
    }
    let eig = SymmetricEigen::new(cov).eigenvalues;
    Err(Error::Factorization {
        jitter: jitter / 2.0,
        min_eigenvalue: eig.min(),
        max_eigenvalue: eig.max(),
    })
}

fn fft2(buf: &mut [Complex64], size: usize, fft: &dyn Fft<f64>) {
    fft.process(buf);
    let mut t = vec![Complex64::new(0.0, 0.0); size * size];
    for r in 0..size {
        for c in 0..size {
            t[c * size + r] = buf[r * size + c];
        }
    }
    fft.process(&mut t);
    for r in 0..size {
        for c in 0..size {
            buf[c * size + r] = t[r * size + c];
        }
    }
}

/// Eigenvalues of the block-circulant embedding of the grid covariance on a
/// torus of side `size >= 2m` cells; grows the torus until they are
/// nonnegative up to round-off.
fn circulant_embedding(params: &LgcpParams, m: usize, side: f64) -> Result<FieldMethod> {
    let mut planner = FftPlanner::new();
    let mut size = 2 * m;
    let mut last = (0.0, 0.0);
    for _ in 0..4 {
        let fft = planner.plan_fft_forward(size);
        let mut base: Vec<Complex64> = (0..size * size)
            .map(|k| {
                let (r, c) = (k / size, k % size);
                let dr = r.min(size - r) as f64 * side;
                let dc = c.min(size - c) as f64 * side;
                Complex64::new(params.covariance((dr * dr + dc * dc).sqrt()), 0.0)
            })
            .collect();
        fft2(&mut base, size, fft.as_ref());
        let eigs: Vec<f64> = base.iter().map(|z| z.re).collect();
        let max = eigs.iter().copied().fold(f64::MIN, f64::max);
        let min = eigs.iter().copied().fold(f64::MAX, f64::min);
        last = (min, max);
        if min >= -1e-10 * max {
            let total = (size * size) as f64;
            let sqrt_eigs = eigs.iter().map(|&l| (l.max(0.0) / total).sqrt()).collect();
            return Ok(FieldMethod::Circulant { size, sqrt_eigs, fft });
        }
        size *= 2;
    }
    Err(Error::Factorization {
        jitter: 0.0,
        min_eigenvalue: last.0,
        max_eigenvalue: last.1,
    })
}
