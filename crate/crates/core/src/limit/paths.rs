use nalgebra::{Cholesky, DMatrix, SymmetricEigen};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::RngSeed;

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-6;
const NEGATIVE_EIGEN_TOLERANCE: f64 = 1e-8;
/// Paths drawn per independent stream.
pub const PATH_BLOCK: usize = 1024;

/// Centered Gaussian vectors with a given covariance, via a Cholesky factor
/// of the covariance plus the smallest sufficient diagonal jitter.
#[derive(Debug, Clone)]
pub struct GaussianPaths {
    factor: DMatrix<f64>,
    jitter: f64,
}

fn eigen_range(cov: &DMatrix<f64>) -> (f64, f64) {
    let eig = SymmetricEigen::new(cov.clone()).eigenvalues;
    let min = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, max)
}

impl GaussianPaths {
    /// Jitter `eps * I` runs from `1e-10 trace/dim` doubling up to
    /// `1e-6 trace/dim`. Matrices with an eigenvalue below
    /// `-1e-8 trace/dim` are rejected outright.
    pub fn new(cov: &DMatrix<f64>) -> Result<Self> {
        let k = cov.nrows();
        if k == 0 || cov.ncols() != k {
            return Err(Error::InvalidParameter(
                "covariance must be a non-empty square matrix".into(),
            ));
        }
        let scale = cov.trace() / k as f64;
        if cov.iter().all(|&v| v == 0.0) {
            return Ok(Self {
                factor: DMatrix::zeros(k, k),
                jitter: 0.0,
            });
        }
        if !(scale > 0.0 && scale.is_finite()) {
            let (min, max) = eigen_range(cov);
            return Err(Error::Factorization {
                jitter: 0.0,
                min_eigenvalue: min,
                max_eigenvalue: max,
            });
        }
        let (min, max) = eigen_range(cov);
        if min < -NEGATIVE_EIGEN_TOLERANCE * scale {
            return Err(Error::Factorization {
                jitter: 0.0,
                min_eigenvalue: min,
                max_eigenvalue: max,
            });
        }
        let mut eps = JITTER_START * scale;
        while eps <= JITTER_MAX * scale * (1.0 + 1e-12) {
            let mut m = cov.clone();
            for i in 0..k {
                m[(i, i)] += eps;
            }
            if let Some(ch) = Cholesky::new(m) {
                return Ok(Self {
                    factor: ch.l(),
                    jitter: eps,
                });
            }
            eps *= 2.0;
        }
        Err(Error::Factorization {
            jitter: eps / 2.0,
            min_eigenvalue: min,
            max_eigenvalue: max,
        })
    }

    pub fn dim(&self) -> usize {
        self.factor.nrows()
    }

    /// Diagonal jitter that made the factorization succeed.
    pub fn jitter(&self) -> f64 {
        self.jitter
    }

    fn block(&self, count: usize, seed: RngSeed) -> DMatrix<f64> {
        let k = self.dim();
        let mut rng = seed.rng();
        let z = DMatrix::from_fn(k, count, |_, _| StandardNormal.sample(&mut rng));
        &self.factor * z
    }

    fn blocks(count: usize) -> impl IndexedParallelIterator<Item = (u64, usize)> {
        let nblocks = count.div_ceil(PATH_BLOCK);
        (0..nblocks)
            .into_par_iter()
            .map(move |b| (b as u64, PATH_BLOCK.min(count - b * PATH_BLOCK)))
    }

    /// `count` paths as the columns of a `dim x count` matrix. Block `b` of
    /// [`PATH_BLOCK`] paths uses stream `seed.derive(&[b])`.
    pub fn sample(&self, count: usize, seed: RngSeed) -> DMatrix<f64> {
        let parts: Vec<DMatrix<f64>> = Self::blocks(count)
            .map(|(b, c)| self.block(c, seed.derive(&[b])))
            .collect();
        let mut out = DMatrix::zeros(self.dim(), count);
        let mut col = 0;
        for p in parts {
            out.columns_mut(col, p.ncols()).copy_from(&p);
            col += p.ncols();
        }
        out
    }

    /// `f` applied to each of `count` paths, without keeping the paths.
    /// Agrees with applying `f` to the columns of [`sample`](Self::sample).
    pub fn map<F>(&self, count: usize, seed: RngSeed, f: F) -> Vec<f64>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        let parts: Vec<Vec<f64>> = Self::blocks(count)
            .map(|(b, c)| {
                let m = self.block(c, seed.derive(&[b]));
                m.column_iter().map(|col| f(col.as_slice())).collect()
            })
            .collect();
        parts.concat()
    }
}
