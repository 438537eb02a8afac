use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::{estimate_k, CurveEstimate, RGrid};
use crate::geometry::{EdgeCorrection, PointPattern};
use crate::limit::covariance::LimitModel;
use crate::limit::paths::GaussianPaths;
use crate::rng::RngSeed;

/// Fewest samples accepted by [`estimate_quantile`].
pub const MIN_QUANTILE_SAMPLES: usize = 1000;
/// Default number of Gaussian paths for quantile estimation.
pub const DEFAULT_QUANTILE_PATHS: usize = 20_000;

/// Functional of the deviation curve used as test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StatisticKind {
    /// Maximum absolute deviation over the grid.
    #[default]
    Sup,
    /// Trapezoidal integral of the absolute deviation.
    Integral,
}

impl StatisticKind {
    pub fn name(self) -> &'static str {
        match self {
            StatisticKind::Sup => "sup",
            StatisticKind::Integral => "integral",
        }
    }

    /// Applies the functional to `values` on `radii`.
    pub fn apply(self, radii: &[f64], values: &[f64]) -> f64 {
        match self {
            StatisticKind::Sup => values.iter().fold(0.0, |m, v| m.max(v.abs())),
            StatisticKind::Integral => radii
                .windows(2)
                .zip(values.windows(2))
                .map(|(r, v)| 0.5 * (v[0].abs() + v[1].abs()) * (r[1] - r[0]))
                .sum(),
        }
    }
}

impl fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StatisticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sup" | "ks" => Ok(StatisticKind::Sup),
            "integral" | "int" => Ok(StatisticKind::Integral),
            other => Err(Error::Parse(format!("unknown statistic kind '{other}'"))),
        }
    }
}

fn path_statistics(
    limit: &LimitModel,
    bound: f64,
    paths: usize,
    kind: StatisticKind,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    let local = limit.restricted(bound)?;
    let gp = GaussianPaths::new(local.covariance())?;
    let radii = local.grid().values().to_vec();
    Ok(gp.map(paths, seed, |y| kind.apply(&radii, y)))
}

/// Draws of `sup |Y(r)|` over the grid points in `[0, bound]`, where `Y` is
/// the centered Gaussian vector with the limit covariance.
pub fn sample_sup_statistics(
    limit: &LimitModel,
    bound: f64,
    paths: usize,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    path_statistics(limit, bound, paths, StatisticKind::Sup, seed)
}

/// As [`sample_sup_statistics`] with the trapezoidal integral of `|Y|`.
pub fn sample_integral_statistics(
    limit: &LimitModel,
    bound: f64,
    paths: usize,
    seed: RngSeed,
) -> Result<Vec<f64>> {
    path_statistics(limit, bound, paths, StatisticKind::Integral, seed)
}

/// Empirical `(1 - alpha)`-quantile, interpolating linearly between order
/// statistics at position `(N - 1)(1 - alpha)`.
pub fn estimate_quantile(samples: &[f64], alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if samples.len() < MIN_QUANTILE_SAMPLES {
        return Err(Error::SampleTooSmall {
            needed: MIN_QUANTILE_SAMPLES,
            got: samples.len(),
        });
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let h = (s.len() - 1) as f64 * (1.0 - alpha);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(s.len() - 1);
    Ok(s[lo] + (h - lo as f64) * (s[hi] - s[lo]))
}

fn deviation(curve: &CurveEstimate, mean_curve: &[f64], bound: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if mean_curve.len() != curve.values.len() {
        return Err(Error::GridMismatch(format!(
            "curve has {} values, mean curve {}",
            curve.values.len(),
            mean_curve.len()
        )));
    }
    let k = curve.grid.count_up_to(bound);
    if k == 0 {
        return Err(Error::GridMismatch(format!("no grid point lies in [0, {bound}]")));
    }
    let scale = curve.n.sqrt();
    let dev = curve.values[..k]
        .iter()
        .zip(mean_curve)
        .map(|(v, m)| scale * (v - m))
        .collect();
    Ok((curve.grid.values()[..k].to_vec(), dev))
}

/// `max over grid points r <= bound of sqrt(n) |K(r) - mean(r)|`.
pub fn ks_statistic(curve: &CurveEstimate, mean_curve: &[f64], bound: f64) -> Result<f64> {
    let (r, dev) = deviation(curve, mean_curve, bound)?;
    Ok(StatisticKind::Sup.apply(&r, &dev))
}

/// Trapezoidal integral over the grid points in `[0, bound]` of
/// `sqrt(n) |K(r) - mean(r)|`.
pub fn integral_statistic(curve: &CurveEstimate, mean_curve: &[f64], bound: f64) -> Result<f64> {
    let (r, dev) = deviation(curve, mean_curve, bound)?;
    Ok(StatisticKind::Integral.apply(&r, &dev))
}

/// Outcome of a goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    pub statistic: f64,
    pub quantile: f64,
    pub alpha: f64,
    pub reject: bool,
    /// Upper end of the radius interval.
    pub r_max: f64,
    pub kind: StatisticKind,
}

impl fmt::Display for GofResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.reject { "REJECT" } else { "ACCEPT" };
        write!(f, "{verdict} statistic={} q={}", self.statistic, self.quantile)
    }
}

/// A test of fixed level and radius interval with its quantile computed
/// once, for applying to many patterns.
#[derive(Debug, Clone)]
pub struct GofTester {
    limit: LimitModel,
    alpha: f64,
    bound: f64,
    kind: StatisticKind,
    quantile: f64,
}

impl GofTester {
    pub fn new(
        limit: &LimitModel,
        alpha: f64,
        bound: f64,
        kind: StatisticKind,
        paths: usize,
        seed: RngSeed,
    ) -> Result<Self> {
        if bound.is_nan() || bound <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "R must be positive, got {bound}"
            )));
        }
        if limit.grid().max() + 1e-9 * limit.grid().step() < bound {
            return Err(Error::GridMismatch(format!(
                "limit grid ends at {} below R = {bound}",
                limit.grid().max()
            )));
        }
        let local = limit.restricted(bound)?;
        let draws = path_statistics(&local, bound, paths, kind, seed)?;
        let quantile = estimate_quantile(&draws, alpha)?;
        Ok(Self {
            limit: local,
            alpha,
            bound,
            kind,
            quantile,
        })
    }

    pub fn quantile(&self) -> f64 {
        self.quantile
    }

    pub fn limit(&self) -> &LimitModel {
        &self.limit
    }

    /// Tests an estimated curve whose grid starts with the tester's grid.
    pub fn test_curve(&self, curve: &CurveEstimate) -> Result<GofResult> {
        let grid = self.limit.grid();
        let k = grid.len();
        let head = RGrid::from_values(curve.grid.values()[..k.min(curve.grid.len())].to_vec())?;
        if !head.matches(grid) {
            return Err(Error::GridMismatch(
                "curve grid does not match the limit grid".into(),
            ));
        }
        let local = CurveEstimate {
            grid: head,
            values: curve.values[..k].to_vec(),
            ..curve.clone()
        };
        let (r, dev) = deviation(&local, self.limit.mean(), self.bound)?;
        let statistic = self.kind.apply(&r, &dev);
        Ok(GofResult {
            statistic,
            quantile: self.quantile,
            alpha: self.alpha,
            reject: statistic > self.quantile,
            r_max: self.bound,
            kind: self.kind,
        })
    }

    pub fn test(&self, pattern: &PointPattern, correction: EdgeCorrection, rho: f64) -> Result<GofResult> {
        let curve = estimate_k(pattern, rho, self.limit.grid(), correction)?;
        self.test_curve(&curve)
    }
}

/// Tests whether `pattern` is a realisation of the null behind `limit`.
#[allow(clippy::too_many_arguments)]
pub fn gof_test(
    pattern: &PointPattern,
    limit: &LimitModel,
    alpha: f64,
    bound: f64,
    kind: StatisticKind,
    correction: EdgeCorrection,
    rho: f64,
    paths: usize,
    seed: RngSeed,
) -> Result<GofResult> {
    GofTester::new(limit, alpha, bound, kind, paths, seed)?.test(pattern, correction, rho)
}
