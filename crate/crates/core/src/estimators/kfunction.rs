use crate::error::{Error, Result};
use crate::estimators::{check_rho, edge_weight, CurveEstimate, RGrid, Statistic};
use crate::geometry::{squared_distance, EdgeCorrection, PointPattern};
use crate::spatial::CellGrid;

/// Neumaier-compensated running sum, so the grid and the double-sum paths
/// agree regardless of summation order.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

fn validate(pattern: &PointPattern, rho: f64, grid: &RGrid, correction: EdgeCorrection) -> Result<()> {
    check_rho(rho)?;
    correction.validate_dim(pattern.dim())?;
    if correction == EdgeCorrection::Border {
        let window = pattern.window();
        if let Some(&r) = grid.values().iter().find(|&&r| window.eroded_volume(r) <= 0.0) {
            return Err(Error::WindowTooSmall { r });
        }
    }
    if correction == EdgeCorrection::RigidMotion && grid.max() >= pattern.window().side() {
        return Err(Error::InvalidParameter(
            "rigid motion correction needs every radius below the window side".into(),
        ));
    }
    Ok(())
}

/// Edge-corrected estimate of Ripley's K on `grid`:
/// `K(r) = 1/(n rho^2) * sum over ordered pairs x != y with |x - y| <= r of e(x, y)`.
///
/// Pairs are found with a cell grid of side `max(grid)`; pair weights are
/// binned by the first grid radius covering the pair distance and summed
/// cumulatively.
pub fn estimate_k(
    pattern: &PointPattern,
    rho: f64,
    grid: &RGrid,
    correction: EdgeCorrection,
) -> Result<CurveEstimate> {
    validate(pattern, rho, grid, correction)?;
    let window = pattern.window();
    let n = window.volume();
    let radii = grid.values();
    let r_max = grid.max();
    let mut bins = vec![CompensatedSum::default(); radii.len() + 1];

    if !pattern.is_empty() && r_max > 0.0 {
        let cells = CellGrid::new(pattern, r_max);
        let mut failure = None;
        for i in 0..pattern.len() {
            let x = pattern.point(i);
            let reach = window.boundary_distance(x);
            cells.for_each_within(x, r_max, Some(i), |j, dist| {
                if failure.is_some() || dist <= 0.0 {
                    return;
                }
                let first = radii.partition_point(|&r| r < dist);
                if correction == EdgeCorrection::Border {
                    // Counts for radii in [dist, boundary distance of x].
                    let past = radii.partition_point(|&r| r <= reach);
                    if past > first {
                        bins[first].add(1.0);
                        bins[past].add(-1.0);
                    }
                } else {
                    match edge_weight(correction, window, x, pattern.point(j), dist) {
                        Ok(w) => bins[first].add(w),
                        Err(e) => failure = Some(e),
                    }
                }
            });
            if let Some(e) = failure {
                return Err(e);
            }
        }
    }

    let mut acc = CompensatedSum::default();
    let values = radii
        .iter()
        .zip(&bins)
        .map(|(&r, b)| {
            acc.add(b.sum);
            acc.add(b.carry);
            if correction == EdgeCorrection::Border {
                acc.value() / (rho * rho * window.eroded_volume(r))
            } else {
                acc.value() / (n * rho * rho)
            }
        })
        .collect();

    Ok(CurveEstimate {
        grid: grid.clone(),
        values,
        statistic: Statistic::K,
        correction,
        rho,
        n,
    })
}

/// The literal double sum over all ordered pairs, evaluated separately at
/// each radius. Quadratic in the number of points; used as a test oracle.
pub fn brute_force_k(
    pattern: &PointPattern,
    rho: f64,
    grid: &RGrid,
    correction: EdgeCorrection,
) -> Result<CurveEstimate> {
    validate(pattern, rho, grid, correction)?;
    let window = pattern.window();
    let n = window.volume();
    let mut values = Vec::with_capacity(grid.len());
    for &r in grid.values() {
        let mut sum = CompensatedSum::default();
        for i in 0..pattern.len() {
            for j in 0..pattern.len() {
                if i == j {
                    continue;
                }
                let (x, y) = (pattern.point(i), pattern.point(j));
                let dist = squared_distance(x, y).sqrt();
                if dist > 0.0 && dist <= r {
                    sum.add(edge_weight(correction, window, x, y, r)?);
                }
            }
        }
        values.push(sum.value() / (n * rho * rho));
    }
    Ok(CurveEstimate {
        grid: grid.clone(),
        values,
        statistic: Statistic::K,
        correction,
        rho,
        n,
    })
}
