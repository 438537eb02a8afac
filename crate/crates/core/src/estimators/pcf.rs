use crate::error::{Error, Result};
use crate::estimators::{check_rho, edge_weight, unit_ball_volume, CurveEstimate, RGrid, Statistic};
use crate::geometry::{EdgeCorrection, PointPattern};
use crate::spatial::CellGrid;

pub const DEFAULT_BANDWIDTH: f64 = 0.2;

/// The C¹ Epanechnikov-type kernel `3/(4δ) (1 - (t/δ)²)` on `[-δ, δ)`.
pub fn epanechnikov(t: f64, delta: f64) -> f64 {
    if t >= -delta && t < delta {
        let u = t / delta;
        0.75 / delta * (1.0 - u * u)
    } else {
        0.0
    }
}

/// Kernel estimate of the pair-correlation function with translation weights:
/// `g(r) = 1/(n d κ_d r^{d-1} ρ²) Σ_{x≠y} k(r - |x - y|) e₂(x, y)`.
pub fn estimate_pcf(pattern: &PointPattern, rho: f64, grid: &RGrid, delta: f64) -> Result<CurveEstimate> {
    check_rho(rho)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive, got {delta}"
        )));
    }
    if let Some(&r) = grid.values().iter().find(|&&r| r - delta <= 0.0) {
        return Err(Error::BandwidthTooLarge { r, delta });
    }
    let window = pattern.window();
    let d = pattern.dim();
    let n = window.volume();
    let radii = grid.values();
    let reach = grid.max() + delta;
    if reach >= window.side() {
        return Err(Error::InvalidParameter(
            "largest radius plus bandwidth must stay below the window side".into(),
        ));
    }
    let mut sums = vec![0.0; radii.len()];

    if pattern.len() > 1 {
        let cells = CellGrid::new(pattern, reach);
        for i in 0..pattern.len() {
            let x = pattern.point(i);
            cells.for_each_within(x, reach, Some(i), |j, dist| {
                // k(r - dist) is nonzero for r in [dist - δ, dist + δ).
                let lo = radii.partition_point(|&r| r < dist - delta);
                let hi = radii.partition_point(|&r| r < dist + delta);
                if lo >= hi {
                    return;
                }
                let e = edge_weight(EdgeCorrection::Translation, window, x, pattern.point(j), 0.0)
                    .expect("translation weight is defined for every pair in the window");
                for (r, s) in radii[lo..hi].iter().zip(&mut sums[lo..hi]) {
                    *s += epanechnikov(r - dist, delta) * e;
                }
            });
        }
    }

    let surface = d as f64 * unit_ball_volume(d);
    let values = radii
        .iter()
        .zip(&sums)
        .map(|(&r, &s)| s / (n * surface * r.powi(d as i32 - 1) * rho * rho))
        .collect();
    Ok(CurveEstimate {
        grid: grid.clone(),
        values,
        statistic: Statistic::Pcf,
        correction: EdgeCorrection::Translation,
        rho,
        n,
    })
}
