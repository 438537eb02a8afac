use crate::error::{Error, Result};
use crate::estimators::{check_rho, CurveEstimate, RGrid, Statistic};
use crate::geometry::{EdgeCorrection, PointPattern};
use crate::spatial::CellGrid;

/// Border-corrected nearest-neighbour distribution:
/// `D(r) = 1/(ρ |W ⊖ B_r|) #{x ∈ W ⊖ B_r : some other point within r of x}`.
pub fn estimate_nn(pattern: &PointPattern, rho: f64, grid: &RGrid) -> Result<CurveEstimate> {
    check_rho(rho)?;
    let window = pattern.window();
    if let Some(&r) = grid.values().iter().find(|&&r| window.eroded_volume(r) <= 0.0) {
        return Err(Error::WindowTooSmall { r });
    }
    let radii = grid.values();
    let r_max = grid.max();
    let mut counts = vec![0.0; radii.len() + 1];

    if pattern.len() > 1 {
        let cells = CellGrid::new(pattern, r_max);
        for i in 0..pattern.len() {
            let x = pattern.point(i);
            let mut nearest = f64::INFINITY;
            cells.for_each_within(x, r_max, Some(i), |_, dist| nearest = nearest.min(dist));
            if nearest.is_infinite() {
                continue;
            }
            let first = radii.partition_point(|&r| r < nearest);
            let past = radii.partition_point(|&r| r <= window.boundary_distance(x));
            if past > first {
                counts[first] += 1.0;
                counts[past] -= 1.0;
            }
        }
    }

    let mut acc = 0.0;
    let values = radii
        .iter()
        .zip(&counts)
        .map(|(&r, &c)| {
            acc += c;
            acc / (rho * window.eroded_volume(r))
        })
        .collect();
    Ok(CurveEstimate {
        grid: grid.clone(),
        values,
        statistic: Statistic::NearestNeighbour,
        correction: EdgeCorrection::Border,
        rho,
        n: window.volume(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CubeWindow;

    fn w100() -> CubeWindow {
        CubeWindow::new(2, 100.0).unwrap()
    }

    #[test]
    fn single_point_is_zero() {
        let p = PointPattern::from_points(w100(), &[[0.0, 0.0]]).unwrap();
        let d = estimate_nn(&p, 1.0, &RGrid::study(2.0).unwrap()).unwrap();
        assert!(d.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn two_point_example() {
        let p = PointPattern::from_points(w100(), &[[0.0, 0.0], [1.0, 0.0]]).unwrap();
        let grid = RGrid::from_values(vec![0.5, 2.0]).unwrap();
        let d = estimate_nn(&p, 1.0, &grid).unwrap();
        assert_eq!(d.values[0], 0.0);
        assert!((d.values[1] - 1.0 / 18.0).abs() < 1e-15);
    }

    #[test]
    fn empty_erosion_rejected() {
        let p = PointPattern::empty(w100());
        assert!(matches!(
            estimate_nn(&p, 1.0, &RGrid::study(5.0).unwrap()),
            Err(Error::WindowTooSmall { .. })
        ));
    }
}
