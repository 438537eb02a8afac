use crate::error::{Error, Result};
use crate::geometry::{squared_distance, CubeWindow, EdgeCorrection};

/// The edge correction factor `e_n(x, y)` for the ordered pair `(x, y)` at
/// radius `r`. Only the border weight uses `r`.
pub fn edge_weight(
    correction: EdgeCorrection,
    window: &CubeWindow,
    x: &[f64],
    y: &[f64],
    r: f64,
) -> Result<f64> {
    correction.validate_dim(window.dim())?;
    match correction {
        EdgeCorrection::None => Ok(1.0),
        EdgeCorrection::Translation => {
            let overlap: f64 = x
                .iter()
                .zip(y)
                .map(|(a, b)| (window.side() - (a - b).abs()).max(0.0))
                .product();
            Ok(window.volume() / overlap)
        }
        EdgeCorrection::RigidMotion => {
            let t = squared_distance(x, y).sqrt();
            Ok(window.volume() / window.rotation_averaged_overlap(t)?)
        }
        EdgeCorrection::Border => {
            let eroded = window.eroded_volume(r);
            if eroded <= 0.0 {
                return Err(Error::WindowTooSmall { r });
            }
            if window.boundary_distance(x) >= r {
                Ok(window.volume() / eroded)
            } else {
                Ok(0.0)
            }
        }
        EdgeCorrection::Isotropic => {
            let t = squared_distance(x, y).sqrt();
            Ok(1.0 / window.arc_fraction_inside(x, t)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weight_examples() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        let e = edge_weight(EdgeCorrection::Translation, &w, &[1.0, 0.0], &[0.0, 0.0], 1.0).unwrap();
        assert!((e - 10.0 / 9.0).abs() < 1e-15);
        let e = edge_weight(EdgeCorrection::None, &w, &[3.0, 1.0], &[-4.0, 2.0], 0.5).unwrap();
        assert_eq!(e, 1.0);
        let e = edge_weight(EdgeCorrection::Border, &w, &[0.0, 0.0], &[0.5, 0.0], 1.0).unwrap();
        assert_eq!(e, 1.5625);
        let e = edge_weight(EdgeCorrection::Border, &w, &[4.5, 0.0], &[4.0, 0.0], 1.0).unwrap();
        assert_eq!(e, 0.0);
        assert!(matches!(
            edge_weight(EdgeCorrection::Border, &w, &[0.0, 0.0], &[0.5, 0.0], 5.0),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn corrected_weights_at_least_one() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        let pairs = [
            ([4.0, 4.0], [2.0, 3.5]),
            ([-4.9, 0.0], [-4.0, 0.3]),
            ([0.0, 0.0], [0.1, 0.0]),
        ];
        for (x, y) in pairs {
            for c in [
                EdgeCorrection::Translation,
                EdgeCorrection::RigidMotion,
                EdgeCorrection::Isotropic,
            ] {
                let e = edge_weight(c, &w, &x, &y, 1.0).unwrap();
                assert!(e >= 1.0, "{c}: {e}");
            }
        }
    }

    #[test]
    fn isotropic_near_edge() {
        let w = CubeWindow::new(2, 100.0).unwrap();
        // Circle about (4.5, 0) through (3.5, 0) has radius 1: 2/3 inside.
        let e = edge_weight(EdgeCorrection::Isotropic, &w, &[4.5, 0.0], &[3.5, 0.0], 1.0).unwrap();
        assert!((e - 1.5).abs() < 1e-13);
    }
}
