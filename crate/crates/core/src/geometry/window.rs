use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature nodes used for the rotation average of the window overlap.
pub const DEFAULT_ROTATION_NODES: usize = 720;

/// The cube `[-L/2, L/2]^d` of volume `n = L^d`, centered at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubeWindow {
    dim: usize,
    volume: f64,
    side: f64,
}

impl CubeWindow {
    pub fn new(dim: usize, volume: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("window dimension must be >= 1".into()));
        }
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "window volume must be positive and finite, got {volume}"
            )));
        }
        let side = match dim {
            1 => volume,
            2 => volume.sqrt(),
            3 => volume.cbrt(),
            _ => volume.powf(1.0 / dim as f64),
        };
        Ok(Self { dim, volume, side })
    }

    /// Window with the given side length.
    pub fn with_side(dim: usize, side: f64) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "window side must be positive and finite, got {side}"
            )));
        }
        let mut w = Self::new(dim, side.powi(dim as i32))?;
        w.side = side;
        Ok(w)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn half_side(&self) -> f64 {
        0.5 * self.side
    }

    /// Closed-window membership.
    pub fn contains(&self, p: &[f64]) -> bool {
        let h = self.half_side();
        p.iter().all(|&c| c >= -h && c <= h)
    }

    /// Distance from an interior point to the window boundary.
    pub fn boundary_distance(&self, p: &[f64]) -> f64 {
        let h = self.half_side();
        p.iter().map(|&c| h - c.abs()).fold(f64::INFINITY, f64::min)
    }

    /// `|W ∩ (W + v)|`.
    pub fn overlap_volume(&self, v: &[f64]) -> f64 {
        v.iter().map(|&c| (self.side - c.abs()).max(0.0)).product()
    }

    /// `|W ⊖ B_s(0)|`, the volume of the window eroded by a ball of radius `s`.
    pub fn eroded_volume(&self, s: f64) -> f64 {
        (self.side - 2.0 * s).max(0.0).powi(self.dim as i32)
    }

    /// Fraction of the circle of `radius` about `center` that lies inside the
    /// window. Computed from the exact crossing angles with the four edges.
    pub fn arc_fraction_inside(&self, center: &[f64], radius: f64) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension {
                correction: "isotropic",
                d: self.dim,
            });
        }
        if center.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: center.len(),
            });
        }
        if !self.contains(center) {
            return Err(Error::PointOutsideWindow { index: 0 });
        }
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "circle radius must be positive, got {radius}"
            )));
        }
        let h = self.half_side();
        let (cx, cy) = (center[0], center[1]);
        if radius <= h - cx.abs() && radius <= h - cy.abs() {
            return Ok(1.0);
        }

        let mut angles = Vec::with_capacity(9);
        for edge in [-h, h] {
            let c = (edge - cx) / radius;
            if c.abs() <= 1.0 {
                let a = c.acos();
                angles.push(a);
                angles.push(2.0 * PI - a);
            }
            let s = (edge - cy) / radius;
            if s.abs() <= 1.0 {
                let a = s.asin();
                angles.push(a.rem_euclid(2.0 * PI));
                angles.push((PI - a).rem_euclid(2.0 * PI));
            }
        }
        if angles.is_empty() {
            let inside = self.contains(&[cx + radius, cy]);
            return Ok(if inside { 1.0 } else { 0.0 });
        }
        angles.sort_by(|a, b| a.total_cmp(b));

        let tol = 1e-12 * self.side;
        let mut inside_len = 0.0;
        for (i, &start) in angles.iter().enumerate() {
            let end = if i + 1 < angles.len() {
                angles[i + 1]
            } else {
                angles[0] + 2.0 * PI
            };
            let len = end - start;
            if len <= 0.0 {
                continue;
            }
            let mid = start + 0.5 * len;
            let (px, py) = (cx + radius * mid.cos(), cy + radius * mid.sin());
            if px.abs() <= h + tol && py.abs() <= h + tol {
                inside_len += len;
            }
        }
        Ok((inside_len / (2.0 * PI)).min(1.0))
    }

    /// Rotation average of `|W ∩ (W + η v)|` over planar rotations η, for
    /// `|v| = t`, by the periodic trapezoidal rule on [`DEFAULT_ROTATION_NODES`] nodes.
    pub fn rotation_averaged_overlap(&self, t: f64) -> Result<f64> {
        self.rotation_averaged_overlap_with(t, DEFAULT_ROTATION_NODES)
    }

    pub fn rotation_averaged_overlap_with(&self, t: f64, nodes: usize) -> Result<f64> {
        if self.dim != 2 {
            return Err(Error::UnsupportedDimension {
                correction: "rigid motion",
                d: self.dim,
            });
        }
        if !(t >= 0.0 && t < self.side) {
            return Err(Error::InvalidParameter(format!(
                "shift length must lie in [0, {}), got {t}",
                self.side
            )));
        }
        if nodes == 0 {
            return Err(Error::InvalidParameter(
                "quadrature needs at least one node".into(),
            ));
        }
        let step = 2.0 * PI / nodes as f64;
        let sum: f64 = (0..nodes)
            .map(|k| {
                let (s, c) = (k as f64 * step).sin_cos();
                (self.side - (t * c).abs()).max(0.0) * (self.side - (t * s).abs()).max(0.0)
            })
            .sum();
        Ok(sum / nodes as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w100() -> CubeWindow {
        CubeWindow::new(2, 100.0).unwrap()
    }

    #[test]
    fn side_matches_volume() {
        for (d, n) in [(1, 7.5), (2, 2500.0), (3, 1000.0), (4, 81.0)] {
            let w = CubeWindow::new(d, n).unwrap();
            assert!((w.side().powi(d as i32) - n).abs() <= 1e-12 * n);
        }
        assert!(CubeWindow::new(0, 1.0).is_err());
        assert!(CubeWindow::new(2, 0.0).is_err());
        assert!(CubeWindow::new(2, -1.0).is_err());
    }

    #[test]
    fn overlap_examples() {
        let w = w100();
        assert_eq!(w.overlap_volume(&[0.0, 0.0]), 100.0);
        assert_eq!(w.overlap_volume(&[1.0, 0.0]), 90.0);
        assert_eq!(w.overlap_volume(&[10.0, 0.0]), 0.0);
        assert_eq!(w.overlap_volume(&[12.0, 0.0]), 0.0);
    }

    #[test]
    fn erosion_examples() {
        let w = w100();
        assert_eq!(w.eroded_volume(0.0), 100.0);
        assert_eq!(w.eroded_volume(1.0), 64.0);
        assert_eq!(w.eroded_volume(5.0), 0.0);
        assert_eq!(w.eroded_volume(7.0), 0.0);
    }

    #[test]
    fn arc_fraction_examples() {
        let w = w100();
        assert_eq!(w.arc_fraction_inside(&[0.0, 0.0], 1.0).unwrap(), 1.0);
        assert_eq!(w.arc_fraction_inside(&[0.0, 0.0], 0.001).unwrap(), 1.0);
        let f = w.arc_fraction_inside(&[4.5, 0.0], 1.0).unwrap();
        assert!((f - 2.0 / 3.0).abs() < 1e-14, "{f}");
    }

    #[test]
    fn arc_fraction_corner() {
        // Circle about a corner: exactly a quarter lies inside.
        let w = w100();
        let f = w.arc_fraction_inside(&[5.0, 5.0], 2.0).unwrap();
        assert!((f - 0.25).abs() < 1e-12, "{f}");
        // Center on an edge: half inside.
        let f = w.arc_fraction_inside(&[5.0, 0.0], 2.0).unwrap();
        assert!((f - 0.5).abs() < 1e-12, "{f}");
    }

    #[test]
    fn arc_fraction_rejects() {
        assert!(w100().arc_fraction_inside(&[6.0, 0.0], 1.0).is_err());
        let w3 = CubeWindow::new(3, 1000.0).unwrap();
        assert!(w3.arc_fraction_inside(&[0.0, 0.0, 0.0], 1.0).is_err());
    }

    #[test]
    fn rotation_average_matches_analytic() {
        let w = w100();
        let (l, t) = (10.0_f64, 1.0_f64);
        let exact = l * l - 4.0 * l * t / PI + t * t / PI;
        let q = w.rotation_averaged_overlap(t).unwrap();
        assert!(((q - exact) / exact).abs() < 1e-5, "{q} vs {exact}");
        assert!((exact - 87.585_9).abs() < 1e-4);

        let q2 = w.rotation_averaged_overlap_with(t, 1440).unwrap();
        assert!(((q - q2) / q2).abs() < 1e-6);

        let near_zero = w.rotation_averaged_overlap(1e-9).unwrap();
        assert!((near_zero - 100.0).abs() < 1e-6);
        assert!(w.rotation_averaged_overlap(10.0).is_err());
    }
}
