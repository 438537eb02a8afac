//! Smallest enclosing circle of a planar point set (Welzl's incremental form).

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Circle {
    fn from_two(a: [f64; 2], b: [f64; 2]) -> Self {
        let center = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
        Self {
            center,
            radius: dist(center, a).max(dist(center, b)),
        }
    }

    /// Circumcircle, or the widest two-point circle for collinear input.
    fn from_three(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> Self {
        let (bx, by) = (b[0] - a[0], b[1] - a[1]);
        let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
        let d = 2.0 * (bx * cy - by * cx);
        let scale = (bx * bx + by * by).max(cx * cx + cy * cy);
        if d.abs() <= 1e-14 * scale {
            let candidates = [Self::from_two(a, b), Self::from_two(a, c), Self::from_two(b, c)];
            return candidates
                .into_iter()
                .max_by(|p, q| p.radius.total_cmp(&q.radius))
                .expect("three candidates");
        }
        let b2 = bx * bx + by * by;
        let c2 = cx * cx + cy * cy;
        let ux = (cy * b2 - by * c2) / d;
        let uy = (bx * c2 - cx * b2) / d;
        let center = [a[0] + ux, a[1] + uy];
        Self {
            center,
            radius: dist(center, a).max(dist(center, b)).max(dist(center, c)),
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        dist(self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-15
    }
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Smallest circle containing every point. `None` for an empty slice.
pub fn min_enclosing_circle(points: &[[f64; 2]]) -> Option<Circle> {
    let (&first, rest) = points.split_first()?;
    let mut c = Circle {
        center: first,
        radius: 0.0,
    };
    for (i, &p) in rest.iter().enumerate() {
        let i = i + 1;
        if c.contains(p) {
            continue;
        }
        c = Circle {
            center: p,
            radius: 0.0,
        };
        for j in 0..i {
            let q = points[j];
            if c.contains(q) {
                continue;
            }
            c = Circle::from_two(p, q);
            for &s in &points[..j] {
                if !c.contains(s) {
                    c = Circle::from_three(p, q, s);
                }
            }
        }
    }
    Some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert!(min_enclosing_circle(&[]).is_none());
        let c = min_enclosing_circle(&[[1.0, 2.0]]).unwrap();
        assert_eq!(c.radius, 0.0);
        let c = min_enclosing_circle(&[[0.0, 0.0], [2.0, 0.0]]).unwrap();
        assert!((c.radius - 1.0).abs() < 1e-15);
        // Obtuse triangle: the long side is a diameter.
        let c = min_enclosing_circle(&[[0.0, 0.0], [0.5, 0.0], [0.25, 0.1]]).unwrap();
        assert!((c.radius - 0.25).abs() < 1e-12);
        // Equilateral triangle of side 1: circumradius 1/sqrt(3).
        let h = 3f64.sqrt() / 2.0;
        let c = min_enclosing_circle(&[[0.0, 0.0], [1.0, 0.0], [0.5, h]]).unwrap();
        assert!((c.radius - 1.0 / 3f64.sqrt()).abs() < 1e-12);
        // Collinear points.
        let c = min_enclosing_circle(&[[0.0, 0.0], [1.0, 1.0], [3.0, 3.0]]).unwrap();
        assert!((c.radius - 18f64.sqrt() / 2.0).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn encloses_and_is_minimal(pts in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..12)) {
            let pts: Vec<[f64; 2]> = pts.into_iter().map(|(x, y)| [x, y]).collect();
            let c = min_enclosing_circle(&pts).unwrap();
            for &p in &pts {
                prop_assert!(c.contains(p));
            }
            // No smaller circle through any two or three points encloses everything.
            let n = pts.len();
            let mut best = f64::INFINITY;
            for i in 0..n {
                for j in i..n {
                    let cand = Circle::from_two(pts[i], pts[j]);
                    if pts.iter().all(|&p| cand.contains(p)) { best = best.min(cand.radius); }
                    for k in j + 1..n {
                        let cand = Circle::from_three(pts[i], pts[j], pts[k]);
                        if pts.iter().all(|&p| cand.contains(p)) { best = best.min(cand.radius); }
                    }
                }
            }
            prop_assert!(c.radius <= best * (1.0 + 1e-9) + 1e-12);
        }
    }
}
