use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::CubeWindow;

/// Points closer than this multiple of the window side count as coincident.
pub const DUPLICATE_TOLERANCE: f64 = 1e-12;

/// A finite simple point set observed in a [`CubeWindow`].
///
/// Coordinates are stored flat, `d` values per point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointPattern {
    window: CubeWindow,
    coords: Vec<f64>,
}

impl PointPattern {
    /// Validates that every point lies in the closed window and that no two
    /// points coincide.
    pub fn new(window: CubeWindow, coords: Vec<f64>) -> Result<Self> {
        let d = window.dim();
        if !coords.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: coords.len() % d,
            });
        }
        for (i, p) in coords.chunks_exact(d).enumerate() {
            if p.iter().any(|c| !c.is_finite()) || !window.contains(p) {
                return Err(Error::PointOutsideWindow { index: i });
            }
        }
        let pattern = Self { window, coords };
        pattern.check_simple()?;
        Ok(pattern)
    }

    pub fn empty(window: CubeWindow) -> Self {
        Self {
            window,
            coords: Vec::new(),
        }
    }

    pub fn from_points<const D: usize>(window: CubeWindow, points: &[[f64; D]]) -> Result<Self> {
        if D != window.dim() {
            return Err(Error::DimensionMismatch {
                expected: window.dim(),
                got: D,
            });
        }
        Self::new(window, points.iter().flatten().copied().collect())
    }

    fn check_simple(&self) -> Result<()> {
        let d = self.dim();
        let tol = DUPLICATE_TOLERANCE * self.window.side();
        let tol2 = tol * tol;
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.coords[a * d].total_cmp(&self.coords[b * d]));
        for (k, &i) in order.iter().enumerate() {
            let p = self.point(i);
            for &j in &order[k + 1..] {
                let q = self.point(j);
                if q[0] - p[0] > tol {
                    break;
                }
                if squared_distance(p, q) <= tol2 {
                    return Err(Error::DuplicatePoint {
                        first: i.min(j),
                        second: i.max(j),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn window(&self) -> &CubeWindow {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim())
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Smallest pairwise distance, `None` for fewer than two points.
    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                let dist = squared_distance(self.point(i), self.point(j)).sqrt();
                best = Some(best.map_or(dist, |b| b.min(dist)));
            }
        }
        best
    }

    /// Writes the `# d=<d> n=<n>` header followed by one point per line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "# d={} n={}", self.dim(), self.window.volume())?;
        for p in self.points() {
            let line: Vec<String> = p.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }

    /// Reads a pattern written by [`PointPattern::write_csv`]. A header entry
    /// `origin=corner` marks data given on `[0, L]^d`; those points are shifted
    /// onto the centered window.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut volume: Option<f64> = None;
        let mut corner = false;
        let mut coords = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                for token in header.split_whitespace() {
                    let Some((key, value)) = token.split_once('=') else {
                        continue;
                    };
                    match key {
                        "d" => dim = Some(parse_field(value, lineno)?),
                        "n" => volume = Some(parse_field(value, lineno)?),
                        "origin" => match value {
                            "corner" => corner = true,
                            "center" => corner = false,
                            other => {
                                return Err(Error::Parse(format!(
                                    "line {}: unknown origin '{other}'",
                                    lineno + 1
                                )))
                            }
                        },
                        _ => {}
                    }
                }
                continue;
            }
            let d = dim.ok_or_else(|| Error::Parse("missing '# d=<d> n=<n>' header".into()))?;
            let before = coords.len();
            for field in line.split(',') {
                coords.push(parse_field::<f64>(field.trim(), lineno)?);
            }
            if coords.len() - before != d {
                return Err(Error::Parse(format!(
                    "line {}: expected {d} coordinates, got {}",
                    lineno + 1,
                    coords.len() - before
                )));
            }
        }
        let d = dim.ok_or_else(|| Error::Parse("missing '# d=<d> n=<n>' header".into()))?;
        let n = volume.ok_or_else(|| Error::Parse("header lacks window volume n".into()))?;
        let window = CubeWindow::new(d, n)?;
        if corner {
            let h = window.half_side();
            coords.iter_mut().for_each(|c| *c -= h);
        }
        Self::new(window, coords)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, lineno: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {}: cannot parse '{s}'", lineno + 1)))
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w100() -> CubeWindow {
        CubeWindow::new(2, 100.0).unwrap()
    }

    #[test]
    fn rejects_points_outside() {
        let err = PointPattern::from_points(w100(), &[[0.0, 0.0], [5.5, 0.0]]).unwrap_err();
        assert!(matches!(err, Error::PointOutsideWindow { index: 1 }));
        // Boundary is part of the closed window.
        assert!(PointPattern::from_points(w100(), &[[5.0, -5.0]]).is_ok());
    }

    #[test]
    fn rejects_duplicates() {
        let err =
            PointPattern::from_points(w100(), &[[1.0, 1.0], [0.0, 0.0], [1.0, 1.0 + 1e-13]]).unwrap_err();
        assert!(matches!(err, Error::DuplicatePoint { first: 0, second: 2 }));
        assert!(PointPattern::from_points(w100(), &[[1.0, 1.0], [1.0, 1.0 + 1e-9]]).is_ok());
    }

    #[test]
    fn csv_roundtrip_and_header() {
        let p = PointPattern::from_points(w100(), &[[0.1, -2.5], [4.999, 3.0]]).unwrap();
        let text = p.to_csv_string();
        assert!(text.starts_with("# d=2 n=100\n"));
        let back = PointPattern::read_csv(text.as_bytes()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn csv_corner_origin_is_centered() {
        let text = "# d=2 n=100 origin=corner\n0,0\n10,10\n2.5,7.5\n";
        let p = PointPattern::read_csv(text.as_bytes()).unwrap();
        assert_eq!(p.point(0), &[-5.0, -5.0]);
        assert_eq!(p.point(1), &[5.0, 5.0]);
        assert_eq!(p.point(2), &[-2.5, 2.5]);
    }

    #[test]
    fn csv_errors() {
        assert!(PointPattern::read_csv("1,2\n".as_bytes()).is_err());
        assert!(PointPattern::read_csv("# d=2 n=100\n1,2,3\n".as_bytes()).is_err());
        assert!(PointPattern::read_csv("# d=2 n=100\n1,x\n".as_bytes()).is_err());
    }
}
