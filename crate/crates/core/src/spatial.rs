//! Uniform cell grid for fixed-radius neighbour search inside a cube window.

use crate::geometry::{squared_distance, PointPattern};

/// Points bucketed into cubic cells of side at least the search radius, so a
/// radius query only visits the `3^d` cells around the query cell.
#[derive(Debug, Clone)]
pub struct CellGrid<'a> {
    pattern: &'a PointPattern,
    cells_per_axis: usize,
    cell_side: f64,
    cell_start: Vec<usize>,
    members: Vec<usize>,
}

impl<'a> CellGrid<'a> {
    pub fn new(pattern: &'a PointPattern, radius: f64) -> Self {
        let d = pattern.dim();
        let side = pattern.window().side();
        let mut m = if radius > 0.0 {
            (side / radius).floor().max(1.0) as usize
        } else {
            1
        };
        // Keep the cell count proportional to the number of points.
        let cap = 4 * pattern.len() + 16;
        while m > 1 && (m as f64).powi(d as i32) > cap as f64 {
            m = ((m as f64) / 2.0).floor() as usize;
        }
        let m = m.max(1);
        let ncells = m.pow(d as u32);
        let cell_side = side / m as f64;

        let mut grid = Self {
            pattern,
            cells_per_axis: m,
            cell_side,
            cell_start: vec![0; ncells + 1],
            members: vec![0; pattern.len()],
        };
        let keys: Vec<usize> = pattern.points().map(|p| grid.cell_of(p)).collect();
        for &k in &keys {
            grid.cell_start[k + 1] += 1;
        }
        for c in 0..ncells {
            grid.cell_start[c + 1] += grid.cell_start[c];
        }
        let mut fill = grid.cell_start.clone();
        for (i, &k) in keys.iter().enumerate() {
            grid.members[fill[k]] = i;
            fill[k] += 1;
        }
        grid
    }

    fn axis_cell(&self, c: f64) -> usize {
        let h = 0.5 * self.cell_side * self.cells_per_axis as f64;
        let idx = ((c + h) / self.cell_side).floor();
        (idx.max(0.0) as usize).min(self.cells_per_axis - 1)
    }

    fn cell_of(&self, p: &[f64]) -> usize {
        p.iter()
            .rev()
            .fold(0, |acc, &c| acc * self.cells_per_axis + self.axis_cell(c))
    }

    /// Calls `f(j, distance)` for every point `j` with `|p - x_j| <= radius`,
    /// `j != skip`. The radius must not exceed the build radius.
    pub fn for_each_within<F: FnMut(usize, f64)>(
        &self,
        p: &[f64],
        radius: f64,
        skip: Option<usize>,
        mut f: F,
    ) {
        let d = p.len();
        let m = self.cells_per_axis as isize;
        let base: Vec<isize> = p.iter().map(|&c| self.axis_cell(c) as isize).collect();
        let noffsets = 3usize.pow(d as u32);
        'offsets: for code in 0..noffsets {
            let mut rem = code;
            let mut cell = 0usize;
            let mut stride = 1usize;
            for &b in &base {
                let c = b + (rem % 3) as isize - 1;
                rem /= 3;
                if c < 0 || c >= m {
                    continue 'offsets;
                }
                cell += c as usize * stride;
                stride *= self.cells_per_axis;
            }
            for &j in &self.members[self.cell_start[cell]..self.cell_start[cell + 1]] {
                if Some(j) == skip {
                    continue;
                }
                let dist = squared_distance(p, self.pattern.point(j)).sqrt();
                if dist <= radius {
                    f(j, dist);
                }
            }
        }
    }
}
