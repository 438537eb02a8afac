use std::f64::consts::PI;

use crate::geometry::{squared_distance, PointPattern};
use crate::gibbs::enclosing::min_enclosing_circle;
use crate::gibbs::model::{GibbsModel, Interaction};

/// Energy increment `Psi(X ∪ {x}) - Psi(X)` for a configuration that itself
/// has finite energy. Only points within the interaction range matter.
pub fn delta_psi(x: &[f64], config: &PointPattern, model: &GibbsModel) -> f64 {
    let neighbors: Vec<&[f64]> = config.points().collect();
    interaction_delta(model.interaction(), x, &neighbors)
}

pub(crate) fn interaction_delta(interaction: &Interaction, x: &[f64], config: &[&[f64]]) -> f64 {
    let range = interaction.range();
    let near = config
        .iter()
        .copied()
        .filter(|y| squared_distance(x, y).sqrt() <= range);
    match interaction {
        Interaction::PairPotential(phi) => {
            let mut total = 0.0;
            for y in near {
                total += phi.value(squared_distance(x, y).sqrt());
                if total.is_infinite() {
                    break;
                }
            }
            total
        }
        Interaction::AreaInteraction {
            disk_radius,
            resolution,
        } => {
            let centres: Vec<&[f64]> = near.collect();
            uncovered_disk_area(x, *disk_radius, *resolution, &centres)
        }
        Interaction::HardKBall { ball_radius, k } => {
            let near: Vec<[f64; 2]> = near.map(|y| [y[0], y[1]]).collect();
            if fits_in_ball([x[0], x[1]], &near, *ball_radius, k - 1) {
                f64::INFINITY
            } else {
                0.0
            }
        }
    }
}

/// Area of the disk about `x` not covered by disks of the same radius about
/// `others`, by counting cell midpoints of a `resolution²` sub-grid on the
/// disk's bounding square. The uncovered fraction of the in-disk midpoints
/// scales the exact disk area.
fn uncovered_disk_area(x: &[f64], radius: f64, resolution: usize, others: &[&[f64]]) -> f64 {
    let full = PI * radius * radius;
    if others.is_empty() {
        return full;
    }
    let r2 = radius * radius;
    let h = 2.0 * radius / resolution as f64;
    let mut inside = 0usize;
    let mut uncovered = 0usize;
    for a in 0..resolution {
        let px = x[0] - radius + (a as f64 + 0.5) * h;
        for b in 0..resolution {
            let py = x[1] - radius + (b as f64 + 0.5) * h;
            if (px - x[0]).powi(2) + (py - x[1]).powi(2) > r2 {
                continue;
            }
            inside += 1;
            let covered = others
                .iter()
                .any(|y| (px - y[0]).powi(2) + (py - y[1]).powi(2) <= r2);
            if !covered {
                uncovered += 1;
            }
        }
    }
    full * uncovered as f64 / inside as f64
}

/// Whether `x` together with some `need` of the `candidates` fits in a ball
/// of `radius`. Candidates farther than `2 radius` from `x` never qualify.
pub(crate) fn fits_in_ball(x: [f64; 2], candidates: &[[f64; 2]], radius: f64, need: usize) -> bool {
    let close: Vec<[f64; 2]> = candidates
        .iter()
        .copied()
        .filter(|y| ((y[0] - x[0]).powi(2) + (y[1] - x[1]).powi(2)).sqrt() <= 2.0 * radius)
        .collect();
    if close.len() < need {
        return false;
    }
    let mut subset = Vec::with_capacity(need + 1);
    subset.push(x);
    search_subsets(&close, 0, need, radius, &mut subset)
}

fn search_subsets(
    pool: &[[f64; 2]],
    start: usize,
    need: usize,
    radius: f64,
    subset: &mut Vec<[f64; 2]>,
) -> bool {
    if need == 0 {
        let c = min_enclosing_circle(subset).expect("subset holds x");
        return c.radius <= radius * (1.0 + 1e-12);
    }
    for i in start..=pool.len() - need {
        let p = pool[i];
        // Every pair in a feasible subset is within one diameter.
        if subset
            .iter()
            .any(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt() > 2.0 * radius)
        {
            continue;
        }
        subset.push(p);
        let found = search_subsets(pool, i + 1, need - 1, radius, subset);
        subset.pop();
        if found {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CubeWindow;
    use crate::gibbs::model::{PairPotential, DEFAULT_AREA_RESOLUTION};

    fn w() -> CubeWindow {
        CubeWindow::new(2, 100.0).unwrap()
    }

    #[test]
    fn strauss_two_neighbours() {
        let model = GibbsModel::new(
            Interaction::PairPotential(PairPotential::strauss(0.5, 0.4).unwrap()),
            1.0,
            1.0,
            2,
        )
        .unwrap();
        let config =
            PointPattern::from_points(w(), &[[0.3, 0.0], [0.0, -0.35], [0.5, 0.5], [2.0, 2.0]]).unwrap();
        let delta = delta_psi(&[0.0, 0.0], &config, &model);
        assert!((delta - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!((model.acceptance(delta) - 0.25).abs() < 1e-12);
    }

    #[test]
    fn area_interaction_empty_and_covered() {
        let model = GibbsModel::new(
            Interaction::AreaInteraction {
                disk_radius: 0.3,
                resolution: DEFAULT_AREA_RESOLUTION,
            },
            0.5,
            1.0,
            2,
        )
        .unwrap();
        let empty = PointPattern::empty(w());
        assert_eq!(delta_psi(&[0.0, 0.0], &empty, &model), PI * 0.09);
        // A disk at the same location leaves nothing uncovered.
        let same = PointPattern::from_points(w(), &[[0.0, 0.0]]).unwrap();
        assert_eq!(delta_psi(&[0.0, 0.0], &same, &model), 0.0);
        // Two unit disks at distance 1 overlap in 2π/3 - √3/2.
        let unit = GibbsModel::new(
            Interaction::AreaInteraction {
                disk_radius: 1.0,
                resolution: 256,
            },
            0.05,
            1.0,
            2,
        )
        .unwrap();
        let one = PointPattern::from_points(w(), &[[1.0, 0.0]]).unwrap();
        let lens = 2.0 * PI / 3.0 - 3f64.sqrt() / 2.0;
        let got = delta_psi(&[0.0, 0.0], &one, &unit);
        assert!((got - (PI - lens)).abs() < 0.02, "{got}");
    }

    #[test]
    fn hard_k_ball_example() {
        let model = GibbsModel::new(
            Interaction::HardKBall {
                ball_radius: 1.0,
                k: 3,
            },
            0.05,
            1.0,
            2,
        )
        .unwrap();
        let config = PointPattern::from_points(w(), &[[0.0, 0.0], [0.5, 0.0]]).unwrap();
        assert_eq!(delta_psi(&[0.25, 0.1], &config, &model), f64::INFINITY);
        // Far from the pair there is no ball of radius 1 holding three points.
        assert_eq!(delta_psi(&[3.0, 0.0], &config, &model), 0.0);
        // An equilateral triple of side 1.8 has circumradius ≈ 1.039 > 1.
        let h = 1.8 * 3f64.sqrt() / 2.0;
        let tri = PointPattern::from_points(w(), &[[0.0, 0.0], [1.8, 0.0]]).unwrap();
        assert_eq!(delta_psi(&[0.9, h], &tri, &model), 0.0);
    }
}
