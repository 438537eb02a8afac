//! End-to-end acceptance checks. Runs as a plain binary (`harness = false`)
//! and prints one PASS/FAIL line per criterion. Set `KCLT_ACCEPTANCE=3,5`
//! to run a subset.

use std::f64::consts::PI;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;

use kclt::estimators::{brute_force_k, estimate_k};
use kclt::gibbs::{
    clan_tail_probe_to, min_enclosing_circle, GibbsModel, Interaction, PairPotential, PerfectSampler,
};
use kclt::harness::{run_rejection_experiment, CellStatus, ExperimentSettings, ExperimentSpec};
use kclt::limit::{
    estimate_quantile, monte_carlo_limit, poisson_limit_covariance, sample_sup_statistics, GaussianPaths,
    LimitModel, Provenance,
};
use kclt::models::ModelSpec;
use kclt::samplers::sample_poisson;
use kclt::stats::{anderson_darling_normal, ks_two_sample};
use kclt::{CubeWindow, EdgeCorrection, PointPattern, RGrid, Result, RngSeed};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        pass,
        detail: detail.into(),
    })
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn k_curves(
    window: &CubeWindow,
    grid: &RGrid,
    correction: EdgeCorrection,
    reps: u64,
    seed: RngSeed,
) -> Result<Vec<Vec<f64>>> {
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let p = sample_poisson(window, 1.0, seed.derive(&[rep]))?;
            Ok(estimate_k(&p, 1.0, grid, correction)?.values)
        })
        .collect()
}

/// Fast estimator against the literal double sum.
fn oracle_equivalence() -> Result<Outcome> {
    let mut rng = RngSeed::new(101, 0).rng();
    let mut worst = 0.0f64;
    let mut largest = 0;
    for rep in 0..200u64 {
        let volume = rng.random_range(20.0..450.0);
        let window = CubeWindow::new(2, volume)?;
        let mut p = sample_poisson(&window, 1.0, RngSeed::new(102, rep))?;
        if p.len() > 500 {
            p = PointPattern::new(window, p.coords()[..1000].to_vec())?;
        }
        largest = largest.max(p.len());
        let r_max = (0.45 * window.side()).min(2.5);
        let grid = RGrid::up_to(r_max, 0.1)?;
        for c in EdgeCorrection::ALL {
            let fast = estimate_k(&p, 1.0, &grid, c)?;
            let slow = brute_force_k(&p, 1.0, &grid, c)?;
            for (a, b) in fast.values.iter().zip(&slow.values) {
                worst = worst.max((a - b).abs());
            }
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max |fast - brute| = {worst:.2e} over 200 patterns, N <= {largest}"),
    )
}

/// Translation and border estimators are unbiased for a Poisson process.
fn unbiasedness() -> Result<Outcome> {
    let window = CubeWindow::new(2, 2500.0)?;
    let grid = RGrid::up_to(2.0, 0.5)?;
    let mut pass = true;
    let mut parts = Vec::new();
    for c in [EdgeCorrection::Translation, EdgeCorrection::Border] {
        let curves = k_curves(&window, &grid, c, 2000, RngSeed::new(2, c as u64))?;
        for i in [1, 2, 4] {
            let r = grid.values()[i];
            let xs: Vec<f64> = curves.iter().map(|v| v[i]).collect();
            let (m, se) = mean_se(&xs);
            let z = (m - PI * r * r) / se;
            pass &= z.abs() <= 3.0;
            parts.push(format!("{c} r={r}: z={z:+.2}"));
        }
    }
    outcome(pass, parts.join(", "))
}

/// The uncorrected estimator's bias halves when the side length doubles.
fn bias_decay() -> Result<Outcome> {
    let grid = RGrid::from_values(vec![1.0])?;
    let mut gaps = Vec::new();
    for (i, side) in [25.0f64, 50.0, 100.0].into_iter().enumerate() {
        let window = CubeWindow::new(2, side * side)?;
        let curves = k_curves(
            &window,
            &grid,
            EdgeCorrection::None,
            5000,
            RngSeed::new(3, i as u64),
        )?;
        let xs: Vec<f64> = curves.iter().map(|v| v[0]).collect();
        let (m, se) = mean_se(&xs);
        gaps.push((PI - m, se));
    }
    let r1 = gaps[1].0 / gaps[0].0;
    let r2 = gaps[2].0 / gaps[1].0;
    let pass = gaps[0].0 > gaps[1].0
        && gaps[1].0 > gaps[2].0
        && (r1 - 0.5).abs() <= 0.15
        && (r2 - 0.5).abs() <= 0.15;
    outcome(
        pass,
        format!(
            "gaps {:.4}±{:.4}, {:.4}±{:.4}, {:.4}±{:.4}; ratios {r1:.3}, {r2:.3}",
            gaps[0].0, gaps[0].1, gaps[1].0, gaps[1].1, gaps[2].0, gaps[2].1
        ),
    )
}

/// Simulated limit covariance against the closed form.
fn poisson_covariance() -> Result<Outcome> {
    let window = CubeWindow::new(2, 10_000.0)?;
    let grid = RGrid::study(2.0)?;
    let lm = monte_carlo_limit(
        &ModelSpec::poisson(1.0),
        &window,
        &grid,
        EdgeCorrection::Border,
        1.0,
        2000,
        RngSeed::new(4, 0),
    )?;
    let c11 = lm.covariance()[(10, 10)];
    let c12 = lm.covariance()[(10, 20)];
    let e11 = poisson_limit_covariance(2, 1.0, 1.0, 1.0)?;
    let e12 = poisson_limit_covariance(2, 1.0, 2.0, 1.0)?;
    let d11 = (c11 - e11) / e11;
    let d12 = (c12 - e12) / e12;
    outcome(
        d11.abs() <= 0.10 && d12.abs() <= 0.10,
        format!(
            "C(1,1) = {c11:.2} vs {e11:.2} ({:+.1}%), C(1,2) = {c12:.2} vs {e12:.2} ({:+.1}%)",
            100.0 * d11,
            100.0 * d12
        ),
    )
}

/// Marginal normality of the scaled estimator.
fn marginal_normality() -> Result<Outcome> {
    let window = CubeWindow::new(2, 10_000.0)?;
    let grid = RGrid::from_values(vec![1.0])?;
    let curves = k_curves(&window, &grid, EdgeCorrection::Border, 2000, RngSeed::new(5, 0))?;
    let c11 = poisson_limit_covariance(2, 1.0, 1.0, 1.0)?;
    let z: Vec<f64> = curves.iter().map(|v| 100.0 * (v[0] - PI) / c11.sqrt()).collect();
    let ad = anderson_darling_normal(&z)?;
    let (m, _) = mean_se(&z);
    outcome(
        ad.passes(0.01),
        format!(
            "A*^2 = {:.3} (1% critical 1.035), p = {:.3}, mean z = {m:+.3}",
            ad.adjusted, ad.p_value
        ),
    )
}

fn poisson_spec(windows: Vec<f64>, r_values: Vec<f64>, data: ModelSpec, seed: u64) -> ExperimentSpec {
    ExperimentSpec {
        experiment: ExperimentSettings {
            windows,
            r_values,
            alpha: 0.05,
            replications: 1000,
            quantile_paths: 100_000,
            limit_replications: 1000,
            correction: EdgeCorrection::Border,
            statistic: Default::default(),
            grid_step: 0.1,
            dim: 2,
            seed,
            stream: 0,
            gibbs_volume_cap: 10_000.0,
            parallel_cells: false,
        },
        null: ModelSpec::poisson(1.0),
        data,
    }
}

/// Compares table cells with reference percentages within two binomial SEs.
fn compare_cells(spec: &ExperimentSpec, expected: &[(f64, [f64; 5])]) -> Result<Outcome> {
    let table = run_rejection_experiment(spec)?;
    let reps = spec.experiment.replications as f64;
    let mut pass = true;
    let mut rows = Vec::new();
    for (n, want) in expected {
        let mut cells = Vec::new();
        for (j, &p) in want.iter().enumerate() {
            let r = spec.experiment.r_values[j];
            let cell = table.cell(*n, r).expect("cell present");
            let band = 2.0 * 100.0 * (p / 100.0 * (1.0 - p / 100.0) / reps).sqrt();
            match (&cell.status, cell.rate_percent()) {
                (CellStatus::Ok, Some(got)) => {
                    let ok = (got - p).abs() <= band;
                    pass &= ok;
                    cells.push(format!("{got:.1}{}", if ok { "" } else { "*" }));
                }
                (status, _) => {
                    pass = false;
                    cells.push(format!("[{status}]"));
                }
            }
        }
        let want: Vec<String> = want.iter().map(|p| format!("{p}")).collect();
        rows.push(format!("n={n}: {} (ref {})", cells.join(" "), want.join(" ")));
    }
    outcome(pass, rows.join("; "))
}

/// Null rejection rates for the Poisson test.
fn type_one_calibration() -> Result<Outcome> {
    let spec = poisson_spec(
        vec![40_000.0, 10_000.0],
        vec![1.0, 2.0, 3.0, 4.0, 5.0],
        ModelSpec::poisson(1.0),
        6,
    );
    compare_cells(
        &spec,
        &[
            (40_000.0, [6.8, 5.2, 4.8, 4.8, 4.8]),
            (10_000.0, [7.2, 6.0, 5.8, 5.7, 5.8]),
        ],
    )
}

fn lgcp_rejection(grid_resolution: f64) -> Result<(f64, f64)> {
    let data = ModelSpec::Lgcp {
        sigma2: 0.2,
        scale: 2.0,
        mu: None,
        grid_resolution,
    };
    let spec = poisson_spec(vec![2500.0], vec![1.0], data, 7);
    let table = run_rejection_experiment(&spec)?;
    let cell = &table.cells[0];
    match (cell.rate_percent(), cell.se_percent()) {
        (Some(rate), Some(se)) => Ok((rate, se)),
        _ => Err(kclt::Error::InvalidParameter(format!("cell {}", cell.status))),
    }
}

/// Power of the Poisson test against a clustered alternative. The field is
/// discretised on a 128 x 128 grid over the 50 x 50 window; the coarser
/// one-cell-per-unit default is reported alongside.
fn lgcp_power() -> Result<Outcome> {
    let band = 2.0 * 100.0 * (0.743f64 * 0.257 / 1000.0).sqrt();
    let (got, se) = lgcp_rejection(128.0 / 50.0)?;
    let (coarse, _) = lgcp_rejection(1.0)?;
    outcome(
        (got - 74.3).abs() <= band,
        format!("rejection {got:.1}% (SE {se:.2}) vs 74.3 ± {band:.2}; {coarse:.1}% at one cell per unit"),
    )
}

/// Strauss activity condition and unit intensity of the perfect sampler.
fn strauss_intensity() -> Result<Outcome> {
    let model = GibbsModel::strauss(0.2, 0.4, 1.556)?;
    let lambda = model.branching_mean();
    let window = CubeWindow::new(2, 2500.0)?;
    let sampler = PerfectSampler::new(window, model)?;
    let counts = (0..2000u64)
        .into_par_iter()
        .map(|rep| {
            sampler
                .sample(RngSeed::new(8, rep))
                .map(|(p, _)| p.len() as f64 / 2500.0)
        })
        .collect::<Result<Vec<f64>>>()?;
    let (m, se) = mean_se(&counts);
    outcome(
        lambda < 1.0 && (m - 1.0).abs() <= 0.03,
        format!("lambda = {lambda:.4}, intensity = {m:.4} ± {se:.4}"),
    )
}

/// Tail of ancestor-clan diameters against the branching bound.
fn clan_tail() -> Result<Outcome> {
    let model = GibbsModel::strauss(0.2, 0.4, 1.556)?;
    let tail = clan_tail_probe_to(&model, 20_000, 8, RngSeed::new(9, 0))?;
    let pass = tail
        .rows
        .iter()
        .all(|r| r.empirical_tail <= r.bound + 3.0 * r.std_error);
    let parts: Vec<String> = tail
        .rows
        .iter()
        .map(|r| format!("k={}: {:.4} <= {:.4}", r.k, r.empirical_tail, r.bound))
        .collect();
    outcome(pass, format!("lambda = {:.3}; {}", tail.lambda, parts.join(", ")))
}

/// With beta = 0 the sampler reduces to a Poisson process of intensity tau.
fn zero_beta_reduction() -> Result<Outcome> {
    let window = CubeWindow::new(2, 100.0)?;
    let tau = 1.298;
    let model = GibbsModel::new(
        Interaction::PairPotential(PairPotential::strauss(0.5, 0.4)?),
        tau,
        0.0,
        2,
    )?;
    let sampler = PerfectSampler::new(window, model)?;
    let gibbs = (0..2000u64)
        .into_par_iter()
        .map(|rep| sampler.sample(RngSeed::new(10, rep)).map(|(p, _)| p.len() as f64))
        .collect::<Result<Vec<f64>>>()?;
    let poisson = (0..2000u64)
        .into_par_iter()
        .map(|rep| sample_poisson(&window, tau, RngSeed::new(11, rep)).map(|p| p.len() as f64))
        .collect::<Result<Vec<f64>>>()?;
    let ks = ks_two_sample(&gibbs, &poisson)?;
    let (m, se) = mean_se(&gibbs);
    outcome(
        ks.passes(0.01),
        format!(
            "KS D = {:.4}, p = {:.3}; mean count {m:.2} ± {se:.2} vs {:.1}",
            ks.statistic,
            ks.p_value,
            tau * 100.0
        ),
    )
}

/// Whether some `k` points of `pattern` fit in a disk of radius `radius`.
fn has_k_in_ball(pattern: &PointPattern, radius: f64, k: usize) -> bool {
    let pts: Vec<[f64; 2]> = pattern.points().map(|p| [p[0], p[1]]).collect();
    let close =
        |a: [f64; 2], b: [f64; 2]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt() <= 2.0 * radius;
    fn extend(
        pts: &[[f64; 2]],
        chosen: &mut Vec<[f64; 2]>,
        start: usize,
        k: usize,
        radius: f64,
        close: &dyn Fn([f64; 2], [f64; 2]) -> bool,
    ) -> bool {
        if chosen.len() == k {
            return min_enclosing_circle(chosen).unwrap().radius <= radius;
        }
        for i in start..pts.len() {
            if chosen.iter().all(|&c| close(c, pts[i])) {
                chosen.push(pts[i]);
                if extend(pts, chosen, i + 1, k, radius, close) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    extend(&pts, &mut chosen, 0, k, radius, &close)
}

/// Hard-core and hard-k-ball constraints hold on every sample.
fn structural_invariants() -> Result<Outcome> {
    let hc = PerfectSampler::new(
        CubeWindow::new(2, 400.0)?,
        GibbsModel::new(
            Interaction::PairPotential(PairPotential::hard_core(0.3)?),
            2.0,
            1.0,
            2,
        )?,
    )?;
    let hc_min = (0..500u64)
        .into_par_iter()
        .map(|rep| {
            hc.sample(RngSeed::new(12, rep))
                .map(|(p, _)| p.min_pairwise_distance().unwrap_or(f64::INFINITY))
        })
        .collect::<Result<Vec<f64>>>()?;
    let hc_bad = hc_min.iter().filter(|&&d| d <= 0.3).count();
    let hc_low = hc_min.iter().copied().fold(f64::INFINITY, f64::min);

    let hkb = PerfectSampler::new(
        CubeWindow::new(2, 100.0)?,
        GibbsModel::new(
            Interaction::HardKBall {
                ball_radius: 0.5,
                k: 3,
            },
            0.3,
            1.0,
            2,
        )?,
    )?;
    let hkb_bad = (0..500u64)
        .into_par_iter()
        .map(|rep| {
            hkb.sample(RngSeed::new(13, rep))
                .map(|(p, _)| has_k_in_ball(&p, 0.5, 3) as usize)
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    outcome(
        hc_bad == 0 && hkb_bad == 0,
        format!(
            "hard core r0=0.3: {hc_bad}/500 violations (min distance {hc_low:.4}); hard 3-ball R=0.5: {hkb_bad}/500 violations"
        ),
    )
}

/// Path covariance and half-normal quantile.
fn gaussian_paths() -> Result<Outcome> {
    let lm = LimitModel::poisson(RGrid::study(1.0)?, 1.0)?;
    let cov = lm.covariance();
    let gp = GaussianPaths::new(cov)?;
    let m = 100_000;
    let paths = gp.sample(m, RngSeed::new(14, 0));
    let k = cov.nrows();
    let mut emp = DMatrix::zeros(k, k);
    for col in paths.column_iter() {
        emp += col * col.transpose();
    }
    emp /= m as f64;
    let mut worst = 0.0f64;
    for i in 0..k {
        for j in 0..k {
            if cov[(i, j)] != 0.0 {
                worst = worst.max(((emp[(i, j)] - cov[(i, j)]) / cov[(i, j)]).abs());
            } else {
                worst = worst.max(emp[(i, j)].abs() / cov[(k - 1, k - 1)]);
            }
        }
    }
    let v = 4.0;
    let one = LimitModel::new(
        RGrid::from_values(vec![1.0])?,
        vec![0.0],
        DMatrix::from_element(1, 1, v),
        Provenance::ClosedFormPoisson { rho: 1.0 },
    )?;
    let draws = sample_sup_statistics(&one, 1.0, 100_000, RngSeed::new(14, 1))?;
    let q = estimate_quantile(&draws, 0.05)?;
    let target = 1.959_964 * v.sqrt();
    let dq = (q - target) / target;
    outcome(
        worst <= 0.05 && dq.abs() <= 0.01,
        format!(
            "max relative covariance error {:.2}% on D_1; q95 = {q:.4} vs {target:.4} ({:+.2}%)",
            100.0 * worst,
            100.0 * dq
        ),
    )
}

type Check = fn() -> Result<Outcome>;

fn main() {
    let criteria: [(u32, &str, Check); 12] = [
        (1, "oracle equivalence", oracle_equivalence),
        (2, "unbiasedness", unbiasedness),
        (3, "bias decay", bias_decay),
        (4, "Poisson covariance", poisson_covariance),
        (5, "marginal normality", marginal_normality),
        (6, "type-I calibration", type_one_calibration),
        (7, "LGCP power", lgcp_power),
        (8, "Strauss intensity", strauss_intensity),
        (9, "clan tail", clan_tail),
        (10, "beta=0 reduction", zero_beta_reduction),
        (11, "structural invariants", structural_invariants),
        (12, "Gaussian paths", gaussian_paths),
    ];
    let only: Option<Vec<u32>> = std::env::var("KCLT_ACCEPTANCE")
        .ok()
        .map(|s| s.split(',').filter_map(|t| t.trim().parse().ok()).collect());
    let mut failed = Vec::new();
    for (id, name, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let (pass, detail) = match check() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let secs = start.elapsed().as_secs_f64();
        println!(
            "criterion {id:>2} {name}: {} ({detail}) [{secs:.1}s]",
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all selected criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
