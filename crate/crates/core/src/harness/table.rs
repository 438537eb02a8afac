use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimators::{estimate_k, CurveEstimate, RGrid};
use crate::geometry::CubeWindow;
use crate::harness::config::ExperimentSpec;
use crate::limit::{null_limit, GofTester};
use crate::models::ModelSpec;
use crate::rng::RngSeed;

const TAG_LIMIT: u64 = 0x004c_494d_4954;
const TAG_QUANTILE: u64 = 0x0051_5541_4e54;
const TAG_DATA: u64 = 0x4441_5441;

#[derive(Debug, Clone, PartialEq)]
pub enum CellStatus {
    Ok,
    Failed(String),
    /// Not run, for example a Gibbs model above the volume cap.
    Skipped(String),
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CellStatus::Ok => f.write_str("ok"),
            CellStatus::Failed(m) => write!(f, "failed: {m}"),
            CellStatus::Skipped(m) => write!(f, "skipped: {m}"),
        }
    }
}

/// One `(n, R)` entry of a rejection table.
#[derive(Debug, Clone, PartialEq)]
pub struct RejectionCell {
    pub n: f64,
    pub r_max: f64,
    pub replications: usize,
    pub rejections: usize,
    pub status: CellStatus,
}

impl RejectionCell {
    /// Rejection percentage; `None` unless the cell ran.
    pub fn rate_percent(&self) -> Option<f64> {
        (self.status == CellStatus::Ok).then(|| 100.0 * self.rejections as f64 / self.replications as f64)
    }

    /// Binomial standard error of the percentage.
    pub fn se_percent(&self) -> Option<f64> {
        self.rate_percent().map(|r| {
            let p = r / 100.0;
            100.0 * (p * (1.0 - p) / self.replications as f64).sqrt()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RejectionTable {
    pub spec: ExperimentSpec,
    pub cells: Vec<RejectionCell>,
}

impl RejectionTable {
    pub fn cell(&self, n: f64, r_max: f64) -> Option<&RejectionCell> {
        self.cells
            .iter()
            .find(|c| (c.n - n).abs() < 1e-9 * n && (c.r_max - r_max).abs() < 1e-9)
    }

    /// Long-format CSV with `#` metadata lines echoing the spec.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let e = &self.spec.experiment;
        writeln!(out, "# null={}", self.spec.null)?;
        writeln!(out, "# data={}", self.spec.data)?;
        writeln!(
            out,
            "# alpha={} replications={} quantile_paths={} correction={} statistic={} seed={} stream={}",
            e.alpha, e.replications, e.quantile_paths, e.correction, e.statistic, e.seed, e.stream
        )?;
        writeln!(out, "n,R,reps,rejections,rate_percent,se_percent,status")?;
        for c in &self.cells {
            let fmt_opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |x| format!("{x:.2}"));
            let status = c.status.to_string().replace([',', '\n'], ";");
            let rejections = if c.status == CellStatus::Ok {
                c.rejections.to_string()
            } else {
                "NA".into()
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                c.n,
                c.r_max,
                c.replications,
                rejections,
                fmt_opt(c.rate_percent()),
                fmt_opt(c.se_percent()),
                status
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

fn is_gibbs(m: &ModelSpec) -> bool {
    !matches!(
        m,
        ModelSpec::Poisson { .. } | ModelSpec::Lgcp { .. } | ModelSpec::Matern { .. }
    )
}

/// Rejection rates of the test of `spec.null` on patterns drawn from
/// `spec.data`, for every window volume and radius interval.
///
/// Patterns for window `n` and replicate `i` come from stream
/// `derive([DATA, n, i])` and are shared by all `R` of that window; each
/// `(n, R)` quantile has its own stream. An error in one cell is recorded
/// in that cell only.
pub fn run_rejection_experiment(spec: &ExperimentSpec) -> Result<RejectionTable> {
    spec.validate()?;
    let e = &spec.experiment;
    let seed = spec.seed();
    let r_top = e.r_values.iter().copied().fold(0.0, f64::max);
    let grid = RGrid::up_to(r_top, e.grid_step)?;
    let rho = spec
        .null
        .intensity()
        .ok_or_else(|| Error::InvalidParameter("null model intensity must be known".into()))?;
    let mut cells = Vec::new();
    for &n in &e.windows {
        let n_tag = n.to_bits();
        let run_all = |status: CellStatus| {
            e.r_values
                .iter()
                .map(|&r| RejectionCell {
                    n,
                    r_max: r,
                    replications: e.replications,
                    rejections: 0,
                    status: status.clone(),
                })
                .collect::<Vec<_>>()
        };
        if (is_gibbs(&spec.null) || is_gibbs(&spec.data)) && n > e.gibbs_volume_cap {
            cells.extend(run_all(CellStatus::Skipped(format!(
                "Gibbs model above volume cap {}",
                e.gibbs_volume_cap
            ))));
            continue;
        }
        let window = match CubeWindow::new(e.dim, n) {
            Ok(w) => w,
            Err(err) => {
                cells.extend(run_all(CellStatus::Failed(err.to_string())));
                continue;
            }
        };
        let limit = null_limit(
            &spec.null,
            &window,
            &grid,
            e.correction,
            e.limit_replications,
            seed.derive(&[TAG_LIMIT, n_tag]),
        );
        let limit = match limit {
            Ok(l) => l,
            Err(err) => {
                cells.extend(run_all(CellStatus::Failed(format!("null limit: {err}"))));
                continue;
            }
        };
        let make_tester = |&r: &f64| {
            GofTester::new(
                &limit,
                e.alpha,
                r,
                e.statistic,
                e.quantile_paths,
                seed.derive(&[TAG_QUANTILE, n_tag, r.to_bits()]),
            )
        };
        let testers: Vec<Result<GofTester>> = if e.parallel_cells {
            e.r_values.par_iter().map(make_tester).collect()
        } else {
            e.r_values.iter().map(make_tester).collect()
        };
        let curves: Result<Vec<CurveEstimate>> = spec.data.prepare(&window).and_then(|data| {
            (0..e.replications as u64)
                .into_par_iter()
                .map(|rep| {
                    let pattern = data.sample(seed.derive(&[TAG_DATA, n_tag, rep]))?;
                    estimate_k(&pattern, rho, &grid, e.correction)
                })
                .collect()
        });
        for (&r, tester) in e.r_values.iter().zip(testers) {
            let status_and_count = match (&curves, tester) {
                (Err(err), _) => (CellStatus::Failed(format!("data: {err}")), 0),
                (_, Err(err)) => (CellStatus::Failed(format!("quantile: {err}")), 0),
                (Ok(curves), Ok(t)) => {
                    let mut rejections = 0;
                    let mut failure = None;
                    for c in curves {
                        match t.test_curve(c) {
                            Ok(res) => rejections += res.reject as usize,
                            Err(err) => {
                                failure = Some(err);
                                break;
                            }
                        }
                    }
                    match failure {
                        Some(err) => (CellStatus::Failed(err.to_string()), 0),
                        None => (CellStatus::Ok, rejections),
                    }
                }
            };
            cells.push(RejectionCell {
                n,
                r_max: r,
                replications: e.replications,
                rejections: status_and_count.1,
                status: status_and_count.0,
            });
        }
    }
    Ok(RejectionTable {
        spec: spec.clone(),
        cells,
    })
}

/// Common pattern stream for tests that reproduce the harness draws.
pub fn data_seed(spec: &ExperimentSpec, n: f64, replicate: u64) -> RngSeed {
    spec.seed().derive(&[TAG_DATA, n.to_bits(), replicate])
}
