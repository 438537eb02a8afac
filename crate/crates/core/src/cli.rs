//! Command-line front end. Exit codes: 0 success, 1 runtime error, 2 usage
//! error.

use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::estimators::{estimate_k, estimate_nn, estimate_pcf, RGrid, Statistic, DEFAULT_BANDWIDTH};
use crate::geometry::{CubeWindow, EdgeCorrection, PointPattern};
use crate::gibbs::clan_tail_probe_to;
use crate::harness::{
    calibrate_strauss_activity, configure_workers_from_env, run_rejection_experiment, ExperimentSpec,
};
use crate::limit::{null_limit, GofTester, LimitModel, StatisticKind, DEFAULT_QUANTILE_PATHS};
use crate::models::ModelSpec;
use crate::rng::RngSeed;

#[derive(Debug, Parser)]
#[command(
    name = "kclt",
    version,
    about = "Point-process simulation and K-function goodness-of-fit tests"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a pattern and write it as CSV.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        /// Window volume.
        #[arg(long)]
        n: f64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Estimate K, the pair correlation or the nearest-neighbour function.
    Estimate {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long, default_value = "K")]
        statistic: Statistic,
        #[arg(long, default_value = "border")]
        correction: EdgeCorrection,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Kernel half-width for the pair correlation.
        #[arg(long, default_value_t = DEFAULT_BANDWIDTH)]
        bandwidth: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Compute the null limit (mean and covariance) and save it to a directory.
    Limit {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: f64,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "border")]
        correction: EdgeCorrection,
        /// Replications when the limit is simulated.
        #[arg(long, default_value_t = 1000)]
        replications: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Test a pattern against a saved limit.
    Gof {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        limit: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Upper end of the radius interval.
        #[arg(long = "r-max")]
        r_max: f64,
        #[arg(long, default_value = "sup")]
        kind: StatisticKind,
        #[arg(long, default_value = "border")]
        correction: EdgeCorrection,
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        #[arg(long, default_value_t = DEFAULT_QUANTILE_PATHS)]
        paths: usize,
        #[command(flatten)]
        seed: SeedArgs,
        /// Also print the result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Run a rejection-rate experiment described by a TOML file.
    Table {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Empirical tail of ancestor-clan diameters of a Gibbs model.
    Clanprobe {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 10_000)]
        replications: usize,
        #[arg(long = "max-k", default_value_t = 12)]
        max_k: usize,
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Find the Strauss activity giving a target intensity.
    Calibrate {
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.4)]
        radius: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        target: f64,
        #[arg(long, default_value_t = 400.0)]
        n: f64,
        #[arg(long, default_value_t = 200)]
        replications: usize,
        #[arg(long, default_value_t = 12)]
        iterations: usize,
        #[command(flatten)]
        seed: SeedArgs,
    },
}

#[derive(Debug, Args)]
struct SeedArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    stream: u64,
}

impl SeedArgs {
    fn get(&self) -> RngSeed {
        RngSeed::new(self.seed, self.stream)
    }
}

#[derive(Debug, Args)]
struct GridArgs {
    #[arg(long = "r-max", default_value_t = 2.0)]
    r_max: f64,
    #[arg(long, default_value_t = 0.1)]
    step: f64,
}

impl GridArgs {
    fn get(&self) -> Result<RGrid> {
        RGrid::up_to(self.r_max, self.step)
    }
}

/// Model given either by a TOML file or by `--model` and parameter flags.
#[derive(Debug, Args)]
struct ModelArgs {
    /// poisson, lgcp, matern, strauss, pair, area_interaction or hard_k_ball.
    #[arg(long)]
    model: Option<String>,
    /// TOML file holding a model table.
    #[arg(long = "model-config", conflicts_with = "model")]
    model_config: Option<PathBuf>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long = "grid-resolution")]
    grid_resolution: Option<f64>,
    #[arg(long)]
    kappa: Option<f64>,
    #[arg(long = "mean-offspring")]
    mean_offspring: Option<f64>,
    #[arg(long = "cluster-radius")]
    cluster_radius: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    hardcore: Option<f64>,
    #[arg(long = "disk-radius")]
    disk_radius: Option<f64>,
    #[arg(long = "ball-radius")]
    ball_radius: Option<f64>,
    #[arg(long)]
    k: Option<i64>,
}

impl ModelArgs {
    fn get(&self) -> Result<ModelSpec> {
        if let Some(path) = &self.model_config {
            return toml::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Parse(e.to_string()));
        }
        let Some(name) = &self.model else {
            return Err(Error::InvalidParameter("give --model or --model-config".into()));
        };
        let mut t = toml::Table::new();
        t.insert("model".into(), name.clone().into());
        let floats = [
            ("rho", self.rho),
            ("sigma2", self.sigma2),
            ("scale", self.scale),
            ("mu", self.mu),
            ("grid_resolution", self.grid_resolution),
            ("kappa", self.kappa),
            ("mean_offspring", self.mean_offspring),
            ("cluster_radius", self.cluster_radius),
            ("gamma", self.gamma),
            ("radius", self.radius),
            ("tau", self.tau),
            ("beta", self.beta),
            ("hardcore", self.hardcore),
            ("disk_radius", self.disk_radius),
            ("ball_radius", self.ball_radius),
        ];
        for (key, value) in floats {
            if let Some(v) = value {
                t.insert(key.into(), v.into());
            }
        }
        if let Some(k) = self.k {
            t.insert("k".into(), k.into());
        }
        t.try_into().map_err(|e: toml::de::Error| {
            Error::InvalidParameter(format!("model parameters: {}", e.message()))
        })
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn read_pattern(path: &Path) -> Result<PointPattern> {
    PointPattern::read_csv(BufReader::new(fs::File::open(path)?))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            model,
            n,
            dim,
            seed,
            output,
        } => {
            let window = CubeWindow::new(dim, n)?;
            let pattern = model.get()?.prepare(&window)?.sample(seed.get())?;
            emit(&output, &pattern.to_csv_string())
        }
        Command::Estimate {
            pattern,
            statistic,
            correction,
            grid,
            rho,
            bandwidth,
            output,
        } => {
            let pattern = read_pattern(&pattern)?;
            let grid = grid.get()?;
            let curve = match statistic {
                Statistic::K => estimate_k(&pattern, rho, &grid, correction)?,
                Statistic::Pcf => estimate_pcf(&pattern, rho, &grid, bandwidth)?,
                Statistic::NearestNeighbour => estimate_nn(&pattern, rho, &grid)?,
            };
            emit(&output, &curve.to_csv_string())
        }
        Command::Limit {
            model,
            n,
            grid,
            correction,
            replications,
            seed,
            out,
        } => {
            let spec = model.get()?;
            let window = CubeWindow::new(2, n)?;
            let limit = null_limit(&spec, &window, &grid.get()?, correction, replications, seed.get())?;
            limit.save(&out)
        }
        Command::Gof {
            pattern,
            limit,
            alpha,
            r_max,
            kind,
            correction,
            rho,
            paths,
            seed,
            json,
        } => {
            let pattern = read_pattern(&pattern)?;
            let limit = LimitModel::load(&limit)?;
            let tester = GofTester::new(&limit, alpha, r_max, kind, paths, seed.get())?;
            let result = tester.test(&pattern, correction, rho)?;
            let mut out = io::stdout().lock();
            writeln!(out, "{result}")?;
            if json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(&result).map_err(|e| Error::Parse(e.to_string()))?
                )?;
            }
            Ok(())
        }
        Command::Table { config, output } => {
            let spec = ExperimentSpec::load(&config)?;
            let table = run_rejection_experiment(&spec)?;
            emit(&output, &table.to_csv_string())
        }
        Command::Clanprobe {
            model,
            replications,
            max_k,
            seed,
            output,
        } => {
            let spec = model.get()?;
            let gibbs = spec
                .gibbs_model()?
                .ok_or_else(|| Error::InvalidParameter(format!("{} is not a Gibbs model", spec.name())))?;
            let tail = clan_tail_probe_to(&gibbs, replications, max_k, seed.get())?;
            let mut text = format!(
                "# lambda={} range={} replications={replications}\n",
                tail.lambda, tail.range
            );
            text.push_str(&tail.to_csv_string());
            emit(&output, &text)
        }
        Command::Calibrate {
            gamma,
            radius,
            beta,
            target,
            n,
            replications,
            iterations,
            seed,
        } => {
            let window = CubeWindow::new(2, n)?;
            let c = calibrate_strauss_activity(
                gamma,
                radius,
                beta,
                target,
                &window,
                replications,
                iterations,
                seed.get(),
            )?;
            println!(
                "tau={} intensity={} std_error={}",
                c.tau, c.intensity, c.std_error
            );
            Ok(())
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(e) = configure_workers_from_env() {
        eprintln!("error: {e}");
        return 2;
    }
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
