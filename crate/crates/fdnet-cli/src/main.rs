//! Command-line front end: figure datasets, parameter sweeps, analytic vs
//! Monte Carlo validation, and single-point queries for the critical
//! cancellation ratio and the throughput-optimal deployment.
//!
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 numeric failure.

mod config;
mod error;
mod figures;
mod sweep;
mod table;
mod validate;

use clap::{Args, Parser, Subcommand};
use config::{db_to_linear, linear_to_db, ExperimentSpec, K_PRESET_DB};
use error::CliError;
use fdnet::model::{NetworkConfig, SelfInterferenceModel};
use fdnet::throughput::{critical_beta, t_max, OptimalRegime};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "fdnet",
    version,
    about = "Full-duplex network analysis: figures, sweeps, validation",
    after_help = "Exit codes: 0 success, 1 validation failure, 2 configuration error, \
                  3 numeric failure.\nSet FDNET_THREADS to pin the worker-thread count \
                  (results are identical at any count; 1 forces single-threaded runs)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one figure's CSV dataset(s) into a directory.
    Figure {
        /// Which figure to produce.
        #[arg(value_enum)]
        id: figures::FigureId,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Evaluate analytic (and optional Monte Carlo) columns over a grid.
    Sweep {
        /// TOML experiment spec.
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare analytic success probabilities against Monte Carlo intervals.
    Validate {
        /// TOML experiment spec; must contain a [sim] section.
        spec: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Debug negative control: inflate the pair interference integral by 10%.
        #[arg(long, hide = true)]
        inflate_pair_integral: bool,
    },
    /// Critical self-interference ratio for one operating point.
    BetaC {
        #[command(flatten)]
        point: PointArgs,
    },
    /// Throughput-optimal deployment for one operating point.
    Tmax {
        #[command(flatten)]
        point: PointArgs,
    },
}

/// Flag overrides applied on top of the spec file.
#[derive(Args)]
struct Overrides {
    /// Override the spec's output path.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Override the spec's Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Override the spec's Monte Carlo seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct PointArgs {
    /// Pair density λ.
    #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
    lambda: f64,
    /// SIR threshold θ in dB.
    #[arg(
        long = "theta-db",
        default_value_t = 0.0,
        allow_negative_numbers = true
    )]
    theta_db: f64,
    /// Link distance R.
    #[arg(long = "R", default_value_t = 1.0, allow_negative_numbers = true)]
    link_distance: f64,
    /// Path-loss exponent α.
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    alpha: f64,
    /// Residual self-interference ratio in dB (10·log₁₀ β); omit for
    /// perfect cancellation.
    #[arg(long = "beta-db", allow_negative_numbers = true)]
    beta_db: Option<f64>,
    /// Propagation constant K in dB.
    #[arg(long = "K-db", default_value_t = K_PRESET_DB, allow_negative_numbers = true)]
    k_db: f64,
}

impl PointArgs {
    fn network(&self) -> Result<NetworkConfig, CliError> {
        Ok(NetworkConfig::new(
            self.lambda,
            db_to_linear(self.theta_db),
            self.link_distance,
            self.alpha,
        )?)
    }

    fn si(&self) -> Result<SelfInterferenceModel, CliError> {
        let beta = self.beta_db.map_or(0.0, db_to_linear);
        Ok(SelfInterferenceModel::new(beta, db_to_linear(self.k_db))?)
    }
}

fn main() {
    let code = match run() {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}

fn run() -> Result<(), CliError> {
    init_threads()?;
    match Cli::parse().command {
        Command::Figure { id, out_dir } => {
            for path in figures::run_figure(id, &out_dir)? {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
        Command::Sweep { spec, overrides } => {
            let exp = load_experiment(&spec, &overrides)?;
            let path = sweep::run_sweep(&exp)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        Command::Validate {
            spec,
            overrides,
            inflate_pair_integral,
        } => {
            let exp = load_experiment(&spec, &overrides)?;
            let outcome = validate::run_validate(&exp, inflate_pair_integral)?;
            validate::write_report_csv(&exp, &outcome)?;
            print!("{}", outcome.report);
            if outcome.passed {
                Ok(())
            } else {
                Err(CliError::Validation(format!(
                    "{} of {} points missed their interval (budget {})",
                    outcome.misses,
                    outcome.rows.len(),
                    outcome.budget
                )))
            }
        }
        Command::BetaC { point } => {
            let cfg = point.network()?;
            let beta_c = critical_beta(&cfg, db_to_linear(point.k_db))?;
            println!("beta_c = {beta_c:.9e}");
            println!("cancellation_db = {:.9e}", -linear_to_db(beta_c));
            Ok(())
        }
        Command::Tmax { point } => {
            let opt = t_max(&point.network()?, &point.si()?)?;
            let regime = match opt.regime {
                OptimalRegime::HdOnly => "hd-only",
                OptimalRegime::FdOnly => "fd-only",
                OptimalRegime::BreakEven => "break-even",
            };
            println!("regime = {regime}");
            println!("lambda1 = {:.9e}", opt.densities.lambda1);
            println!("lambda2 = {:.9e}", opt.densities.lambda2);
            println!("throughput = {:.9e}", opt.value);
            if let Some(line) = opt.line {
                println!(
                    "tie_line: lambda1 + {:.9e} * lambda2 = {:.9e}",
                    line.slope, line.intercept
                );
            }
            Ok(())
        }
    }
}

fn load_experiment(path: &Path, overrides: &Overrides) -> Result<config::Experiment, CliError> {
    let mut spec = ExperimentSpec::load(path)?;
    if let Some(out) = &overrides.output {
        spec.output = out.clone();
    }
    if overrides.trials.is_some() || overrides.seed.is_some() {
        let sim = spec.sim.as_mut().ok_or_else(|| {
            CliError::Config("--trials/--seed given but the spec has no [sim] section".to_string())
        })?;
        if let Some(t) = overrides.trials {
            sim.trials = t;
        }
        if let Some(s) = overrides.seed {
            sim.seed = s;
        }
    }
    spec.resolve()
}

/// Honors FDNET_THREADS; any setting yields identical results, 1 makes the
/// run single-threaded.
fn init_threads() -> Result<(), CliError> {
    match std::env::var("FDNET_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                CliError::Config(format!("FDNET_THREADS: \"{v}\" is not a thread count"))
            })?;
            if n == 0 {
                return Err(CliError::Config(
                    "FDNET_THREADS: thread count must be at least 1".to_string(),
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Config(format!("FDNET_THREADS: {e}")))
        }
    }
}
