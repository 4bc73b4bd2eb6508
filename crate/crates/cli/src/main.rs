//! `heatflow`: runs one verification experiment and writes a CSV table plus
//! a plain-text report next to it.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{read_config_file, Experiment, ExperimentConfig, Settings};
use output::{render_report, report_path, write_csv, write_report};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Numeric(#[from] heatflow::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Numeric(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "heatflow", version, about = "Heat content asymptotics verification suites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Singularity exponent as RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    #[arg(long)]
    t_min: Option<String>,
    #[arg(long)]
    t_max: Option<String>,
    #[arg(long)]
    t_count: Option<String>,
    #[arg(long)]
    quad_tol: Option<String>,
    /// CSV output path; the report goes next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Universal constants: solved, by quadrature, and averaged.
    Constants(Common),
    /// Fit the heat content of a circle arc against the predicted series.
    #[command(name = "verify-1d")]
    Verify1d {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        circumference: Option<String>,
        /// Subinterval as A,B.
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
    },
    /// Warped-collar coefficients against the flat one-dimensional ones.
    VerifyGeometry {
        #[command(flatten)]
        common: Common,
        /// Comma-separated f_a' values.
        #[arg(long, allow_hyphen_values = true)]
        warp_fprime: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        warp_fsecond: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        warp_delta: Option<String>,
    },
    /// Circle heat content against the Dirichlet/Neumann mean.
    VerifyAverage {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
    },
    /// Dimension-shift identities of the constants and the series.
    VerifyDimshift(Common),
    /// Exponential localization of the heat content.
    Localize {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        interval: Option<String>,
        #[arg(long)]
        epsilon: Option<String>,
    },
}

impl Command {
    fn split(self) -> (Experiment, Common, Vec<(&'static str, Option<String>)>) {
        match self {
            Command::Constants(c) => (Experiment::Constants, c, vec![]),
            Command::Verify1d {
                common,
                circumference,
                interval,
            } => (
                Experiment::Verify1d,
                common,
                vec![("circumference", circumference), ("interval", interval)],
            ),
            Command::VerifyGeometry {
                common,
                warp_fprime,
                warp_fsecond,
                warp_delta,
            } => (
                Experiment::VerifyGeometry,
                common,
                vec![
                    ("warp-fprime", warp_fprime),
                    ("warp-fsecond", warp_fsecond),
                    ("warp-delta", warp_delta),
                ],
            ),
            Command::VerifyAverage { common, interval } => {
                (Experiment::VerifyAverage, common, vec![("interval", interval)])
            }
            Command::VerifyDimshift(c) => (Experiment::VerifyDimshift, c, vec![]),
            Command::Localize {
                common,
                interval,
                epsilon,
            } => (
                Experiment::Localize,
                common,
                vec![("interval", interval), ("epsilon", epsilon)],
            ),
        }
    }
}

fn load(cli: Cli) -> Result<ExperimentConfig, CliError> {
    let (experiment, common, geometry) = cli.command.split();
    let file = match &common.config {
        Some(path) => read_config_file(path)?,
        None => Settings::default(),
    };
    let mut flags = Settings::default();
    let out = common.out.map(|p| p.to_string_lossy().into_owned());
    let given = [
        ("alpha", common.alpha),
        ("t-min", common.t_min),
        ("t-max", common.t_max),
        ("t-count", common.t_count),
        ("quad-tol", common.quad_tol),
        ("out", out),
    ];
    for (key, value) in given.into_iter().chain(geometry) {
        if let Some(v) = value {
            flags.insert(key, v);
        }
    }
    ExperimentConfig::from_settings(experiment, &file.merge(flags))
}

fn execute(config: &ExperimentConfig) -> Result<bool, CliError> {
    log::info!("running {} with alpha {}", config.experiment, config.alpha);
    let outcome = experiments::run(config)?;
    write_csv(&config.out, &outcome.table)?;
    let header = [
        format!("heatflow {} report", config.experiment),
        format!("generated {}", chrono::Local::now().format("%Y-%m-%d %H:%M:%S %z")),
        format!("table {}", config.out.display()),
    ];
    let report = render_report(&header, &config.describe(), &outcome);
    write_report(&report_path(&config.out), &report)?;
    print!("{report}");
    Ok(outcome.passed())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match load(cli).and_then(|c| execute(&c)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
