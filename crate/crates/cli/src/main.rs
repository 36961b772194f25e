//! `pappus`: checks and renderings for Pappus marked-box dynamics.
//!
//! Every subcommand prints a JSON report (`"schema": 1`) on stdout and exits
//! with 0 when all criteria pass, 1 when any fails or the computation errors,
//! and 2 on a usage error.

mod commands;
mod report;
mod setup;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pappus::scalar::{set_precision, DEFAULT_PRECISION};

use crate::report::Report;
use crate::setup::{Model, ModelArgs};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Run(pappus::Error),
    Io(std::io::Error),
}

impl From<pappus::Error> for CliError {
    fn from(e: pappus::Error) -> Self {
        CliError::Run(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

#[derive(Parser, Debug)]
#[command(name = "pappus", version, about = "Pappus marked boxes, their modular-group representations and Anosov diagnostics")]
struct Cli {
    /// Working precision in bits for extended-precision floats.
    #[arg(long, global = true, env = "PAPPUS_PRECISION", default_value_t = DEFAULT_PRECISION,
          value_parser = clap::value_parser!(u32).range(53..=1 << 16))]
    precision: u32,
    /// Seed for the random inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact relation checks for the elementary transformations on random rational boxes.
    Relations {
        /// Number of random boxes.
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Random rational deformations per box, on top of the undeformed one.
        #[arg(long, default_value_t = 10)]
        lambdas: usize,
        /// Replace tau2 by tau1, a negative control that must fail.
        #[arg(long)]
        mutate: bool,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the tau-orbit of the base box to SVG in the square chart.
    Iterate {
        #[command(flatten)]
        model: ModelArgs,
        /// Maximal word length.
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(0..=14))]
        depth: u64,
        /// SVG output path.
        #[arg(long, default_value = "pappus-iterate.svg")]
        out: PathBuf,
    },
    /// Anosov diagnostics: region, strict nesting, distortion constant, loxodromy.
    Certify {
        #[command(flatten)]
        model: ModelArgs,
        /// Maximal normal-form word length in the loxodromy scan.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        /// Required margin of every eigenvalue gap above 1.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Point of the extension curve over a given eps, with its symmetric intertwiner.
    Curve {
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        zt: String,
        #[arg(long, default_value = "1/3", allow_hyphen_values = true)]
        zb: String,
        #[arg(long, default_value = "-0.05", allow_hyphen_values = true)]
        eps: String,
        /// Bound on |h| at the solved delta.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Limit points of random periodic words, compared with attracting eigenlines.
    Limit {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of random periodic words.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Maximal number of crossings per limit point.
        #[arg(long, default_value_t = 20_000)]
        depth: usize,
        /// Diameter at which the nested intersection stops.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        /// CSV output path, one row per limit point.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed-form Jacobian determinants against finite differences on a moduli grid.
    Variety {
        #[command(flatten)]
        model: ModelArgs,
        /// Grid points per modulus.
        #[arg(long, default_value_t = 4)]
        grid: usize,
        /// Relative error bound.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        /// Also write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), CliError> {
    set_precision(cli.precision);
    let seed = cli.seed;
    Ok(match cli.cmd {
        Command::Relations { trials, lambdas, mutate, out } => (commands::relations(trials, lambdas, mutate, seed)?, out),
        Command::Iterate { model, depth, out } => (commands::iterate(&Model::from_args(&model)?, depth as usize, &out)?, None),
        Command::Certify { model, depth, tol, out } => (commands::certify(&Model::from_args(&model)?, depth, tol)?, out),
        Command::Curve { zt, zb, eps, tol, out } => {
            let model = Model::from_args(&ModelArgs { zt, zb, eps: None, delta: None, u: None, v: None })?;
            (commands::curve(&model, &eps, tol)?, out)
        }
        Command::Limit { model, count, depth, tol, out } => {
            (commands::limit(&Model::from_args(&model)?, count, depth, tol, seed, out.as_ref())?, None)
        }
        Command::Variety { model, grid, tol, out } => (commands::variety(&Model::from_args(&model)?, grid, tol)?, out),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((rep, out)) => {
            println!("{}", rep.to_json());
            if let Some(path) = out {
                if let Err(e) = rep.write(&path) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(if rep.pass { 0 } else { 1 })
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
