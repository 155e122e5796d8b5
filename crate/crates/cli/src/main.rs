//! `pentamotion`: command-line front end for line-symmetric self-motions of
//! linear pentapods.
//!
//! Every command reads a JSON config, prints a JSON report (with the config
//! echo and library version) and writes its artifacts to the output
//! directory. Exit codes: 0 success, 1 invalid config or input, 2 numeric
//! failure or failed check.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::commands::{Context, Outcome};
use crate::config::RunConfig;
use crate::output::{to_json, OutDir};

type Handler = fn(&Context) -> Result<Outcome, CliError>;

const TOL_ENV: &str = "PENTAMOTION_TOL";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numeric(String),
}

impl From<pentamotion::Error> for CliError {
    fn from(e: pentamotion::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "pentamotion", version, about = "Line-symmetric self-motions of linear pentapods")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: `output.dir` from the config, else `.`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Residual tolerance; overrides PENTAMOTION_TOL and the config.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a design and derive its leg parameters.
    Classify(CommonArgs),
    /// Trace a self-motion: pose CSV and residual report.
    Trace(CommonArgs),
    /// Sample the basic ruled surface: OBJ mesh and generator CSV.
    Surface(CommonArgs),
    /// Leg-length interval with real self-motions for platform point `t`.
    Reality(CommonArgs),
    /// Check whether a leg-length range is free of self-motions.
    Workspace(CommonArgs),
    /// Reflect the platform line and sphere centers in a generator.
    Krames(CommonArgs),
    /// Run all residual checks on a motion.
    Verify(CommonArgs),
}

#[derive(Serialize)]
struct Report<'a> {
    command: &'a str,
    version: &'a str,
    tolerance: f64,
    config: &'a RunConfig,
    files: Vec<String>,
    pass: bool,
    result: serde_json::Value,
}

fn parse_tol(raw: &str, source: &str) -> Result<f64, CliError> {
    match raw.trim().parse::<f64>() {
        Ok(t) if t > 0.0 && t.is_finite() => Ok(t),
        _ => Err(CliError::Validation(format!("{source}: tolerance must be a positive number, got {raw:?}"))),
    }
}

/// Flag, then environment, then config, then the library default.
fn resolve_tolerance(flag: Option<f64>, cfg: &RunConfig) -> Result<f64, CliError> {
    if let Some(t) = flag {
        return parse_tol(&t.to_string(), "--tol");
    }
    if let Ok(raw) = std::env::var(TOL_ENV) {
        return parse_tol(&raw, TOL_ENV);
    }
    match cfg.tolerance.global {
        Some(t) => parse_tol(&t.to_string(), "tolerance.global"),
        None => Ok(pentamotion::tolerance::<f64>()),
    }
}

fn run(name: &str, args: &CommonArgs, f: Handler) -> Result<bool, CliError> {
    let cfg = RunConfig::load(&args.config)?;
    let tol = resolve_tolerance(args.tol, &cfg)?;
    pentamotion::set_global_tolerance(Some(tol));
    let dir = args.out.clone().or_else(|| cfg.output.dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    let ctx = Context { out: OutDir::create(dir)?, cfg, tol };
    let outcome = f(&ctx)?;
    let report = Report {
        command: name,
        version: pentamotion::VERSION,
        tolerance: tol,
        config: &ctx.cfg,
        files: outcome.files.iter().map(|p| p.display().to_string()).collect(),
        pass: outcome.pass,
        result: outcome.result,
    };
    ctx.out.write_json(&format!("{name}.json"), &report)?;
    println!("{}", to_json(&report)?);
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => e.exit(),
    };
    let (name, args, f): (&str, &CommonArgs, Handler) = match &cli.command {
        Command::Classify(a) => ("classify", a, commands::classify),
        Command::Trace(a) => ("trace", a, commands::trace),
        Command::Surface(a) => ("surface", a, commands::surface),
        Command::Reality(a) => ("reality", a, commands::reality),
        Command::Workspace(a) => ("workspace", a, commands::workspace),
        Command::Krames(a) => ("krames", a, commands::krames),
        Command::Verify(a) => ("verify", a, commands::verify),
    };
    match run(name, args, f) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("pentamotion {name}: checks failed (see report)");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("pentamotion {name}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
