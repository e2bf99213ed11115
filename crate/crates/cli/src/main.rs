//! `bgbs`: batch front-end for the bipartite GBS laboratory.
//!
//! Runs one experiment per invocation and writes plot-ready CSV (or JSON)
//! with a metadata sidecar. Exit status is 0 on success, 2 for usage errors,
//! 3 for numeric or I/O failures.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::{json, Value};

use args::{Args, Format};
use commands::{Body, Outcome};
use output::{sidecar_path, write_atomic};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bgbs::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) if e.is_usage() => 2,
            _ => 3,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Core(e) => format!("{e:?}").split(['(', ' ', '{']).next().unwrap_or("Error").to_string(),
            CliError::Usage(_) => "Usage".into(),
            CliError::Io(_) => "Io".into(),
            CliError::Csv(_) => "Csv".into(),
            CliError::Json(_) => "Json".into(),
            CliError::Internal(_) => "Internal".into(),
        }
    }
}

fn config_echo(args: &Args) -> Value {
    json!({
        "command": args.command,
        "m": args.m,
        "mu": args.mu,
        "alpha": args.alpha.iter().map(|a| a.0.label()).collect::<Vec<_>>(),
        "k": args.k,
        "trials": args.trials,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
        "threads": args.threads,
        "s": args.s,
        "t": args.t,
        "delta": args.delta,
    })
}

fn render(outcome: &Outcome, format: Format) -> Result<(Vec<u8>, usize), CliError> {
    match &outcome.body {
        Body::Table(t) => {
            let bytes = match format {
                Format::Csv => t.to_csv()?,
                Format::Json => t.to_json()?,
            };
            Ok((bytes, t.rows.len()))
        }
        Body::Document(v) => {
            let mut bytes = serde_json::to_vec_pretty(v)?;
            bytes.push(b'\n');
            Ok((bytes, 1))
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    if args.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.threads)
            .build_global()
            .map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let start = Instant::now();
    let outcome = commands::run(args)?;
    let format = match (&outcome.body, args.format) {
        (Body::Document(_), _) => Format::Json,
        (_, Some(f)) => f,
        (_, None) => Format::Csv,
    };
    let (bytes, rows) = render(&outcome, format)?;
    let mut meta = json!({
        "config": config_echo(args),
        "version": env!("CARGO_PKG_VERSION"),
        "wall_time_seconds": start.elapsed().as_secs_f64(),
        "rows": rows,
    });
    if let Value::Object(map) = &mut meta {
        map.extend(outcome.meta);
    }
    match &args.out {
        Some(path) => {
            write_atomic(path, &bytes)?;
            let mut side = serde_json::to_vec_pretty(&meta)?;
            side.push(b'\n');
            write_atomic(&sidecar_path(path), &side)?;
        }
        None => {
            std::io::stdout().write_all(&bytes)?;
            eprintln!("{}", serde_json::to_string(&meta)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bgbs: {}: {e}", e.kind());
            ExitCode::from(e.exit_code())
        }
    }
}
