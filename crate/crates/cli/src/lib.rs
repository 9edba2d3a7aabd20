//! Command-line front end: config-driven experiments with JSON, CSV and SVG
//! output.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::Parser;
use serde_json::json;

use crate::args::Cli;
use crate::commands::{dispatch, Outcome};
use crate::config::{Command, ExperimentConfig, Precision, SCHEMA_VERSION};
use crate::error::{exit, CliError};
use crate::output::{diagnostic, write_atomic};

fn execute(command: Command, cfg: ExperimentConfig) -> Result<Outcome, CliError> {
    let run = {
        let cfg = cfg.clone();
        move || match cfg.precision.unwrap_or_default() {
            Precision::F64 => dispatch::<f64>(command, cfg),
            Precision::F32 => dispatch::<f32>(command, cfg),
        }
    };
    match cfg.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build()
            .map_err(|e| CliError::io(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    }
}

fn emit(command: Command, cfg: &ExperimentConfig, out: &Outcome) -> Result<(), CliError> {
    let record = json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": cfg,
        "result": out.result,
    });
    let mut text =
        serde_json::to_string_pretty(&record).map_err(|e| CliError::io(e.to_string()))?;
    text.push('\n');
    if let Some(p) = &cfg.output.json {
        write_atomic(p, text.as_bytes())?;
    }
    if let (Some(p), Some(csv)) = (&cfg.output.csv, &out.csv) {
        write_atomic(p, csv.as_bytes())?;
    }
    if let (Some(p), Some(svg)) = (&cfg.output.svg, &out.svg) {
        write_atomic(p, svg.as_bytes())?;
    }
    print!("{text}");
    Ok(())
}

/// Runs the CLI on `args` (program name first) and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return exit::OK;
        }
        Err(e) => {
            diagnostic("error", "", CliError::validation(e.to_string().trim_end()));
            return exit::VALIDATION;
        }
    };
    let (command, cfg) = match cli.resolve() {
        Ok(r) => r,
        Err(e) => {
            let name = cli.command.map_or("", Command::name);
            diagnostic("error", name, &e);
            return e.exit_code();
        }
    };
    let name = command.name();
    let out = match execute(command, cfg.clone()) {
        Ok(o) => o,
        Err(e) => {
            diagnostic("error", name, &e);
            return e.exit_code();
        }
    };
    if let Err(e) = emit(command, &cfg, &out) {
        diagnostic("error", name, &e);
        return e.exit_code();
    }
    if let Some(reason) = &out.reason {
        let level = if out.code == exit::VIOLATION {
            "violation"
        } else {
            "warning"
        };
        diagnostic(level, name, json!({"code": out.code, "message": reason}));
    }
    out.code
}
