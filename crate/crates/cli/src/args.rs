use std::path::PathBuf;

use clap::Parser;
use serde::de::DeserializeOwned;

use crate::config::{Command, ExperimentConfig, Precision};
use crate::error::CliError;

/// Gauge integrals, H-Orlicz modulars and Luxemburg norms, and modular versus
/// norm convergence experiments.
///
/// JSON-valued flags take either inline JSON or a path to a JSON file.
/// Exit codes: 0 ok, 1 I/O failure, 2 indeterminate, 3 invalid input,
/// 4 an implication or axiom was violated.
#[derive(Debug, Parser)]
#[command(name = "orlicz-gauge", version, allow_negative_numbers = true)]
pub struct Cli {
    /// Subcommand; may instead come from the config file.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// Experiment config (JSON with `schema_version`).
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long, value_name = "JSON")]
    pub function: Option<String>,
    #[arg(long, value_name = "JSON")]
    pub sequence: Option<String>,
    #[arg(long, value_name = "JSON")]
    pub template: Option<String>,
    #[arg(long, value_name = "JSON")]
    pub theta: Option<String>,
    /// Density of the measure with respect to Lebesgue measure.
    #[arg(long, value_name = "JSON")]
    pub weight: Option<String>,
    #[arg(
        long,
        value_name = "A,B",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub interval: Option<Vec<f64>>,

    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub max_cells: Option<usize>,
    #[arg(long)]
    pub h_max: Option<f64>,
    /// Classifier threshold on the tail maximum.
    #[arg(long)]
    pub eps_conv: Option<f64>,

    /// `hk` or `lebesgue`.
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long, value_enum)]
    pub precision: Option<Precision>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub k_grid: Option<Vec<f64>>,
    /// Falls back to `ORLICZ_GAUGE_SEED`, then 0.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(
        long,
        value_name = "A,B",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub domain: Option<Vec<f64>>,
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    pub jobs: Option<usize>,

    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
}

fn json_arg<T: DeserializeOwned>(flag: &str, raw: &str) -> Result<T, CliError> {
    let trimmed = raw.trim_start();
    let text = if trimmed.starts_with('{') || trimmed.starts_with('[') || trimmed.starts_with('"') {
        raw.to_owned()
    } else {
        std::fs::read_to_string(raw)
            .map_err(|e| CliError::validation(format!("--{flag}: cannot read {raw}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::validation(format!("--{flag}: {e}")))
}

fn pair(flag: &str, v: &[f64]) -> Result<[f64; 2], CliError> {
    match v {
        [a, b] => Ok([*a, *b]),
        _ => Err(CliError::validation(format!("--{flag} takes two numbers"))),
    }
}

impl Cli {
    /// Loads the config (if any) and applies every flag on top of it.
    pub fn resolve(&self) -> Result<(Command, ExperimentConfig), CliError> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(c) = self.command {
            cfg.command = Some(c);
        }
        let command = cfg.command.ok_or_else(|| {
            CliError::validation("no command given on the command line or in the config")
        })?;

        if let Some(s) = &self.function {
            let v: serde_json::Value = json_arg("function", s)?;
            cfg.function = Some(
                orlicz_gauge::catalog::FunctionInput::from_value(v)
                    .map_err(|e| CliError::validation(format!("--function: {e}")))?,
            );
        }
        if let Some(s) = &self.sequence {
            cfg.sequence = Some(json_arg("sequence", s)?);
        }
        if let Some(s) = &self.template {
            cfg.template = Some(json_arg("template", s)?);
        }
        if let Some(s) = &self.theta {
            cfg.theta = Some(json_arg("theta", s)?);
        }
        if self.weight.is_some() || self.interval.is_some() {
            let mut m = cfg.measure();
            if let Some(s) = &self.weight {
                m.weight = Some(json_arg("weight", s)?);
            }
            if let Some(v) = &self.interval {
                m.interval = pair("interval", v)?;
            }
            cfg.measure = Some(m);
        }
        if self.tol.is_some()
            || self.rel_tol.is_some()
            || self.max_cells.is_some()
            || self.h_max.is_some()
        {
            let mut q = cfg.quadrature();
            q.tol = self.tol.unwrap_or(q.tol);
            q.rel_tol = self.rel_tol.unwrap_or(q.rel_tol);
            q.max_cells = self.max_cells.unwrap_or(q.max_cells);
            q.h_max = self.h_max.or(q.h_max);
            cfg.quadrature = Some(q);
        }
        if let Some(e) = self.eps_conv {
            let mut c = cfg.classifier();
            c.eps_conv = e;
            cfg.classifier = Some(c);
        }
        if let Some(b) = &self.backend {
            cfg.backend = Some(
                serde_json::from_value(serde_json::Value::from(b.as_str())).map_err(|_| {
                    CliError::validation(format!("--backend must be `hk` or `lebesgue`, got {b:?}"))
                })?,
            );
        }
        cfg.precision = self.precision.or(cfg.precision);
        cfg.k = self.k.or(cfg.k);
        if let Some(g) = &self.k_grid {
            cfg.k_grid = Some(g.clone());
        }
        cfg.seed = self.seed.or(cfg.seed);
        cfg.samples = self.samples.or(cfg.samples);
        cfg.grid = self.grid.or(cfg.grid);
        if let Some(d) = &self.domain {
            cfg.domain = Some(pair("domain", d)?);
        }
        cfg.repeats = self.repeats.or(cfg.repeats);
        cfg.jobs = self.jobs.or(cfg.jobs);
        if let Some(p) = &self.json {
            cfg.output.json = Some(p.clone());
        }
        if let Some(p) = &self.csv {
            cfg.output.csv = Some(p.clone());
        }
        if let Some(p) = &self.svg {
            cfg.output.svg = Some(p.clone());
        }
        cfg.resolve_seed()?;
        cfg.validate(command)?;
        Ok((command, cfg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("orlicz-gauge").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_the_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(
            &path,
            r#"{"schema_version": 1, "command": "integrate", "seed": 3,
                "function": {"kind": "constant", "params": {"c": 1.0}},
                "quadrature": {"tol": 1e-6, "max_cells": 1000}}"#,
        )
        .unwrap();
        let cli = parse(&[
            "--config",
            path.to_str().unwrap(),
            "--tol",
            "1e-9",
            "--seed",
            "5",
        ]);
        let (cmd, cfg) = cli.resolve().unwrap();
        assert_eq!(cmd, Command::Integrate);
        assert_eq!(cfg.seed, Some(5));
        let q = cfg.quadrature();
        assert_eq!(q.tol, 1e-9);
        assert_eq!(q.max_cells, 1000);

        let cli = parse(&[
            "modular",
            "--config",
            path.to_str().unwrap(),
            "--theta",
            r#"{"family": "power", "p": 2}"#,
        ]);
        assert_eq!(cli.resolve().unwrap().0, Command::Modular);
    }

    #[test]
    fn invalid_input_is_a_validation_error() {
        let bad_theta = parse(&[
            "lux-norm",
            "--function",
            r#"{"kind": "constant", "params": {"c": 1.0}}"#,
            "--theta",
            r#"{"family": "power", "p": 0.5}"#,
        ]);
        let err = bad_theta.resolve().unwrap_err();
        assert_eq!(err.exit_code(), crate::error::exit::VALIDATION);
        assert!(parse(&[]).resolve().is_err());
        assert!(
            parse(&["integrate", "--backend", "riemann", "--function", "{}"])
                .resolve()
                .is_err()
        );
        let f = r#"{"kind": "constant", "params": {"c": 1.0}}"#;
        assert!(
            parse(&["integrate", "--function", f, "--interval", "0,1,2"])
                .resolve()
                .is_err()
        );
    }

    #[test]
    fn pairs_take_one_comma_separated_value() {
        let f = r#"{"kind": "constant", "params": {"c": 1.0}}"#;
        let (_, cfg) = parse(&["integrate", "--function", f, "--interval", "-1,2"])
            .resolve()
            .unwrap();
        assert_eq!(cfg.measure().interval, [-1.0, 2.0]);
    }
}
