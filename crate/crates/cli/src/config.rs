//! The experiment record: a JSON config file, overridden field by field by
//! command-line flags.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use orlicz_gauge::catalog::FunctionInput;
use orlicz_gauge::convergence::{ClassifierConfig, FamilyTemplate};
use orlicz_gauge::partition::MeasureSpec;
use orlicz_gauge::quadrature::QuadratureConfig;
use orlicz_gauge::{Backend, SequenceSpec, YoungFunctionSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const SEED_ENV: &str = "ORLICZ_GAUGE_SEED";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Integrate,
    HkNorm,
    Alexiewicz,
    Modular,
    LuxNorm,
    Axioms,
    Membership,
    Embedding,
    Converge,
    Implications,
    Counterexample,
    Bench,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Integrate => "integrate",
            Command::HkNorm => "hk-norm",
            Command::Alexiewicz => "alexiewicz",
            Command::Modular => "modular",
            Command::LuxNorm => "lux-norm",
            Command::Axioms => "axioms",
            Command::Membership => "membership",
            Command::Embedding => "embedding",
            Command::Converge => "converge",
            Command::Implications => "implications",
            Command::Counterexample => "counterexample",
            Command::Bench => "bench",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub svg: Option<PathBuf>,
}

impl OutputPaths {
    fn is_empty(&self) -> bool {
        self.json.is_none() && self.csv.is_none() && self.svg.is_none()
    }
}

/// Everything one run needs. Absent fields take command-specific defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub function: Option<FunctionInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<FamilyTemplate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<YoungFunctionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quadrature: Option<QuadratureConfig<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classifier: Option<ClassifierConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<Precision>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Partitions for `hk-norm`, samples per condition for `axioms`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Evaluation points of the Alexiewicz sup.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    /// `t`-range probed by `axioms`; defaults to the measure interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repeats: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    #[serde(default, skip_serializing_if = "OutputPaths::is_empty")]
    pub output: OutputPaths,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: None,
            function: None,
            sequence: None,
            template: None,
            theta: None,
            measure: None,
            quadrature: None,
            classifier: None,
            backend: None,
            precision: None,
            k: None,
            k_grid: None,
            seed: None,
            samples: None,
            grid: None,
            domain: None,
            repeats: None,
            jobs: None,
            output: OutputPaths::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| CliError::validation(format!("config: {e}")))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::validation(format!(
                "config: schema_version {} is not supported (expected {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    pub fn measure(&self) -> MeasureSpec {
        self.measure.clone().unwrap_or_default()
    }

    pub fn quadrature(&self) -> QuadratureConfig<f64> {
        self.quadrature.unwrap_or_default()
    }

    pub fn classifier(&self) -> ClassifierConfig {
        self.classifier.unwrap_or_default()
    }

    /// Flag, then config, then `ORLICZ_GAUGE_SEED`, then 0.
    pub fn resolve_seed(&mut self) -> Result<u64, CliError> {
        if let Some(s) = self.seed {
            return Ok(s);
        }
        let seed = match std::env::var(SEED_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| {
                CliError::validation(format!("{SEED_ENV}={v:?} is not an unsigned integer"))
            })?,
            Err(_) => 0,
        };
        self.seed = Some(seed);
        Ok(seed)
    }

    /// Checks everything that can be checked without computing.
    pub fn validate(&self, command: Command) -> Result<(), CliError> {
        let v = |e: orlicz_gauge::Error| CliError::validation(e.to_string());
        let m = self.measure();
        let [a, b] = m.interval;
        m.build::<f64>().map_err(v)?;
        self.quadrature().validate(a, b).map_err(v)?;
        self.classifier().validate().map_err(v)?;
        // `axioms` exists to examine candidates that may fail the conditions
        if let (Some(t), false) = (&self.theta, command == Command::Axioms) {
            t.validate().map_err(v)?;
        }
        if let Some(s) = &self.sequence {
            s.validate().map_err(v)?;
        }
        if let Some(k) = self.k {
            if !(k.is_finite() && k > 0.0) {
                return Err(CliError::validation(format!(
                    "k must be positive and finite, got {k}"
                )));
            }
        }
        if let Some(g) = &self.k_grid {
            if g.is_empty() || g.iter().any(|k| !(k.is_finite() && *k > 0.0)) {
                return Err(CliError::validation(
                    "k_grid must be a nonempty list of positive numbers",
                ));
            }
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(CliError::validation("k_grid must be strictly increasing"));
            }
        }
        if let Some(d) = self.domain {
            if !(d[0].is_finite() && d[1].is_finite() && d[0] <= d[1]) {
                return Err(CliError::validation(format!(
                    "domain must be an ordered finite pair, got {d:?}"
                )));
            }
        }
        for (name, v) in [
            ("samples", self.samples),
            ("grid", self.grid),
            ("repeats", self.repeats),
            ("jobs", self.jobs),
        ] {
            if v == Some(0) {
                return Err(CliError::validation(format!("{name} must be at least 1")));
            }
        }
        let need = |field: &str, present: bool| {
            if present {
                Ok(())
            } else {
                Err(CliError::validation(format!(
                    "`{}` needs `{field}`",
                    command.name()
                )))
            }
        };
        use Command::*;
        match command {
            Integrate | HkNorm | Alexiewicz => need("function", self.function.is_some())?,
            Modular | LuxNorm | Membership | Embedding => {
                need("function", self.function.is_some())?;
                need("theta", self.theta.is_some())?;
            }
            Axioms | Counterexample => need("theta", self.theta.is_some())?,
            Converge => {
                need("sequence", self.sequence.is_some())?;
                need("theta", self.theta.is_some())?;
            }
            Implications => {
                if self.sequence.is_some() {
                    need("theta", self.theta.is_some())?;
                }
            }
            Bench => {}
        }
        let csv_ok = matches!(
            command,
            Membership | Converge | Implications | Counterexample | Bench
        );
        if self.output.csv.is_some() && !csv_ok {
            return Err(CliError::validation(format!(
                "`{}` has no CSV output",
                command.name()
            )));
        }
        for p in [&self.output.json, &self.output.csv, &self.output.svg]
            .into_iter()
            .flatten()
        {
            let dir = p
                .parent()
                .filter(|d| !d.as_os_str().is_empty())
                .unwrap_or(Path::new("."));
            if !dir.is_dir() {
                return Err(CliError::validation(format!(
                    "output directory {} does not exist",
                    dir.display()
                )));
            }
        }
        if self.output.svg.is_some() && command != Converge {
            return Err(CliError::validation(
                "SVG plots are only produced by `converge`",
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_fields_and_versions_are_rejected() {
        assert!(ExperimentConfig::from_json(r#"{"schema_version": 1}"#).is_ok());
        assert!(ExperimentConfig::from_json(r#"{"schema_version": 1, "colour": 1}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"schema_version": 2}"#).is_err());
        assert!(ExperimentConfig::from_json(r#"{"command": "integrate"}"#).is_err());
    }

    #[test]
    fn full_config_round_trips() {
        let text = r#"{
            "schema_version": 1,
            "command": "lux-norm",
            "function": {"kind": "monomial", "params": {"alpha": 1.0}},
            "theta": {"family": "power", "p": 2.0},
            "measure": {"interval": [0.0, 1.0]},
            "quadrature": {"tol": 1e-10},
            "backend": "hk",
            "precision": "f64",
            "seed": 7,
            "output": {"json": "out.json"}
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        cfg.validate(Command::LuxNorm).unwrap();
        let back = ExperimentConfig::from_json(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn requirements_per_command() {
        let cfg = ExperimentConfig::default();
        assert!(cfg.validate(Command::Integrate).is_err());
        assert!(cfg.validate(Command::Bench).is_ok());
        assert!(cfg.validate(Command::Implications).is_ok());
        let bad_grid = ExperimentConfig {
            k_grid: Some(vec![2.0, 1.0]),
            ..ExperimentConfig::default()
        };
        assert!(bad_grid.validate(Command::Bench).is_err());
    }
}
