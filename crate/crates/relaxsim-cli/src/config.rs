//! Sweep configuration: defaults, file config, and flag merging.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use relaxsim::redfield::{SpectralDensities, StateKind};

use crate::{CliError, Result};

/// Default sweep horizon: > 4 decay constants of the slowest relevant rate
/// (2CJ₁ = 81.6 s⁻¹), so curves visibly reach equilibrium.
pub const DEFAULT_T_MAX: f64 = 0.05;
pub const DEFAULT_STEPS: usize = 101;

/// The three evolution routes a sweep can follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    /// Analytic Redfield solution toward I/4.
    Redfield,
    /// Kraus application of the composite GPD ∘ (GAD ⊗ GAD) channel.
    Channel,
    /// Open-system evolution of the 7-qubit dilation circuit.
    Circuit,
}

impl Model {
    pub fn name(&self) -> &'static str {
        match self {
            Model::Redfield => "redfield",
            Model::Channel => "channel",
            Model::Circuit => "circuit",
        }
    }
}

impl FromStr for Model {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "redfield" => Ok(Model::Redfield),
            "channel" => Ok(Model::Channel),
            "circuit" => Ok(Model::Circuit),
            other => Err(CliError::Config(format!(
                "unknown model '{other}' (expected redfield, channel, or circuit)"
            ))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(CliError::Config(format!(
                "unknown output format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Fully resolved sweep configuration.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub spectral: SpectralDensities,
    pub state_kind: StateKind,
    pub epsilon: f64,
    pub t_max: f64,
    pub steps: usize,
    pub models: Vec<Model>,
    /// Destination for the record stream; `None` keeps records in memory.
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Diagnostic switch: force γ_A = γ_B = 0 so only the global dephasing
    /// channel acts.
    pub gpd_only: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            spectral: SpectralDensities::sodium_defaults(),
            state_kind: StateKind::Uniform,
            epsilon: 1.0,
            t_max: DEFAULT_T_MAX,
            steps: DEFAULT_STEPS,
            models: vec![Model::Redfield, Model::Channel],
            output_path: None,
            output_format: OutputFormat::Csv,
            gpd_only: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "steps must be at least 2, got {}",
                self.steps
            )));
        }
        if self.t_max <= 0.0 || self.t_max.is_nan() {
            return Err(CliError::Config(format!(
                "t-max must be positive, got {}",
                self.t_max
            )));
        }
        if self.models.is_empty() {
            return Err(CliError::Config("at least one model is required".into()));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(CliError::Config(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// The uniform time grid of the sweep.
    pub fn time_grid(&self) -> Vec<f64> {
        (0..self.steps)
            .map(|i| self.t_max * i as f64 / (self.steps - 1) as f64)
            .collect()
    }

    /// Requested models in canonical order, deduplicated.
    pub fn sorted_models(&self) -> Vec<Model> {
        let mut m = self.models.clone();
        m.sort();
        m.dedup();
        m
    }
}

/// Optional config file mirroring the sweep flags; any flag given on the
/// command line overrides the file value.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub j0: Option<f64>,
    pub j1: Option<f64>,
    pub j2: Option<f64>,
    pub c: Option<f64>,
    pub state: Option<String>,
    pub epsilon: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub models: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub tolerance: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        let parsed = match path.extension().and_then(|e| e.to_str()) {
            Some("toml") => toml::from_str(&text).map_err(|e| CliError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?,
            Some("json") => serde_json::from_str(&text).map_err(|e| CliError::Parse {
                path: path.display().to_string(),
                message: e.to_string(),
            })?,
            _ => {
                return Err(CliError::Config(format!(
                    "config file {} must end in .toml or .json",
                    path.display()
                )))
            }
        };
        Ok(parsed)
    }
}

/// Flag values (None = not given) merged over a file config over defaults.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub j0: Option<f64>,
    pub j1: Option<f64>,
    pub j2: Option<f64>,
    pub c: Option<f64>,
    pub state: Option<String>,
    pub epsilon: Option<f64>,
    pub t_max: Option<f64>,
    pub steps: Option<usize>,
    pub models: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

pub fn resolve_config(flags: &SweepOverrides, file: &FileConfig) -> Result<SweepConfig> {
    let defaults = SpectralDensities::sodium_defaults();
    let pick =
        |flag: Option<f64>, file: Option<f64>, fallback: f64| flag.or(file).unwrap_or(fallback);

    let spectral = SpectralDensities::new(
        pick(flags.j0, file.j0, defaults.j0),
        pick(flags.j1, file.j1, defaults.j1),
        pick(flags.j2, file.j2, defaults.j2),
        pick(flags.c, file.c, defaults.c),
    )
    .map_err(CliError::Lib)?;

    let state_name = flags
        .state
        .clone()
        .or_else(|| file.state.clone())
        .unwrap_or_else(|| "uniform".to_string());
    let state_kind = StateKind::from_str(&state_name).map_err(CliError::Lib)?;

    let model_names = flags
        .models
        .clone()
        .or_else(|| file.models.clone())
        .unwrap_or_else(|| vec!["redfield".into(), "channel".into()]);
    let models = model_names
        .iter()
        .map(|m| Model::from_str(m))
        .collect::<Result<Vec<_>>>()?;

    let format = match flags.format.clone().or_else(|| file.format.clone()) {
        Some(f) => OutputFormat::from_str(&f)?,
        None => OutputFormat::Csv,
    };

    let cfg = SweepConfig {
        spectral,
        state_kind,
        epsilon: pick(flags.epsilon, file.epsilon, 1.0),
        t_max: pick(flags.t_max, file.t_max, DEFAULT_T_MAX),
        steps: flags.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
        models,
        output_path: flags.out.clone().or_else(|| file.out.clone()),
        output_format: format,
        gpd_only: false,
    };
    cfg.validate()?;
    Ok(cfg)
}
