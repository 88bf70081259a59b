//! Run configuration: a TOML file with one table per concern, overlaid by
//! command-line flags.
//!
//! ```toml
//! [model]
//! kind = "lorentzian"      # or "ohmic", "tabulated"
//! gamma0 = 1.0
//! width_ratio = 0.1        # width / gamma0
//!
//! [solver]
//! dt = 1e-3
//! method = "closed_form"   # or "volterra"; chosen automatically if absent
//!
//! [measure]
//! min_tol = 1e-6
//! tail_tol = 1e-6
//!
//! [sweep]
//! width_from = 0.1
//! width_to = 1.0
//! steps = 10
//!
//! [verify]
//! samples = 10000
//! seed = 42
//!
//! [output]
//! format = "csv"
//! jobs = 4
//! ```
//!
//! Unknown tables and keys are rejected.

use std::path::{Path, PathBuf};

use nonmark_core::amplitude::default_t_max;
use nonmark_core::measure::measurement_horizon;
use nonmark_core::reservoir::load_tabulated;
use nonmark_core::tolerances::{DEFAULT_MIN_TOL, DEFAULT_TAIL_TOL, QUADRATURE_TOL};
use nonmark_core::{MeasureOptions, SolverConfig, SolverMethod, SpectralModel};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub solver: SolverSection,
    pub measure: MeasureSection,
    pub sweep: SweepSection,
    pub verify: VerifySection,
    pub output: OutputSection,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    #[default]
    Lorentzian,
    Ohmic,
    Tabulated,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelSection {
    pub kind: ModelKind,
    /// Rate unit of the Lorentzian; every other rate is in the same unit.
    pub gamma0: f64,
    /// Lorentzian width in units of `gamma0`.
    pub width_ratio: f64,
    pub detuning: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coupling: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubit_frequency: Option<f64>,
    /// Two-column `omega J` file for the tabulated model.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            kind: ModelKind::Lorentzian,
            gamma0: 1.0,
            width_ratio: 0.1,
            detuning: 0.0,
            coupling: None,
            exponent: None,
            cutoff: None,
            qubit_frequency: None,
            table: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<SolverMethod>,
    pub dt: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    pub tolerance: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        Self { method: None, dt: 1e-3, t_max: None, tolerance: QUADRATURE_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasureSection {
    pub min_tol: f64,
    pub tail_tol: f64,
}

impl Default for MeasureSection {
    fn default() -> Self {
        Self { min_tol: DEFAULT_MIN_TOL, tail_tol: DEFAULT_TAIL_TOL }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub width_from: f64,
    pub width_to: f64,
    pub steps: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { width_from: 0.1, width_to: 1.0, steps: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySection {
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { samples: 10_000, seed: 42 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
}

/// Which horizon a command wants when `t_max` is not given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Horizon {
    /// The amplitude default: 20 periods, or the Markovian decay time.
    Dynamics,
    /// Long enough for the measure sums to converge.
    Measure,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn width(&self) -> f64 {
        self.model.width_ratio * self.model.gamma0
    }

    pub fn spectral_model(&self) -> Result<SpectralModel, CliError> {
        let m = &self.model;
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| CliError::Config(format!("model.{name} is required for the {:?} model", m.kind)))
        };
        let model = match m.kind {
            ModelKind::Lorentzian => {
                SpectralModel::Lorentzian { gamma0: m.gamma0, width: self.width(), detuning: m.detuning }
            }
            ModelKind::Ohmic => SpectralModel::OhmicFamily {
                coupling: need("coupling", m.coupling)?,
                exponent: need("exponent", m.exponent)?,
                cutoff: need("cutoff", m.cutoff)?,
                qubit_frequency: need("qubit_frequency", m.qubit_frequency)?,
            },
            ModelKind::Tabulated => {
                let path = m
                    .table
                    .as_ref()
                    .ok_or_else(|| CliError::Config("model.table is required for the tabulated model".into()))?;
                SpectralModel::Tabulated {
                    points: load_tabulated(path)?,
                    qubit_frequency: need("qubit_frequency", m.qubit_frequency)?,
                }
            }
        };
        model.validate()?;
        Ok(model)
    }

    pub fn solver_config(&self, model: &SpectralModel, horizon: Horizon) -> Result<SolverConfig, CliError> {
        let s = &self.solver;
        let t_max = match (s.t_max, model) {
            (Some(t), _) => t,
            (None, SpectralModel::Lorentzian { gamma0, width, .. }) => match horizon {
                Horizon::Dynamics => default_t_max(*gamma0, *width),
                Horizon::Measure => measurement_horizon(*gamma0, *width),
            },
            (None, _) => {
                return Err(CliError::Config("solver.t_max (or --t-max) is required for this model".into()))
            }
        };
        let method = s.method.unwrap_or(if model.is_resonant_lorentzian() {
            SolverMethod::ClosedForm
        } else {
            SolverMethod::Volterra
        });
        let cfg = SolverConfig { dt: s.dt, t_max, method, tolerance: s.tolerance };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn measure_options(&self) -> Result<MeasureOptions, CliError> {
        let m = &self.measure;
        if !(m.min_tol >= 0.0 && m.tail_tol > 0.0) {
            return Err(CliError::Config("measure.min_tol must be >= 0 and measure.tail_tol > 0".into()));
        }
        Ok(MeasureOptions { min_tol: m.min_tol, tail_tol: m.tail_tol })
    }
}
