//! JSON run configuration.
//!
//! ```json
//! {
//!   "model": {"m": 1, "omega": 1, "mu": 0, "hbar": 1, "lambda": 0.1,
//!             "diffusion": {"Delta": 0.5, "d": 2, "phi": 0.3}},
//!   "state": {"mean": [0, 0], "A": 1, "aleph": 1, "theta": 0},
//!   "evolve": {"t_final": 10, "dt": 0.001, "sample_every": 10, "output": "traj.csv"},
//!   "sieve":  {"area": 1, "grid": {"n_aleph": 401, "n_theta": 361, "aleph_range": [0.5, 8]}},
//!   "sweep":  {"output": "landscape.csv"},
//!   "wigner": {"time_index": 0, "n1": 101, "n2": 101, "output": "wigner.csv"}
//! }
//! ```

use std::path::{Path, PathBuf};

use qfsieve_core::decomposition::{CovDecomposition, DiffDecomposition};
use qfsieve_core::dynamics::GaussianState;
use qfsieve_core::model::ModelParams;
use qfsieve_core::sieve::GridSpec;
use qfsieve_core::Mat2;
use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelDoc,
    pub state: Option<StateDoc>,
    pub evolve: Option<EvolveSection>,
    pub sieve: Option<SieveSection>,
    pub sweep: Option<SweepSection>,
    pub wigner: Option<WignerSection>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDoc {
    pub m: f64,
    pub omega: f64,
    pub mu: f64,
    pub hbar: f64,
    pub lambda: f64,
    pub diffusion: DiffusionDoc,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum DiffusionDoc {
    Coefficients(CoefficientForm),
    Decomposed(DecomposedForm),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientForm {
    #[serde(rename = "D_qq")]
    pub d_qq: f64,
    #[serde(rename = "D_pp")]
    pub d_pp: f64,
    #[serde(rename = "D_pq")]
    pub d_pq: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecomposedForm {
    #[serde(rename = "Delta")]
    pub delta: f64,
    pub d: f64,
    pub phi: f64,
}

impl ModelDoc {
    pub fn params(&self) -> ModelParams {
        let ModelDoc { m, omega, mu, hbar, lambda, diffusion } = *self;
        match diffusion {
            DiffusionDoc::Coefficients(c) => {
                ModelParams { mass: m, omega, mu, hbar, d_qq: c.d_qq, d_pp: c.d_pp, d_pq: c.d_pq, lambda }
            }
            DiffusionDoc::Decomposed(c) => {
                let dec = DiffDecomposition { delta: c.delta, d: c.d, phi: c.phi };
                ModelParams::from_decomposed_diffusion(m, omega, mu, hbar, lambda, &dec)
            }
        }
    }
}

/// Initial state: explicit dispersion entries or `(A, ℵ, θ)`.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum StateDoc {
    Sigma(SigmaForm),
    Decomposed(SqueezedForm),
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaForm {
    #[serde(default)]
    pub mean: [f64; 2],
    /// `[S11, S12, S22]`.
    pub sigma: [f64; 3],
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SqueezedForm {
    #[serde(default)]
    pub mean: [f64; 2],
    #[serde(rename = "A")]
    pub area: f64,
    pub aleph: f64,
    pub theta: f64,
}

impl StateDoc {
    pub fn state(&self, hbar: f64) -> Result<GaussianState> {
        let state = match *self {
            StateDoc::Sigma(SigmaForm { mean, sigma: [s11, s12, s22] }) => {
                GaussianState::new(mean, Mat2::symmetric(s11, s12, s22), hbar)?
            }
            StateDoc::Decomposed(SqueezedForm { mean, area, aleph, theta }) => {
                GaussianState::from_decomposition(mean, &CovDecomposition { area, aleph, theta }, hbar)?
            }
        };
        Ok(state)
    }
}

fn default_sample_every() -> usize {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvolveSection {
    pub t_final: f64,
    pub dt: f64,
    #[serde(default = "default_sample_every")]
    pub sample_every: usize,
    pub output: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub n_aleph: usize,
    pub n_theta: usize,
    pub aleph_range: Option<[f64; 2]>,
}

impl GridDoc {
    pub const DEFAULT: GridDoc = GridDoc { n_aleph: 401, n_theta: 361, aleph_range: None };

    /// Default range `(0.5, max(8, 2d))` brackets every `d ≥ 1`.
    pub fn spec(&self, d: f64) -> GridSpec {
        let [lo, hi] = self.aleph_range.unwrap_or([0.5, f64::max(8.0, 2.0 * d)]);
        GridSpec::new(self.n_aleph, self.n_theta, lo, hi)
    }
}

fn default_area() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SieveSection {
    #[serde(default = "default_area")]
    pub area: f64,
    pub grid: Option<GridDoc>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    #[serde(default = "default_area")]
    pub area: f64,
    pub grid: Option<GridDoc>,
    pub output: PathBuf,
}

fn default_half_width() -> f64 {
    8.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WignerSection {
    #[serde(default)]
    pub time_index: usize,
    #[serde(default = "default_half_width")]
    pub half_width_sigmas: f64,
    pub n1: usize,
    pub n2: usize,
    pub output: PathBuf,
    pub sidecar: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_value(value: Value) -> Result<Self> {
        serde_json::from_value(value).map_err(|e| CliError::usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        let mut value: Value = serde_json::from_str(&text)
            .map_err(|e| CliError::usage(format!("malformed JSON in {}: {e}", path.display())))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        Self::from_value(value)
    }

    /// Every output path named in the config.
    pub fn output_paths(&self) -> Vec<&Path> {
        let mut out = Vec::new();
        if let Some(e) = &self.evolve {
            out.extend(e.output.as_deref());
            out.extend(e.summary.as_deref());
        }
        if let Some(s) = &self.sieve {
            out.extend(s.output.as_deref());
        }
        if let Some(s) = &self.sweep {
            out.push(s.output.as_path());
        }
        if let Some(w) = &self.wigner {
            out.push(w.output.as_path());
            out.extend(w.sidecar.as_deref());
        }
        out
    }

    pub fn state(&self) -> Result<GaussianState> {
        let doc = self.state.as_ref().ok_or_else(|| CliError::usage("config has no \"state\" section"))?;
        doc.state(self.model.hbar)
    }
}

/// Applies `dotted.key=value`; the value is read as JSON, falling back to a string.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::usage(format!("override {assignment:?} is not of the form key=value")))?;
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(CliError::usage(format!("override key {key:?} is empty")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_owned()));
    let mut node = root;
    for part in key.split('.') {
        if !node.is_object() {
            return Err(CliError::usage(format!("override {key:?} descends into a non-object")));
        }
        node = node
            .as_object_mut()
            .expect("checked above")
            .entry(part)
            .or_insert_with(|| Value::Object(Default::default()));
    }
    *node = value;
    Ok(())
}
