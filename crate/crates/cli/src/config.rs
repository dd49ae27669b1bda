//! Experiment configuration: JSON schema, validation, and grid expansion.

use num_complex::Complex64;
use qri_core::metrics::Metric;
use qri_core::model::{QubitState, RIParams};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Experiment kind, dispatched by the runner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Simulate,
    Steady,
    Resources,
    Thermalize,
    Sweep,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simulate => "simulate",
            Self::Steady => "steady",
            Self::Resources => "resources",
            Self::Thermalize => "thermalize",
            Self::Sweep => "sweep",
        }
    }
}

/// Initial state: explicit (p, c) or a seeded random draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialStateSpec {
    Explicit { p: f64, c_re: f64, c_im: f64 },
    Random { random_seed: u64 },
}

impl InitialStateSpec {
    pub fn resolve(&self) -> Result<QubitState, CliError> {
        match *self {
            Self::Explicit { p, c_re, c_im } => {
                QubitState::new(p, Complex64::new(c_re, c_im)).map_err(CliError::from)
            }
            Self::Random { random_seed } => {
                let mut rng = ChaCha12Rng::seed_from_u64(random_seed);
                Ok(QubitState::random(&mut rng))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

/// One sweep axis: either explicit values or a min/max/points grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    Explicit {
        axis: String,
        values: Vec<f64>,
    },
    Range {
        axis: String,
        min: f64,
        max: f64,
        points: usize,
        #[serde(default)]
        scale: AxisScale,
    },
}

impl AxisSpec {
    pub fn axis(&self) -> &str {
        match self {
            Self::Explicit { axis, .. } => axis,
            Self::Range { axis, .. } => axis,
        }
    }

    pub fn values(&self) -> Vec<f64> {
        match self {
            Self::Explicit { values, .. } => values.clone(),
            Self::Range {
                min,
                max,
                points,
                scale,
                ..
            } => {
                let n = *points;
                (0..n)
                    .map(|k| {
                        let t = if n == 1 {
                            0.0
                        } else {
                            k as f64 / (n - 1) as f64
                        };
                        match scale {
                            AxisScale::Linear => min + t * (max - min),
                            AxisScale::Log => (min.ln() + t * (max.ln() - min.ln())).exp(),
                        }
                    })
                    .collect()
            }
        }
    }

    fn len(&self) -> usize {
        match self {
            Self::Explicit { values, .. } => values.len(),
            Self::Range { points, .. } => *points,
        }
    }
}

/// Extra fields for the thermalize kind.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolSection {
    pub j_max: f64,
    pub n_max: u64,
    pub seed: u64,
    #[serde(default = "default_n_seeds")]
    pub n_seeds: u64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub signed_draws: bool,
    #[serde(default)]
    pub randomize_jzz: bool,
}

fn default_n_seeds() -> u64 {
    100
}

fn default_threshold() -> f64 {
    0.02
}

fn default_stride() -> u64 {
    1
}

fn default_n_steps() -> u64 {
    10_000
}

fn default_epsilon() -> f64 {
    0.05
}

fn default_metric() -> Metric {
    Metric::TraceDistance
}

fn default_max_steps() -> u64 {
    10_000_000
}

/// A full experiment description; serialized as JSON with a schema version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    pub kind: ExperimentKind,
    pub params: RIParams,
    pub initial_state: InitialStateSpec,
    #[serde(default = "default_n_steps")]
    pub n_steps: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep_axes: Vec<AxisSpec>,
    pub output_path: String,
    #[serde(default = "default_stride")]
    pub stride: u64,
    #[serde(default)]
    pub with_ledger: bool,
    /// Search cap for convergence runs.
    #[serde(default = "default_max_steps")]
    pub max_steps: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub protocol: Option<ProtocolSection>,
}

const PARAM_AXES: [&str; 7] = ["omega_s", "omega_a", "j_xx", "j_yy", "j_zz", "beta", "tau"];

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let config: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("config does not parse: {e}")))?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Validation(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.params.validate()?;
        self.initial_state.resolve()?;
        if !self.epsilon.is_finite() || self.epsilon <= 0.0 {
            return Err(CliError::Validation("epsilon must be > 0".into()));
        }
        if self.stride == 0 {
            return Err(CliError::Validation("stride must be >= 1".into()));
        }
        if self.output_path.is_empty() {
            return Err(CliError::Validation("output_path must be set".into()));
        }
        for axis in &self.sweep_axes {
            let name = axis.axis();
            let allowed = PARAM_AXES.contains(&name)
                || (name == "epsilon" && self.kind == ExperimentKind::Sweep);
            if !allowed {
                return Err(CliError::Validation(format!(
                    "unknown sweep axis '{name}': expected one of {PARAM_AXES:?}\
                     {}",
                    if self.kind == ExperimentKind::Sweep {
                        " or 'epsilon'"
                    } else {
                        ""
                    }
                )));
            }
            if axis.len() < 2 {
                return Err(CliError::Validation(format!(
                    "sweep axis '{name}' needs at least 2 points"
                )));
            }
            for v in axis.values() {
                if !v.is_finite() {
                    return Err(CliError::Validation(format!(
                        "sweep axis '{name}' contains a non-finite value"
                    )));
                }
            }
        }
        if self.kind == ExperimentKind::Thermalize {
            let protocol = self.protocol.as_ref().ok_or_else(|| {
                CliError::Validation("thermalize requires a protocol section".into())
            })?;
            if !protocol.j_max.is_finite() || protocol.j_max <= 0.0 {
                return Err(CliError::Validation("protocol.j_max must be > 0".into()));
            }
            if protocol.n_seeds == 0 {
                return Err(CliError::Validation("protocol.n_seeds must be >= 1".into()));
            }
        }
        Ok(())
    }

    /// Apply one axis value to a parameter set (or return it as the epsilon
    /// override).
    pub fn apply_axis(params: &mut RIParams, epsilon: &mut f64, axis: &str, value: f64) {
        match axis {
            "omega_s" => params.omega_s = value,
            "omega_a" => params.omega_a = value,
            "j_xx" => params.j_xx = value,
            "j_yy" => params.j_yy = value,
            "j_zz" => params.j_zz = value,
            "beta" => params.beta = value,
            "tau" => params.tau = value,
            "epsilon" => *epsilon = value,
            other => unreachable!("axis '{other}' was validated"),
        }
    }

    /// Row-major expansion of the sweep grid: for each point, the axis
    /// values in declared order plus the resulting (params, epsilon).
    pub fn grid_points(&self) -> Vec<(Vec<f64>, RIParams, f64)> {
        if self.sweep_axes.is_empty() {
            return vec![(Vec::new(), self.params, self.epsilon)];
        }
        let axis_values: Vec<Vec<f64>> = self.sweep_axes.iter().map(|a| a.values()).collect();
        let total: usize = axis_values.iter().map(|v| v.len()).product();
        let mut out = Vec::with_capacity(total);
        let mut index = vec![0usize; axis_values.len()];
        for _ in 0..total {
            let mut params = self.params;
            let mut epsilon = self.epsilon;
            let mut coords = Vec::with_capacity(index.len());
            for (k, &i) in index.iter().enumerate() {
                let v = axis_values[k][i];
                coords.push(v);
                Self::apply_axis(&mut params, &mut epsilon, self.sweep_axes[k].axis(), v);
            }
            out.push((coords, params, epsilon));
            // row-major: last axis varies fastest
            for k in (0..index.len()).rev() {
                index[k] += 1;
                if index[k] < axis_values[k].len() {
                    break;
                }
                index[k] = 0;
            }
        }
        out
    }
}
