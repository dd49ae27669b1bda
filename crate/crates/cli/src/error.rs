//! Error type with the CLI exit-code contract:
//! 0 success, 2 validation, 3 non-convergence, 4 degenerate parameters.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error("no convergence within {steps} steps (best distance {best_distance:.3e})")]
    NonConvergence { steps: u64, best_distance: f64 },

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) | Self::Io { .. } => 2,
            Self::NonConvergence { .. } => 3,
            Self::Degenerate(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Validation(_) => "validation",
            Self::NonConvergence { .. } => "non_convergence",
            Self::Degenerate(_) => "degenerate",
            Self::Io { .. } => "io",
        }
    }

    /// Machine-readable form printed to stderr on failure.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": {
                "code": self.exit_code(),
                "kind": self.kind(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

impl From<qri_core::Error> for CliError {
    fn from(e: qri_core::Error) -> Self {
        match e {
            qri_core::Error::Degenerate => Self::Degenerate(
                "eta = 1 at this parameter set (tau sits on full Rabi periods of both \
                 invariant blocks, or both transverse couplings vanish); the map has \
                 no steady state to converge to"
                    .into(),
            ),
            qri_core::Error::NonConvergence {
                steps,
                best_distance,
            } => Self::NonConvergence {
                steps,
                best_distance,
            },
            other => Self::Validation(other.to_string()),
        }
    }
}
