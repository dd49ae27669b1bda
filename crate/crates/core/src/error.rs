use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("density matrix trace deviates from 1 by {deviation:.3e}")]
    TraceNotUnit { deviation: f64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid qubit state: {0}")]
    InvalidState(String),

    #[error("state carries coherences; effective temperature is undefined")]
    NondiagonalState,

    #[error("ancilla state must be diagonal (|c| = {coherence:.3e})")]
    NondiagonalAncilla { coherence: f64 },

    #[error("degenerate parameters: eta = 1 (Rabi resonance), no relaxation")]
    Degenerate,

    #[error("short-time steady state undefined: both transverse couplings vanish")]
    CouplingsVanish,

    #[error("collision unitary was built from different parameters")]
    StaleUnitary,

    #[error("positivity violated by {excess:.3e}: internal kernel inconsistency")]
    PositivityViolation { excess: f64 },

    #[error("first-law residual {residual:.3e} exceeds tolerance: internal inconsistency")]
    FirstLawViolation { residual: f64 },

    #[error("trajectory carries no ledger")]
    MissingLedger,

    #[error("no threshold crossing within {steps} steps (best distance {best_distance:.3e})")]
    NonConvergence { steps: u64, best_distance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
