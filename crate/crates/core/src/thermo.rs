//! Per-collision thermodynamic bookkeeping.
//!
//! Each collision exchanges three energies: the work W_I of switching the
//! interaction on and off, the heat Q deposited into the ancilla, and the
//! change dE_S of the system's internal energy. The total Hamiltonian
//! commutes with the collision unitary, so W_I + Q + dE_S = 0 at every step
//! (the first law); the residual is carried in every ledger and enforced on
//! the trace-definition route.
//!
//! Sign conventions: Q > 0 means energy deposited into the ancilla, and the
//! accumulated work [`cumulative_work`] carries an explicit minus sign so
//! positive totals mean work invested into the process.

use serde::{Deserialize, Serialize};

use crate::analytic::{rate_parts, steady_population};
use crate::collision::{CollisionUnitary, TrajectoryRecord};
use crate::error::{Error, Result};
use crate::model::{
    ancilla_energy_operator, interaction_hamiltonian, system_energy_operator, thermal_ancilla,
    QubitState, RIParams,
};

/// First-law residual allowed on trace-definition ledgers.
pub const FIRST_LAW_TOL: f64 = 1e-11;

/// Energy bookkeeping of one collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepLedger {
    /// Interaction-switching work W_I.
    pub w: f64,
    /// Heat deposited into the ancilla.
    pub q: f64,
    /// Change of the system internal energy.
    pub de_s: f64,
    /// w + q + de_s as computed.
    pub residual: f64,
}

impl StepLedger {
    pub(crate) fn zero() -> Self {
        Self {
            w: 0.0,
            q: 0.0,
            de_s: 0.0,
            residual: 0.0,
        }
    }
}

/// Precomputed coefficients of the closed-form ledger.
///
/// All three energies are affine in the pre-collision population p:
///   W_I  = (wa - ws) m_theta (p - p_A) - (wa + ws) m_phi (p - (1 - p_A))
///   Q    = -wa [m_theta (p - p_A)] + wa [m_phi (p - (1 - p_A))]
///   dE_S =  ws [m_theta (p - p_A)] + ws [m_phi (p - (1 - p_A))]
/// and depend on the state only through p: coherences never enter, so
/// erasing them is energetically free.
#[derive(Debug, Clone, Copy)]
pub struct LedgerCoefficients {
    m_theta: f64,
    m_phi: f64,
    p_a: f64,
    omega_s: f64,
    omega_a: f64,
}

impl LedgerCoefficients {
    pub fn new(params: &RIParams) -> Self {
        let parts = rate_parts(params);
        let p_a = thermal_ancilla(params.beta, params.omega_a)
            .expect("params were validated")
            .p();
        Self {
            m_theta: parts.m_theta,
            m_phi: parts.m_phi,
            p_a,
            omega_s: params.omega_s,
            omega_a: params.omega_a,
        }
    }

    /// Ledger of the collision entered with ground population p.
    pub fn at_population(&self, p: f64) -> StepLedger {
        let d_theta = self.m_theta * (p - self.p_a);
        let d_phi = self.m_phi * (p - (1.0 - self.p_a));
        let w = (self.omega_a - self.omega_s) * d_theta - (self.omega_a + self.omega_s) * d_phi;
        let q = -self.omega_a * d_theta + self.omega_a * d_phi;
        let de_s = self.omega_s * d_theta + self.omega_s * d_phi;
        StepLedger {
            w,
            q,
            de_s,
            residual: w + q + de_s,
        }
    }
}

/// Trace-definition energetics of one collision:
/// W_I = Tr[H_I (rho' - rho)], Q = Tr[(1 (x) H_A)(rho' - rho)],
/// dE_S = Tr[(H_S (x) 1)(rho' - rho)] with rho' = U rho U^dagger and
/// rho = rho_S (x) rho_A.
///
/// This is the authoritative route; the residual is checked against
/// `FIRST_LAW_TOL` and a violation signals a kernel bug. The unitary must
/// have been built from the same parameters.
pub fn step_energetics_numeric(
    state: &QubitState,
    params: &RIParams,
    u: &CollisionUnitary,
) -> Result<StepLedger> {
    if !u.matches(params) {
        return Err(Error::StaleUnitary);
    }
    let ancilla = thermal_ancilla(params.beta, params.omega_a)?;
    let joint = crate::linalg::kron(&state.to_matrix(), &ancilla.to_matrix());
    let evolved = joint.conjugated_by(u.matrix());
    let delta = evolved.sub(&joint);

    let w = interaction_hamiltonian(params).mul(&delta).trace().re;
    let q = ancilla_energy_operator(params).mul(&delta).trace().re;
    let de_s = system_energy_operator(params).mul(&delta).trace().re;
    let residual = w + q + de_s;
    if residual.abs() > FIRST_LAW_TOL {
        return Err(Error::FirstLawViolation { residual });
    }
    Ok(StepLedger {
        w,
        q,
        de_s,
        residual,
    })
}

/// Closed-form energetics of one collision; depends on the state only
/// through its population.
pub fn step_energetics_closed(state: &QubitState, params: &RIParams) -> StepLedger {
    LedgerCoefficients::new(params).at_population(state.p())
}

/// Total invested work over the first n_stop collisions,
/// W(n_stop) = -sum_{n=1..n_stop} W_I^(n).
pub fn cumulative_work(trajectory: &TrajectoryRecord, n_stop: u64) -> Result<f64> {
    let ledgers = trajectory.ledgers().ok_or(Error::MissingLedger)?;
    if n_stop > trajectory.n_steps {
        return Err(Error::InvalidParams(format!(
            "n_stop = {n_stop} exceeds trajectory length {}",
            trajectory.n_steps
        )));
    }
    Ok(-ledgers[..n_stop as usize].iter().map(|l| l.w).sum::<f64>())
}

/// Housekeeping pair sustaining the steady state: the closed-form ledger
/// evaluated at p = p_inf, where dE_S vanishes and heat balances work,
/// q_inf = -w_inf.
pub fn asymptotic_housekeeping(params: &RIParams) -> Result<(f64, f64)> {
    let p_inf = steady_population(params)?;
    let ledger = LedgerCoefficients::new(params).at_population(p_inf);
    Ok((ledger.w, ledger.q))
}
