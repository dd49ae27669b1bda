//! The exact collision unitary and repeated-interaction trajectory engine.
//!
//! The unitary e^{-i H_tot tau} block-diagonalizes over the two invariant
//! subspaces {|du>, |ud>} (single excitation) and {|dd>, |uu>} (zero or two
//! excitations); each block is exponentiated in closed form. One collision
//! maps the system state through Tr_A[U (rho_S (x) rho_A) U^dagger].
//!
//! Trajectories do not form 4x4 products per step. Because populations and
//! coherences decouple, the collision acts as an affine map on p and a
//! linear map on (c, c*); both maps are extracted from the unitary once by
//! probing [`ri_step`] and then iterated as scalar arithmetic. The 4x4 route
//! stays available as the slow oracle that tests compare against.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{exp_2x2_hermitian, kron, partial_trace_ancilla_raw, C2Matrix, C4Matrix};
use crate::model::{thermal_ancilla, total_hamiltonian, QubitState, RIParams, POSITIVITY_TOL};
use crate::thermo::{LedgerCoefficients, StepLedger};

/// FNV-1a hash over the parameter fields, used to detect stale unitary reuse.
pub fn params_fingerprint(params: &RIParams) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in [
        params.omega_s,
        params.omega_a,
        params.j_xx,
        params.j_yy,
        params.j_zz,
        params.beta,
        params.tau,
    ] {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// The collision unitary e^{-i H_tot tau} with the fingerprint of the
/// parameters that built it.
#[derive(Debug, Clone, Copy)]
pub struct CollisionUnitary {
    u: C4Matrix,
    fingerprint: u64,
}

impl CollisionUnitary {
    #[inline]
    pub fn matrix(&self) -> &C4Matrix {
        &self.u
    }

    #[inline]
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn matches(&self, params: &RIParams) -> bool {
        self.fingerprint == params_fingerprint(params)
    }
}

/// Build the exact collision unitary by exponentiating the two 2x2 blocks
/// of the total Hamiltonian.
pub fn collision_unitary(params: &RIParams) -> CollisionUnitary {
    let h = total_hamiltonian(params);
    let outer = C2Matrix::from_rows([[h.at(0, 0), h.at(0, 3)], [h.at(3, 0), h.at(3, 3)]]);
    let center = C2Matrix::from_rows([[h.at(1, 1), h.at(1, 2)], [h.at(2, 1), h.at(2, 2)]]);
    let u_outer = exp_2x2_hermitian(&outer, params.tau)
        .expect("blocks of a Hermitian Hamiltonian are Hermitian");
    let u_center = exp_2x2_hermitian(&center, params.tau)
        .expect("blocks of a Hermitian Hamiltonian are Hermitian");

    let mut u = C4Matrix::zeros();
    u.set(0, 0, u_outer.at(0, 0));
    u.set(0, 3, u_outer.at(0, 1));
    u.set(3, 0, u_outer.at(1, 0));
    u.set(3, 3, u_outer.at(1, 1));
    u.set(1, 1, u_center.at(0, 0));
    u.set(1, 2, u_center.at(0, 1));
    u.set(2, 1, u_center.at(1, 0));
    u.set(2, 2, u_center.at(1, 1));
    CollisionUnitary {
        u,
        fingerprint: params_fingerprint(params),
    }
}

/// One repeated-interaction step through the full 4x4 route:
/// Tr_A[U (rho_S (x) rho_A) U^dagger].
///
/// The ancilla must be diagonal. Emits an internal-consistency error if the
/// reduced state violates positivity beyond tolerance, which would indicate
/// a kernel bug rather than bad input.
pub fn ri_step(
    state: &QubitState,
    u: &CollisionUnitary,
    ancilla: &QubitState,
) -> Result<QubitState> {
    if !ancilla.is_diagonal(1e-12) {
        return Err(Error::NondiagonalAncilla {
            coherence: ancilla.c().norm(),
        });
    }
    let joint = kron(&state.to_matrix(), &ancilla.to_matrix());
    let evolved = joint.conjugated_by(&u.u);
    let reduced = partial_trace_ancilla_raw(&evolved);
    let p = reduced.at(0, 0).re;
    let c = reduced.at(0, 1);
    let excess = c.norm_sqr() - p * (1.0 - p);
    if excess > POSITIVITY_TOL {
        return Err(Error::PositivityViolation { excess });
    }
    QubitState::new(p.clamp(0.0, 1.0), c)
}

/// Scalar per-collision maps extracted from the unitary:
/// p' = eta p + konst and c' = alpha c* + gamma c.
#[derive(Debug, Clone, Copy)]
pub(crate) struct StepMap {
    pub eta: f64,
    pub konst: f64,
    pub alpha: Complex64,
    pub gamma: Complex64,
}

impl StepMap {
    /// Probe the affine population map and linear coherence map with four
    /// valid states. The collision map is exactly of this form (populations
    /// and coherences decouple; diagonal states stay diagonal), so the
    /// probes determine it completely.
    pub fn from_unitary(u: &CollisionUnitary, ancilla: &QubitState) -> Result<Self> {
        let zero = Complex64::new(0.0, 0.0);
        let at_p0 = ri_step(&QubitState::new(0.0, zero)?, u, ancilla)?;
        let at_p1 = ri_step(&QubitState::new(1.0, zero)?, u, ancilla)?;
        let konst = at_p0.p();
        let eta = at_p1.p() - at_p0.p();

        let probe = 0.25;
        let re_in = QubitState::new(0.5, Complex64::new(probe, 0.0))?;
        let im_in = QubitState::new(0.5, Complex64::new(0.0, probe))?;
        let m_re = ri_step(&re_in, u, ancilla)?.c() / probe;
        let m_im = ri_step(&im_in, u, ancilla)?.c() / Complex64::new(0.0, probe);
        Ok(Self {
            eta,
            konst,
            alpha: (m_re - m_im) * 0.5,
            gamma: (m_re + m_im) * 0.5,
        })
    }

    #[inline]
    pub fn apply(&self, p: f64, c: Complex64) -> (f64, Complex64) {
        (
            self.eta * p + self.konst,
            self.alpha * c.conj() + self.gamma * c,
        )
    }
}

/// Recording options for [`run_trajectory`].
#[derive(Debug, Clone, Copy)]
pub struct TrajectoryOptions {
    /// Record the per-collision work/heat/energy ledger.
    pub with_ledger: bool,
    /// Record the state at every k-th collision (first and last are always
    /// kept). 1 records everything.
    pub stride: u64,
}

impl Default for TrajectoryOptions {
    fn default() -> Self {
        Self {
            with_ledger: false,
            stride: 1,
        }
    }
}

impl TrajectoryOptions {
    pub fn with_ledger() -> Self {
        Self {
            with_ledger: true,
            stride: 1,
        }
    }
}

/// Recorded time series of one repeated-interaction run.
///
/// `steps[i]` is the collision count of sample i, with `steps[0] = 0` the
/// initial state; ledgers, when present, cover every collision 1..=n_steps
/// regardless of stride (`ledgers[n-1]` belongs to collision n).
#[derive(Debug, Clone)]
pub struct TrajectoryRecord {
    pub params: RIParams,
    pub n_steps: u64,
    steps: Vec<u64>,
    states: Vec<QubitState>,
    ledgers: Option<Vec<StepLedger>>,
}

/// Raw pieces for assembling a record outside this module (the randomized
/// protocol builds its own step sequence).
pub(crate) struct TrajectoryRecordParts {
    pub params: RIParams,
    pub n_steps: u64,
    pub steps: Vec<u64>,
    pub states: Vec<QubitState>,
    pub ledgers: Option<Vec<StepLedger>>,
}

impl TrajectoryRecord {
    pub(crate) fn from_parts(parts: TrajectoryRecordParts) -> Self {
        debug_assert_eq!(parts.steps.len(), parts.states.len());
        Self {
            params: parts.params,
            n_steps: parts.n_steps,
            steps: parts.steps,
            states: parts.states,
            ledgers: parts.ledgers,
        }
    }

    /// Recorded collision counts, ascending, starting at 0.
    pub fn steps(&self) -> &[u64] {
        &self.steps
    }

    /// Recorded states, aligned with `steps()`.
    pub fn states(&self) -> &[QubitState] {
        &self.states
    }

    /// Ledger of collision n (1-based), if ledgers were recorded.
    pub fn ledger_at(&self, n: u64) -> Option<&StepLedger> {
        self.ledgers
            .as_ref()
            .and_then(|l| l.get(n.checked_sub(1)? as usize))
    }

    pub fn ledgers(&self) -> Option<&[StepLedger]> {
        self.ledgers.as_deref()
    }

    pub fn initial_state(&self) -> &QubitState {
        &self.states[0]
    }

    pub fn final_state(&self) -> &QubitState {
        self.states.last().expect("at least the initial state")
    }

    /// CSV export with columns n, p, c_re, c_im and, when ledgers are
    /// present, w, q, de, first_law_residual. Row n = 0 carries zeros in the
    /// ledger columns (no collision has happened yet). Floats are written
    /// with 17 significant digits so a parse reproduces the exact bits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        if self.ledgers.is_some() {
            writeln!(out, "n,p,c_re,c_im,w,q,de,first_law_residual")?;
        } else {
            writeln!(out, "n,p,c_re,c_im")?;
        }
        for (&n, state) in self.steps.iter().zip(&self.states) {
            write!(
                out,
                "{},{:.16e},{:.16e},{:.16e}",
                n,
                state.p(),
                state.c().re,
                state.c().im
            )?;
            if self.ledgers.is_some() {
                let ledger = if n == 0 {
                    StepLedger::zero()
                } else {
                    *self.ledger_at(n).expect("full ledger coverage")
                };
                write!(
                    out,
                    ",{:.16e},{:.16e},{:.16e},{:.16e}",
                    ledger.w, ledger.q, ledger.de_s, ledger.residual
                )?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

/// Iterate the repeated-interaction map against a freshly prepared thermal
/// ancilla each collision.
///
/// The ancilla is refreshed to the same Gibbs state before every collision
/// and no idle time elapses between collisions, so wall-clock time is
/// n_steps * tau. Identical inputs produce bit-identical records.
pub fn run_trajectory(
    state0: &QubitState,
    params: &RIParams,
    n_steps: u64,
    options: TrajectoryOptions,
) -> Result<TrajectoryRecord> {
    params.validate()?;
    let stride = options.stride.max(1);
    let ancilla = thermal_ancilla(params.beta, params.omega_a)?;
    let unitary = collision_unitary(params);
    let map = StepMap::from_unitary(&unitary, &ancilla)?;
    let ledger_coeffs = options.with_ledger.then(|| LedgerCoefficients::new(params));

    let mut steps = Vec::new();
    let mut states = Vec::new();
    let mut ledgers = options
        .with_ledger
        .then(|| Vec::with_capacity(n_steps as usize));

    steps.push(0);
    states.push(*state0);

    let mut p = state0.p();
    let mut c = state0.c();
    for n in 1..=n_steps {
        if let (Some(ledgers), Some(coeffs)) = (ledgers.as_mut(), ledger_coeffs.as_ref()) {
            ledgers.push(coeffs.at_population(p));
        }
        (p, c) = map.apply(p, c);
        let excess = c.norm_sqr() - p * (1.0 - p);
        if excess > POSITIVITY_TOL {
            return Err(Error::PositivityViolation { excess });
        }
        if n % stride == 0 || n == n_steps {
            steps.push(n);
            states.push(QubitState::new(p.clamp(0.0, 1.0), c)?);
        }
    }

    Ok(TrajectoryRecord {
        params: *params,
        n_steps,
        steps,
        states,
        ledgers,
    })
}
