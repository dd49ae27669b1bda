//! Physical parameters, qubit states, and Hamiltonian builders.
//!
//! A qubit state is stored as its ground population p and coherence c; the
//! full 2x2 density matrix is [[p, c], [c*, 1-p]], which has unit trace by
//! construction. The ancilla is always a diagonal Gibbs state.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, C2Matrix, C4Matrix, PauliAxis};

/// Positivity slack allowed on |c|^2 <= p(1-p).
pub const POSITIVITY_TOL: f64 = 1e-12;

/// All physical parameters of one repeated-interaction configuration.
///
/// Energies (omega_s, omega_a, couplings, beta^-1) share one unit system
/// with hbar = 1; tau is the collision duration in inverse-energy units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RIParams {
    /// System energy splitting, > 0.
    pub omega_s: f64,
    /// Ancilla energy splitting, > 0.
    pub omega_a: f64,
    /// Coupling strength along x.
    pub j_xx: f64,
    /// Coupling strength along y.
    pub j_yy: f64,
    /// Coupling strength along z (zero for the transverse model).
    pub j_zz: f64,
    /// Inverse bath temperature, >= 0.
    pub beta: f64,
    /// Collision time, > 0.
    pub tau: f64,
}

impl RIParams {
    pub fn new(
        omega_s: f64,
        omega_a: f64,
        j_xx: f64,
        j_yy: f64,
        j_zz: f64,
        beta: f64,
        tau: f64,
    ) -> Result<Self> {
        let p = Self {
            omega_s,
            omega_a,
            j_xx,
            j_yy,
            j_zz,
            beta,
            tau,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("omega_s", self.omega_s),
            ("omega_a", self.omega_a),
            ("j_xx", self.j_xx),
            ("j_yy", self.j_yy),
            ("j_zz", self.j_zz),
            ("beta", self.beta),
            ("tau", self.tau),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{name} must be finite")));
            }
        }
        if self.omega_s <= 0.0 {
            return Err(Error::InvalidParams("omega_s must be > 0".into()));
        }
        if self.omega_a <= 0.0 {
            return Err(Error::InvalidParams("omega_a must be > 0".into()));
        }
        if self.tau <= 0.0 {
            return Err(Error::InvalidParams("tau must be > 0".into()));
        }
        if self.beta < 0.0 {
            return Err(Error::InvalidParams(
                "beta must be >= 0 (system inversion is expressed through p < 1/2, \
                 not through a negative ancilla temperature)"
                    .into(),
            ));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QubitStateRepr {
    p: f64,
    c_re: f64,
    c_im: f64,
}

/// Qubit density matrix in (population, coherence) form.
///
/// Invariant: 0 <= p <= 1 and |c|^2 <= p(1-p) + `POSITIVITY_TOL`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QubitStateRepr", into = "QubitStateRepr")]
pub struct QubitState {
    p: f64,
    c: Complex64,
}

impl TryFrom<QubitStateRepr> for QubitState {
    type Error = Error;
    fn try_from(r: QubitStateRepr) -> Result<Self> {
        QubitState::new(r.p, Complex64::new(r.c_re, r.c_im))
    }
}

impl From<QubitState> for QubitStateRepr {
    fn from(s: QubitState) -> Self {
        Self {
            p: s.p,
            c_re: s.c.re,
            c_im: s.c.im,
        }
    }
}

impl QubitState {
    pub fn new(p: f64, c: Complex64) -> Result<Self> {
        if !p.is_finite() || !c.re.is_finite() || !c.im.is_finite() {
            return Err(Error::InvalidState("entries must be finite".into()));
        }
        if !(-POSITIVITY_TOL..=1.0 + POSITIVITY_TOL).contains(&p) {
            return Err(Error::InvalidState(format!(
                "population p = {p} outside [0, 1]"
            )));
        }
        let p = p.clamp(0.0, 1.0);
        if c.norm_sqr() > p * (1.0 - p) + POSITIVITY_TOL {
            return Err(Error::InvalidState(format!(
                "|c|^2 = {} exceeds p(1-p) = {}",
                c.norm_sqr(),
                p * (1.0 - p)
            )));
        }
        Ok(Self { p, c })
    }

    pub fn diagonal(p: f64) -> Result<Self> {
        Self::new(p, Complex64::new(0.0, 0.0))
    }

    /// Ground-state population.
    #[inline]
    pub fn p(&self) -> f64 {
        self.p
    }

    /// Coherence (the upper off-diagonal entry).
    #[inline]
    pub fn c(&self) -> Complex64 {
        self.c
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.c.norm() <= tol
    }

    pub fn to_matrix(&self) -> C2Matrix {
        C2Matrix::from_rows([
            [Complex64::new(self.p, 0.0), self.c],
            [self.c.conj(), Complex64::new(1.0 - self.p, 0.0)],
        ])
    }

    pub fn from_matrix(m: &C2Matrix) -> Result<Self> {
        let tr_dev = (m.trace() - Complex64::new(1.0, 0.0)).norm();
        if tr_dev > crate::linalg::STRUCTURAL_TOL {
            return Err(Error::TraceNotUnit { deviation: tr_dev });
        }
        let herm = m.hermiticity_deviation();
        if herm > crate::linalg::STRUCTURAL_TOL {
            return Err(Error::NotHermitian { deviation: herm });
        }
        Self::new(m.at(0, 0).re, m.at(0, 1))
    }

    /// Random valid state: p ~ U(0,1), phase ~ U(0, 2 pi), coherence
    /// magnitude ~ U(0, sqrt(p(1-p))). Consumes exactly three draws.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let p: f64 = rng.random_range(0.0..1.0);
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let mag: f64 = rng.random_range(0.0..(p * (1.0 - p)).sqrt().max(f64::MIN_POSITIVE));
        Self {
            p,
            c: Complex64::from_polar(mag, phase),
        }
    }
}

/// Gibbs thermal ancilla: p = 1 / (1 + exp(-beta omega_a)), no coherences.
pub fn thermal_ancilla(beta: f64, omega_a: f64) -> Result<QubitState> {
    if !(beta.is_finite() && beta >= 0.0) {
        return Err(Error::InvalidParams("beta must be finite and >= 0".into()));
    }
    if !(omega_a.is_finite() && omega_a > 0.0) {
        return Err(Error::InvalidParams("omega_a must be > 0".into()));
    }
    QubitState::diagonal(1.0 / (1.0 + (-beta * omega_a).exp()))
}

/// Free system Hamiltonian -(omega_s/2) sigma_z.
pub fn system_hamiltonian(params: &RIParams) -> C2Matrix {
    pauli(PauliAxis::Z).scale(Complex64::new(-params.omega_s / 2.0, 0.0))
}

/// Free ancilla Hamiltonian -(omega_a/2) sigma_z.
pub fn ancilla_hamiltonian(params: &RIParams) -> C2Matrix {
    pauli(PauliAxis::Z).scale(Complex64::new(-params.omega_a / 2.0, 0.0))
}

/// Interaction term J_xx X(x)X + J_yy Y(x)Y + J_zz Z(x)Z on the joint space.
pub fn interaction_hamiltonian(params: &RIParams) -> C4Matrix {
    let xx = kron(&pauli(PauliAxis::X), &pauli(PauliAxis::X));
    let yy = kron(&pauli(PauliAxis::Y), &pauli(PauliAxis::Y));
    let zz = kron(&pauli(PauliAxis::Z), &pauli(PauliAxis::Z));
    xx.scale(Complex64::new(params.j_xx, 0.0))
        .add(&yy.scale(Complex64::new(params.j_yy, 0.0)))
        .add(&zz.scale(Complex64::new(params.j_zz, 0.0)))
}

/// H_S (x) 1 on the joint space.
pub fn system_energy_operator(params: &RIParams) -> C4Matrix {
    kron(&system_hamiltonian(params), &pauli(PauliAxis::Id))
}

/// 1 (x) H_A on the joint space.
pub fn ancilla_energy_operator(params: &RIParams) -> C4Matrix {
    kron(&pauli(PauliAxis::Id), &ancilla_hamiltonian(params))
}

/// Total Hamiltonian H_S (x) 1 + 1 (x) H_A + H_I in the |dd>, |du>, |ud>,
/// |uu> basis. Hermitian exactly: every entry is real by construction.
pub fn total_hamiltonian(params: &RIParams) -> C4Matrix {
    system_energy_operator(params)
        .add(&ancilla_energy_operator(params))
        .add(&interaction_hamiltonian(params))
}

/// Energy parameters of the two invariant 2x2 blocks:
/// theta = sqrt(4 (J_xx + J_yy)^2 + (omega_a - omega_s)^2)  (center block),
/// phi   = sqrt(4 (J_xx - J_yy)^2 + (omega_a + omega_s)^2)  (outer block).
pub fn theta_phi(params: &RIParams) -> (f64, f64) {
    let jp = params.j_xx + params.j_yy;
    let jm = params.j_xx - params.j_yy;
    let wm = params.omega_a - params.omega_s;
    let wp = params.omega_a + params.omega_s;
    (
        (4.0 * jp * jp + wm * wm).sqrt(),
        (4.0 * jm * jm + wp * wp).sqrt(),
    )
}

/// Effective inverse temperature of a diagonal state,
/// beta_s = -(1/omega_s) ln((1-p)/p).
///
/// Returns +inf for p = 1 and -inf for p = 0 (IEEE infinities are the
/// "infinite temperature parameter" signal); errors on nondiagonal states,
/// for which the quantity is undefined.
pub fn effective_beta(state: &QubitState, omega_s: f64) -> Result<f64> {
    if !state.is_diagonal(1e-12) {
        return Err(Error::NondiagonalState);
    }
    Ok(-((1.0 - state.p()) / state.p()).ln() / omega_s)
}

/// Population of a diagonal Gibbs-like state at effective inverse
/// temperature beta_s: inverse of `effective_beta`.
pub fn population_at_effective_beta(beta_s: f64, omega_s: f64) -> f64 {
    1.0 / (1.0 + (-beta_s * omega_s).exp())
}
