//! Closed-form dynamical maps and steady-state predictors.
//!
//! The population map per collision is affine, p' = eta p + (1 - eta) p_inf,
//! with a rate eta and fixed point p_inf that depend only on the couplings,
//! frequencies, collision time, and (for p_inf) the ancilla population.
//! Coherences evolve through the complex factor psi (psi-tilde once a
//! J_zz sigma_z(x)sigma_z term is present), applied to |c| with the running
//! phase chi re-extracted each collision.
//!
//! Every formula is written in terms of the contraction weights
//!
//!   m_theta = 4 (J_xx + J_yy)^2 / theta^2 sin^2(theta tau / 2)
//!   m_phi   = 4 (J_xx - J_yy)^2 / phi^2   sin^2(phi tau / 2)
//!
//! evaluated in sinc form, (J tau)^2 sinc^2(x tau / 2), so the degenerate
//! theta = 0 point (J_xx = -J_yy with omega_a = omega_s) is exact rather
//! than 0/0.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::sinc;
use crate::model::{thermal_ancilla, theta_phi, RIParams};

/// Default tolerance on 1 - eta below which parameters are treated as
/// degenerate (the Rabi-resonance set where the map is the identity).
pub const DEGENERACY_TOL: f64 = 1e-12;

/// The two contraction weights plus the block energies they derive from.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RateParts {
    pub theta: f64,
    pub phi: f64,
    pub m_theta: f64,
    pub m_phi: f64,
}

pub(crate) fn rate_parts(params: &RIParams) -> RateParts {
    let (theta, phi) = theta_phi(params);
    let jp = params.j_xx + params.j_yy;
    let jm = params.j_xx - params.j_yy;
    let half_t = 0.5 * params.tau;
    let m_theta = (jp * params.tau) * (jp * params.tau) * sinc(theta * half_t).powi(2);
    let m_phi = (jm * params.tau) * (jm * params.tau) * sinc(phi * half_t).powi(2);
    RateParts {
        theta,
        phi,
        m_theta,
        m_phi,
    }
}

/// Geometric relaxation rate of populations,
/// eta = 1 - m_theta - m_phi. Independent of the ancilla temperature.
pub fn eta(params: &RIParams) -> f64 {
    let parts = rate_parts(params);
    1.0 - parts.m_theta - parts.m_phi
}

/// True when 1 - eta < tol: both contraction weights vanish and populations
/// are frozen (tau theta and tau phi sitting on full Rabi periods, or both
/// couplings zero).
pub fn is_degenerate(params: &RIParams, tol: f64) -> bool {
    debug_assert!(tol > 0.0);
    1.0 - eta(params) < tol
}

/// Steady-state ground population,
/// p_inf = (m_theta p_A + m_phi (1 - p_A)) / (m_theta + m_phi).
///
/// A convex combination of p_A and 1 - p_A, hence always in [0, 1]. Errors
/// on degenerate parameters, for which no steady state exists.
pub fn steady_population(params: &RIParams) -> Result<f64> {
    let parts = rate_parts(params);
    let denom = parts.m_theta + parts.m_phi;
    if denom < DEGENERACY_TOL {
        return Err(Error::Degenerate);
    }
    let p_a = thermal_ancilla(params.beta, params.omega_a)?.p();
    Ok((parts.m_theta * p_a + parts.m_phi * (1.0 - p_a)) / denom)
}

/// Second-order short-time limit of the steady population,
/// (4 p_A J_xx J_yy + (J_xx - J_yy)^2) / (2 (J_xx^2 + J_yy^2)).
///
/// Errors when both transverse couplings vanish.
pub fn steady_population_short_tau(params: &RIParams) -> Result<f64> {
    let j2 = params.j_xx * params.j_xx + params.j_yy * params.j_yy;
    if j2 == 0.0 {
        return Err(Error::CouplingsVanish);
    }
    let p_a = thermal_ancilla(params.beta, params.omega_a)?.p();
    let jm = params.j_xx - params.j_yy;
    Ok((4.0 * p_a * params.j_xx * params.j_yy + jm * jm) / (2.0 * j2))
}

/// Population after n collisions, p_inf + eta^n (p0 - p_inf).
///
/// On degenerate parameters the map is the identity and p0 is returned for
/// every n; check [`is_degenerate`] (or [`relaxation_summary`]) when the
/// distinction matters.
pub fn predict_population(n: u64, p0: f64, params: &RIParams) -> f64 {
    let parts = rate_parts(params);
    let one_minus_eta = parts.m_theta + parts.m_phi;
    if n == 0 || one_minus_eta < DEGENERACY_TOL {
        return p0;
    }
    let p_a = thermal_ancilla(params.beta, params.omega_a)
        .expect("params were validated")
        .p();
    let p_inf = (parts.m_theta * p_a + parts.m_phi * (1.0 - p_a)) / one_minus_eta;
    let eta = 1.0 - one_minus_eta;
    p_inf + eta.powf(n as f64) * (p0 - p_inf)
}

/// The two building blocks of the coherence factor:
/// s = 4 (J_xx^2 - J_yy^2) / (theta phi) sin(theta tau/2) sin(phi tau/2),
/// g = (cos(theta tau/2) - i (wa - ws)/theta sin(theta tau/2))
///     (cos(phi tau/2)   + i (wa + ws)/phi   sin(phi tau/2)),
/// both in sinc form.
pub(crate) fn coherence_parts(params: &RIParams) -> (f64, Complex64) {
    let (theta, phi) = theta_phi(params);
    let jp = params.j_xx + params.j_yy;
    let jm = params.j_xx - params.j_yy;
    let wm = params.omega_a - params.omega_s;
    let wp = params.omega_a + params.omega_s;
    let half_t = 0.5 * params.tau;
    let sinc_theta = sinc(theta * half_t);
    let sinc_phi = sinc(phi * half_t);

    let s = (jp * params.tau) * (jm * params.tau) * sinc_theta * sinc_phi;
    let g_theta = Complex64::new((theta * half_t).cos(), -wm * half_t * sinc_theta);
    let g_phi = Complex64::new((phi * half_t).cos(), wp * half_t * sinc_phi);
    (s, g_theta * g_phi)
}

/// Coherence iteration factor for the transverse (J_zz = 0) model,
/// psi = s e^{-i chi} + g e^{i chi}, such that c' = psi |c|.
pub fn psi(params: &RIParams, chi: f64) -> Complex64 {
    let (s, g) = coherence_parts(params);
    s * Complex64::from_polar(1.0, -chi) + g * Complex64::from_polar(1.0, chi)
}

/// Coherence iteration factor with the J_zz term.
///
/// Relative to `psi`, the block phases shift chi by 2 J_zz tau and an
/// ancilla-population-weighted term proportional to sin(2 J_zz tau) appears;
/// at J_zz = 0 this reduces to `psi` exactly. The ancilla population is an
/// explicit argument so the bound can be sampled over p_A directly.
pub fn psi_tilde(params: &RIParams, chi: f64, p_a: f64) -> Complex64 {
    let (s, g) = coherence_parts(params);
    let shift = 2.0 * params.j_zz * params.tau;
    let two_i_pa_sin = Complex64::new(0.0, 2.0 * p_a * shift.sin());
    s * Complex64::from_polar(1.0, -(chi + shift))
        + g * Complex64::from_polar(1.0, chi + shift)
        + two_i_pa_sin
            * (s * Complex64::from_polar(1.0, -chi) - g * Complex64::from_polar(1.0, chi))
}

/// Coherence after n collisions, iterating c <- psi_tilde(chi(c)) |c| with
/// the phase chi = arg(c) re-extracted every step. c0 = 0 stays 0 (the
/// polar form leaves chi undefined there).
pub fn predict_coherence(n: u64, c0: Complex64, params: &RIParams) -> Complex64 {
    coherence_sequence(n, c0, params)
        .last()
        .copied()
        .unwrap_or(c0)
}

/// Full coherence history c^(0), ..., c^(n) under the closed-form map.
pub fn coherence_sequence(n: u64, c0: Complex64, params: &RIParams) -> Vec<Complex64> {
    let p_a = thermal_ancilla(params.beta, params.omega_a)
        .expect("params were validated")
        .p();
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(c0);
    let mut c = c0;
    for _ in 0..n {
        if c == Complex64::new(0.0, 0.0) {
            out.push(c);
            continue;
        }
        let chi = c.im.atan2(c.re);
        c = psi_tilde(params, chi, p_a) * c.norm();
        out.push(c);
    }
    out
}

/// Bundle of the relaxation descriptors for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaxationSummary {
    pub eta: f64,
    /// Steady population; `None` on degenerate parameters.
    pub p_inf: Option<f64>,
    pub theta: f64,
    pub phi: f64,
    pub degenerate: bool,
    /// Short-time limit of p_inf; `None` when both couplings vanish.
    pub p_inf_short_tau: Option<f64>,
}

pub fn relaxation_summary(params: &RIParams) -> RelaxationSummary {
    let parts = rate_parts(params);
    let degenerate = parts.m_theta + parts.m_phi < DEGENERACY_TOL;
    RelaxationSummary {
        eta: 1.0 - parts.m_theta - parts.m_phi,
        p_inf: steady_population(params).ok(),
        theta: parts.theta,
        phi: parts.phi,
        degenerate,
        p_inf_short_tau: steady_population_short_tau(params).ok(),
    }
}
