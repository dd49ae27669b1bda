//! State-distance measures and convergence-runtime estimation.
//!
//! For a qubit pair the trace distance reduces exactly to
//! sqrt((p_a - p_b)^2 + |c_a - c_b|^2) and the (squared-convention) fidelity
//! to Tr(rho sigma) + 2 sqrt(det rho det sigma); both are checked against
//! the eigenvalue / matrix-square-root definitions in the test suite.
//!
//! n* is the number of collisions needed to come within epsilon of the
//! steady state. For diagonal initial states the trace-distance crossing
//! has the closed form ceil(ln(eps/|p0 - p_inf|) / ln|eta|); general states
//! use the numeric first-crossing search.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{is_degenerate, steady_population, DEGENERACY_TOL};
use crate::collision::{collision_unitary, StepMap};
use crate::error::{Error, Result};
use crate::model::{thermal_ancilla, QubitState, RIParams};
use crate::thermo::LedgerCoefficients;

/// Convergence metric choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    TraceDistance,
    Infidelity,
}

impl Metric {
    /// Distance from `state` to the diagonal target diag(p_inf, 1 - p_inf).
    fn distance_to_diagonal(&self, p: f64, c: Complex64, p_inf: f64) -> f64 {
        match self {
            Metric::TraceDistance => {
                let dp = p - p_inf;
                (dp * dp + c.norm_sqr()).sqrt()
            }
            Metric::Infidelity => {
                let det_a = (p * (1.0 - p) - c.norm_sqr()).max(0.0);
                let det_b = p_inf * (1.0 - p_inf);
                let f = p * p_inf + (1.0 - p) * (1.0 - p_inf) + 2.0 * (det_a * det_b).sqrt();
                1.0 - f.clamp(0.0, 1.0)
            }
        }
    }
}

/// Trace distance (1/2) Tr |rho - sigma| between two qubit states.
///
/// The difference matrix has eigenvalues +/- sqrt(dp^2 + |dc|^2), so the
/// half-sum of their magnitudes is that square root itself.
pub fn trace_distance(a: &QubitState, b: &QubitState) -> f64 {
    let dp = a.p() - b.p();
    let dc = a.c() - b.c();
    (dp * dp + dc.norm_sqr()).sqrt()
}

/// Fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, in [0, 1].
///
/// Uses the 2x2 closed form Tr(rho sigma) + 2 sqrt(det rho det sigma); for
/// diagonal pairs this is (sqrt(p_a p_b) + sqrt((1-p_a)(1-p_b)))^2.
pub fn fidelity(a: &QubitState, b: &QubitState) -> f64 {
    let tr_ab = a.p() * b.p() + (1.0 - a.p()) * (1.0 - b.p()) + 2.0 * (a.c() * b.c().conj()).re;
    let det_a = (a.p() * (1.0 - a.p()) - a.c().norm_sqr()).max(0.0);
    let det_b = (b.p() * (1.0 - b.p()) - b.c().norm_sqr()).max(0.0);
    (tr_ab + 2.0 * (det_a * det_b).sqrt()).clamp(0.0, 1.0)
}

/// Smallest n with |eta|^n |p0 - p_inf| <= epsilon, for given rates.
///
/// Requires 0 < |eta| < 1 and epsilon > 0; returns 0 when the initial
/// distance is already within epsilon.
pub fn n_star_from_rates(p0: f64, p_inf: f64, eta: f64, epsilon: f64) -> Result<u64> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParams("epsilon must be > 0".into()));
    }
    let abs_eta = eta.abs();
    if abs_eta >= 1.0 {
        return Err(Error::Degenerate);
    }
    if abs_eta == 0.0 {
        return Err(Error::InvalidParams(
            "eta = 0: relaxation completes in a single collision, outside the \
             geometric-bound regime"
                .into(),
        ));
    }
    let d0 = (p0 - p_inf).abs();
    if d0 <= epsilon {
        return Ok(0);
    }
    let mut n = ((epsilon / d0).ln() / abs_eta.ln()).ceil().max(0.0) as u64;
    // integer fix-up: powf rounding near the boundary must not shift n
    while n > 0 && abs_eta.powf((n - 1) as f64) * d0 <= epsilon {
        n -= 1;
    }
    while abs_eta.powf(n as f64) * d0 > epsilon {
        n += 1;
    }
    Ok(n)
}

/// Closed-form lower bound on the collisions needed to bring a diagonal
/// initial state within trace distance epsilon of the steady state.
pub fn n_star_bound_diagonal(p0: f64, params: &RIParams, epsilon: f64) -> Result<u64> {
    params.validate()?;
    if is_degenerate(params, DEGENERACY_TOL) {
        return Err(Error::Degenerate);
    }
    let p_inf = steady_population(params)?;
    n_star_from_rates(p0, p_inf, crate::analytic::eta(params), epsilon)
}

/// Result of a numeric convergence search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    /// First collision count at which the distance crosses epsilon.
    pub n_star: u64,
    pub metric: Metric,
    pub epsilon: f64,
    /// Distance at n_star (<= epsilon by construction).
    pub achieved_distance: f64,
    /// Invested work accumulated over the first n_star collisions,
    /// -sum W_I^(n), from the closed-form ledger.
    pub total_work: f64,
}

/// First crossing of the epsilon threshold for an arbitrary initial state,
/// found by iterating the collision map.
///
/// Distances are measured to the diagonal steady state; the crossing is the
/// FIRST step at or below epsilon (coherence-phase oscillation can make the
/// distance non-monotone). Errors with the best distance achieved when no
/// crossing occurs within `max_steps`.
pub fn n_star_numeric(
    state0: &QubitState,
    params: &RIParams,
    epsilon: f64,
    metric: Metric,
    max_steps: u64,
) -> Result<ConvergenceReport> {
    params.validate()?;
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParams("epsilon must be > 0".into()));
    }
    let p_inf = steady_population(params)?;
    let ancilla = thermal_ancilla(params.beta, params.omega_a)?;
    let map = StepMap::from_unitary(&collision_unitary(params), &ancilla)?;
    let coeffs = LedgerCoefficients::new(params);

    let mut p = state0.p();
    let mut c = state0.c();
    let mut invested = 0.0;
    let mut best = f64::INFINITY;
    let mut n = 0u64;
    loop {
        let d = metric.distance_to_diagonal(p, c, p_inf);
        best = best.min(d);
        if d <= epsilon {
            return Ok(ConvergenceReport {
                n_star: n,
                metric,
                epsilon,
                achieved_distance: d,
                total_work: invested,
            });
        }
        if n == max_steps {
            return Err(Error::NonConvergence {
                steps: max_steps,
                best_distance: best,
            });
        }
        invested -= coeffs.at_population(p).w;
        (p, c) = map.apply(p, c);
        n += 1;
    }
}
