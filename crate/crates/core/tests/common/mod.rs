//! Independent oracles for the integration suites.
//!
//! Nothing here calls into the implementation paths it is used to check:
//! exponentials come from an eigendecomposition, populations from a literal
//! transcription of the per-collision recursion, distances from the
//! eigenvalue / matrix-square-root definitions.

#![allow(dead_code)]

use num_complex::Complex64;
use qri_core::linalg::C2Matrix;
use qri_core::model::RIParams;
use rand::Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigendecomposition of a 2x2 Hermitian matrix: (eigenvalues, eigenvectors
/// as columns).
pub fn eigh_2x2(h: &C2Matrix) -> ([f64; 2], [[Complex64; 2]; 2]) {
    let a = h.at(0, 0).re;
    let d = h.at(1, 1).re;
    let b = h.at(0, 1);
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    let lam = [mean + half_gap, mean - half_gap];

    let mut vecs = [[c(0.0, 0.0); 2]; 2];
    for (k, &l) in lam.iter().enumerate() {
        // (h - l) v = 0; pick the better-conditioned row
        let (mut v0, mut v1) = (b, c(l - a, 0.0));
        if v0.norm() + v1.norm() < 1e-14 {
            (v0, v1) = (c(l - d, 0.0), b.conj());
        }
        if v0.norm() + v1.norm() < 1e-14 {
            (v0, v1) = if k == 0 {
                (c(1.0, 0.0), c(0.0, 0.0))
            } else {
                (c(0.0, 0.0), c(1.0, 0.0))
            };
        }
        let norm = (v0.norm_sqr() + v1.norm_sqr()).sqrt();
        vecs[0][k] = v0 / norm;
        vecs[1][k] = v1 / norm;
    }
    (lam, vecs)
}

/// exp(-i h t) through the eigendecomposition, independent of the Pauli
/// closed form.
pub fn exp_via_eigendecomposition(h: &C2Matrix, t: f64) -> C2Matrix {
    let (lam, v) = eigh_2x2(h);
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for (k, &l) in lam.iter().enumerate() {
        let phase = (c(0.0, -1.0) * l * t).exp();
        for r in 0..2 {
            for s in 0..2 {
                out[r][s] += phase * v[r][k] * v[s][k].conj();
            }
        }
    }
    C2Matrix::from_rows(out)
}

/// Eigenvalues of a 2x2 Hermitian matrix, descending.
pub fn eigvals_2x2(h: &C2Matrix) -> [f64; 2] {
    eigh_2x2(h).0
}

/// Trace distance (1/2) Tr |rho - sigma| from the eigenvalues of the
/// difference matrix.
pub fn trace_distance_eig(rho: &C2Matrix, sigma: &C2Matrix) -> f64 {
    let diff = rho.sub(sigma);
    let lam = eigvals_2x2(&diff);
    0.5 * (lam[0].abs() + lam[1].abs())
}

/// Hermitian square root of a PSD 2x2 matrix.
pub fn sqrtm_psd(m: &C2Matrix) -> C2Matrix {
    let (lam, v) = eigh_2x2(m);
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for (k, &l) in lam.iter().enumerate() {
        let root = l.max(0.0).sqrt();
        for r in 0..2 {
            for s in 0..2 {
                out[r][s] += root * v[r][k] * v[s][k].conj();
            }
        }
    }
    C2Matrix::from_rows(out)
}

/// Fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 evaluated literally
/// through matrix square roots.
pub fn fidelity_sqrtm(rho: &C2Matrix, sigma: &C2Matrix) -> f64 {
    let root = sqrtm_psd(rho);
    let inner = root.mul(sigma).mul(&root);
    let lam = eigvals_2x2(&inner);
    let tr = lam[0].max(0.0).sqrt() + lam[1].max(0.0).sqrt();
    tr * tr
}

/// Literal transcription of the single-collision population recursion
/// (the "seemingly cumbersome" exact form), used as the oracle for one
/// repeated-interaction step.
pub fn population_step_reference(p: f64, p_a: f64, params: &RIParams) -> f64 {
    let jp = params.j_xx + params.j_yy;
    let jm = params.j_xx - params.j_yy;
    let wm = params.omega_a - params.omega_s;
    let wp = params.omega_a + params.omega_s;
    let theta = (4.0 * jp * jp + wm * wm).sqrt();
    let phi = (4.0 * jm * jm + wp * wp).sqrt();
    let tau = params.tau;
    let s_phi2 = (phi * tau / 2.0).sin().powi(2);
    let s_theta2 = (theta * tau / 2.0).sin().powi(2);

    4.0 * jm * jm / (phi * phi) * (1.0 - p_a) * s_phi2
        + 4.0 * p_a * jp * jp / (theta * theta) * s_theta2
        + p * (0.5 * (1.0 - p_a) * (1.0 + (theta * tau).cos())
            - 4.0 * (1.0 - p_a) * jm * jm / (phi * phi) * s_phi2
            + p_a * (phi * tau / 2.0).cos().powi(2)
            - 4.0 * p_a * jp * jp / (theta * theta) * s_theta2
            + (1.0 - p_a) * wm * wm / (theta * theta) * s_theta2
            + p_a * wp * wp / (phi * phi) * s_phi2)
}

/// Independent route to the steady population, written with (1 - cos)
/// factors instead of the sinc form the implementation uses.
pub fn steady_population_reference(p_a: f64, params: &RIParams) -> f64 {
    let jp = params.j_xx + params.j_yy;
    let jm = params.j_xx - params.j_yy;
    let wm = params.omega_a - params.omega_s;
    let wp = params.omega_a + params.omega_s;
    let theta2 = 4.0 * jp * jp + wm * wm;
    let phi2 = 4.0 * jm * jm + wp * wp;
    let tau = params.tau;
    let oc_phi = 1.0 - (phi2.sqrt() * tau).cos();
    let oc_theta = 1.0 - (theta2.sqrt() * tau).cos();
    (theta2 * oc_phi * jm * jm * (1.0 - p_a) + phi2 * oc_theta * jp * jp * p_a)
        / (phi2 * oc_theta * jp * jp + theta2 * oc_phi * jm * jm)
}

/// Draw parameters uniformly over the given ranges.
pub fn sample_params<R: Rng + ?Sized>(
    rng: &mut R,
    coupling_range: std::ops::Range<f64>,
    freq_range: std::ops::Range<f64>,
    tau_range: std::ops::Range<f64>,
    beta_range: std::ops::Range<f64>,
    with_jzz: bool,
) -> RIParams {
    RIParams::new(
        rng.random_range(freq_range.clone()),
        rng.random_range(freq_range),
        rng.random_range(coupling_range.clone()),
        rng.random_range(coupling_range.clone()),
        if with_jzz {
            rng.random_range(coupling_range)
        } else {
            0.0
        },
        rng.random_range(beta_range),
        rng.random_range(tau_range),
    )
    .expect("sampled parameters are in range")
}
