//! Minimal exact complex-matrix kernel for 2x2 and 4x4 Hermitian/unitary
//! algebra.
//!
//! The basis ordering is fixed once for the whole crate: the qubit basis is
//! {|down>, |up>} with |down> the ground state of -(omega/2) sigma_z, and the
//! joint system-ancilla basis is |dd>, |du>, |ud>, |uu> (system factor first).
//! Matrix exponentials are computed in closed form through the Pauli
//! decomposition, never by series truncation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for structural checks (Hermiticity, unitarity, unit trace).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for cross-validation checks that accumulate over long runs.
pub const CROSS_VALIDATION_TOL: f64 = 1e-10;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// sin(x)/x with the removable singularity filled by its Taylor series.
///
/// The series branch is exact to f64 precision for |x| < 1e-4, which covers
/// the degenerate theta = 0 (and hypothetical phi = 0) limits downstream.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Pauli operator label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    Id,
}

/// Dense 2x2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C2Matrix {
    e: [[Complex64; 2]; 2],
}

impl C2Matrix {
    pub fn from_rows(rows: [[Complex64; 2]; 2]) -> Self {
        Self { e: rows }
    }

    pub fn zeros() -> Self {
        Self { e: [[ZERO; 2]; 2] }
    }

    pub fn identity() -> Self {
        Self {
            e: [[ONE, ZERO], [ZERO, ONE]],
        }
    }

    pub fn diag(a: Complex64, b: Complex64) -> Self {
        Self {
            e: [[a, ZERO], [ZERO, b]],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.e[r][c]
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..2 {
            for c in 0..2 {
                let mut acc = ZERO;
                for k in 0..2 {
                    acc += self.e[r][k] * other.e[k][c];
                }
                out.e[r][c] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] += other.e[r][c];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] -= other.e[r][c];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for r in 0..2 {
            for c in 0..2 {
                out.e[r][c] = self.e[c][r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1]
    }

    /// Largest entry magnitude of self - other.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..2 {
            for c in 0..2 {
                m = m.max((self.e[r][c] - other.e[r][c]).norm());
            }
        }
        m
    }

    /// Deviation from Hermiticity, max |A - A^dagger| over entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Deviation from unitarity, max |U^dagger U - 1| over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Self::identity())
    }
}

/// Dense 4x4 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C4Matrix {
    e: [[Complex64; 4]; 4],
}

impl C4Matrix {
    pub fn from_rows(rows: [[Complex64; 4]; 4]) -> Self {
        Self { e: rows }
    }

    pub fn zeros() -> Self {
        Self { e: [[ZERO; 4]; 4] }
    }

    pub fn identity() -> Self {
        let mut m = Self::zeros();
        for k in 0..4 {
            m.e[k][k] = ONE;
        }
        m
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.e[r][c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.e[r][c] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += self.e[r][k] * other.e[k][c];
                }
                out.e[r][c] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.e[r][c] += other.e[r][c];
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.e[r][c] -= other.e[r][c];
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.e[r][c] *= s;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                out.e[r][c] = self.e[c][r].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|k| self.e[k][k]).sum()
    }

    /// U . self . U^dagger.
    pub fn conjugated_by(&self, u: &Self) -> Self {
        u.mul(self).mul(&u.adjoint())
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut m = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                m = m.max((self.e[r][c] - other.e[r][c]).norm());
            }
        }
        m
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Deviation from unitarity, max |U^dagger U - 1| over entries.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Self::identity())
    }
}

/// Standard Pauli matrix in the {|down>, |up>} ordering.
///
/// sigma_z = diag(1, -1) so that H = -(omega/2) sigma_z assigns the ground
/// energy -omega/2 to |down>, consistent with the joint-basis Hamiltonian.
pub fn pauli(axis: PauliAxis) -> C2Matrix {
    match axis {
        PauliAxis::X => C2Matrix::from_rows([[ZERO, ONE], [ONE, ZERO]]),
        PauliAxis::Y => C2Matrix::from_rows([[ZERO, -I], [I, ZERO]]),
        PauliAxis::Z => C2Matrix::diag(ONE, -ONE),
        PauliAxis::Id => C2Matrix::identity(),
    }
}

/// Closed-form unitary exp(-i h t) for Hermitian h.
///
/// Decomposes h = a*1 + b.sigma and evaluates
/// exp(-i h t) = exp(-i a t) [cos(|b| t) 1 - i sin(|b| t) (b_hat . sigma)],
/// with the |b| -> 0 limit handled through sinc. Rejects non-Hermitian input.
pub fn exp_2x2_hermitian(h: &C2Matrix, t: f64) -> Result<C2Matrix> {
    let dev = h.hermiticity_deviation();
    if dev > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    let a = 0.5 * (h.at(0, 0).re + h.at(1, 1).re);
    let bz = 0.5 * (h.at(0, 0).re - h.at(1, 1).re);
    let bx = h.at(0, 1).re;
    let by = -h.at(0, 1).im;
    let bnorm = (bx * bx + by * by + bz * bz).sqrt();

    let phase = (-I * a * t).exp();
    let cos_bt = (bnorm * t).cos();
    // sin(|b| t) / |b| = t sinc(|b| t), finite as |b| -> 0
    let sin_over_b = t * sinc(bnorm * t);

    let mut out = C2Matrix::zeros();
    let cb = Complex64::new(cos_bt, 0.0);
    let f = Complex64::new(sin_over_b, 0.0);
    out = out.add(&C2Matrix::identity().scale(cb));
    let b_dot_sigma = C2Matrix::from_rows([
        [Complex64::new(bz, 0.0), Complex64::new(bx, -by)],
        [Complex64::new(bx, by), Complex64::new(-bz, 0.0)],
    ]);
    out = out.sub(&b_dot_sigma.scale(I * f));
    Ok(out.scale(phase))
}

/// Kronecker product in system (x) ancilla order.
///
/// Index layout: row 2*s + a for system index s and ancilla index a, matching
/// the |dd>, |du>, |ud>, |uu> joint basis.
pub fn kron(a: &C2Matrix, b: &C2Matrix) -> C4Matrix {
    let mut out = C4Matrix::zeros();
    for sa in 0..2 {
        for sb in 0..2 {
            for aa in 0..2 {
                for ab in 0..2 {
                    out.e[2 * sa + aa][2 * sb + ab] = a.at(sa, sb) * b.at(aa, ab);
                }
            }
        }
    }
    out
}

/// Reduced system state: trace of a two-qubit density matrix over the
/// ancilla factor.
///
/// Requires a Hermitian input with unit trace (to `STRUCTURAL_TOL`); the
/// output trace equals the input trace exactly up to rounding.
pub fn partial_trace_ancilla(rho: &C4Matrix) -> Result<C2Matrix> {
    let tr_dev = (rho.trace() - ONE).norm();
    if tr_dev > STRUCTURAL_TOL {
        return Err(Error::TraceNotUnit { deviation: tr_dev });
    }
    let herm_dev = rho.hermiticity_deviation();
    if herm_dev > STRUCTURAL_TOL {
        return Err(Error::NotHermitian {
            deviation: herm_dev,
        });
    }
    Ok(partial_trace_ancilla_raw(rho))
}

/// Partial trace without contract checks; linear in its input.
pub(crate) fn partial_trace_ancilla_raw(rho: &C4Matrix) -> C2Matrix {
    let mut out = C2Matrix::zeros();
    for s in 0..2 {
        for sp in 0..2 {
            out.e[s][sp] = rho.at(2 * s, 2 * sp) + rho.at(2 * s + 1, 2 * sp + 1);
        }
    }
    out
}
