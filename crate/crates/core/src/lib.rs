//! Exact simulator and analytics toolkit for a qubit relaxing through
//! repeated interactions (collisions) with thermal spin ancillas.
//!
//! The crate is organized around a small set of modules:
//!
//! - [`linalg`]: exact 2x2 / 4x4 complex matrix kernel (Pauli algebra,
//!   closed-form exponentials, partial trace over the ancilla).
//! - [`model`]: physical parameters, qubit states in (p, c) form, thermal
//!   ancilla preparation, Hamiltonian builders.
//! - [`collision`]: the collision unitary and brute-force trajectory
//!   iteration. This is the numerical ground truth everything else is
//!   checked against.
//! - [`analytic`]: closed-form relaxation rate, steady-state population,
//!   and coherence maps, including degeneracy (resonance) detection.
//! - [`thermo`]: per-collision work/heat/internal-energy bookkeeping with
//!   first-law enforcement.
//! - [`metrics`]: trace distance, fidelity, and convergence-runtime
//!   estimation (closed-form bound and numeric search).
//! - [`protocols`]: thermalization with a few long randomized collisions.
//!
//! All quantities use natural units with hbar = 1; energies and inverse
//! temperatures are in the same units, collision time in inverse energy.

pub mod analytic;
pub mod collision;
mod error;
pub mod linalg;
pub mod metrics;
pub mod model;
pub mod protocols;
pub mod thermo;

pub use error::{Error, Result};
