//! Thermalization with a few long randomized collisions.
//!
//! The regime: system and ancilla share one frequency, both transverse
//! couplings are small against it, and the collision time is long enough
//! that J tau is of order one. Couplings are redrawn uniformly at every
//! collision; a handful of such collisions drive the qubit to the ancilla's
//! thermal state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::collision::{collision_unitary, ri_step, TrajectoryRecord, TrajectoryRecordParts};
use crate::error::Result;
use crate::metrics::trace_distance;
use crate::model::{thermal_ancilla, QubitState, RIParams};
use crate::thermo::LedgerCoefficients;

/// RNG used for coupling draws; stored in outputs so runs are replayable.
pub const RNG_ALGORITHM: &str = "chacha12";

/// Configuration of one randomized-collision run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    /// Shared frequency omega = omega_s = omega_a.
    pub omega: f64,
    /// Ancilla frequency override; regime condition (i) wants this absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_a: Option<f64>,
    /// Upper bound of the uniform coupling draw.
    pub j_max: f64,
    /// Collision time (long in this protocol).
    pub tau: f64,
    /// Number of collisions.
    pub n_max: u64,
    /// RNG seed.
    pub seed: u64,
    /// Inverse bath temperature.
    pub beta: f64,
    /// Draw couplings from U(-j_max, j_max) instead of U(0, j_max).
    /// Exploratory only: the reference protocol uses nonnegative draws.
    #[serde(default)]
    pub signed_draws: bool,
    /// Also redraw J_zz each collision from the same distribution.
    /// Experimental: the reference protocol keeps J_zz = 0.
    #[serde(default)]
    pub randomize_jzz: bool,
}

impl ProtocolConfig {
    pub fn new(omega: f64, j_max: f64, tau: f64, n_max: u64, seed: u64, beta: f64) -> Self {
        Self {
            omega,
            omega_a: None,
            j_max,
            tau,
            n_max,
            seed,
            beta,
            signed_draws: false,
            randomize_jzz: false,
        }
    }

    pub fn ancilla_frequency(&self) -> f64 {
        self.omega_a.unwrap_or(self.omega)
    }

    fn base_params(&self) -> Result<RIParams> {
        // couplings are redrawn every collision; the record stores them as zero
        RIParams::new(
            self.omega,
            self.ancilla_frequency(),
            0.0,
            0.0,
            0.0,
            self.beta,
            self.tau,
        )
    }
}

/// Regime report for the three protocol conditions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegimeDiagnostics {
    /// theta / phi evaluated at J_xx = J_yy = j_max; << 1 in regime.
    pub theta_phi_ratio: f64,
    /// j_max * tau; order one in regime.
    pub j_tau: f64,
    /// Population contraction rate at the envelope coupling: eta evaluated
    /// at J_xx = J_yy = j_max. Far below one in regime.
    pub eta_at_j_max: f64,
    pub warnings: Vec<String>,
}

pub fn regime_diagnostics(config: &ProtocolConfig) -> RegimeDiagnostics {
    let omega_a = config.ancilla_frequency();
    let envelope = RIParams::new(
        config.omega,
        omega_a,
        config.j_max,
        config.j_max,
        0.0,
        config.beta,
        config.tau,
    )
    .expect("envelope parameters are valid whenever the config is");
    let (theta, phi) = crate::model::theta_phi(&envelope);
    let j_tau = config.j_max * config.tau;

    let mut warnings = Vec::new();
    if omega_a != config.omega {
        warnings.push(format!(
            "condition (i) violated: omega_s = {} differs from omega_a = {omega_a}",
            config.omega
        ));
    }
    if config.j_max > config.omega / 10.0 {
        warnings.push(format!(
            "condition (ii) at risk: j_max = {} is not small against omega = {}",
            config.j_max, config.omega
        ));
    }
    if !(0.1..=10.0).contains(&j_tau) {
        warnings.push(format!(
            "condition (iii) at risk: j_max * tau = {j_tau} is not of order one"
        ));
    }
    if config.signed_draws {
        warnings.push("signed coupling draws: outside the reference protocol".into());
    }
    if config.randomize_jzz {
        warnings.push("randomized J_zz: experimental extension".into());
    }

    RegimeDiagnostics {
        theta_phi_ratio: theta / phi,
        j_tau,
        eta_at_j_max: crate::analytic::eta(&envelope),
        warnings,
    }
}

/// Run one randomized-collision trajectory.
///
/// Each collision draws J_xx then J_yy uniformly (plus J_zz in the
/// experimental mode), rebuilds the collision unitary, and applies one full
/// 4x4 repeated-interaction step. Deterministic for a given seed. The
/// record's params field carries the frozen non-random fields with the
/// couplings zeroed, since those are redrawn every collision.
pub fn randomized_thermalization(
    state0: &QubitState,
    config: &ProtocolConfig,
) -> Result<TrajectoryRecord> {
    if !config.j_max.is_finite() || config.j_max <= 0.0 {
        return Err(crate::error::Error::InvalidParams(
            "j_max must be > 0".into(),
        ));
    }
    let base = config.base_params()?;
    let ancilla = thermal_ancilla(base.beta, base.omega_a)?;
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let lo = if config.signed_draws {
        -config.j_max
    } else {
        0.0
    };

    let mut states = Vec::with_capacity(config.n_max as usize + 1);
    let mut ledgers = Vec::with_capacity(config.n_max as usize);
    states.push(*state0);
    let mut state = *state0;
    for _ in 0..config.n_max {
        let j_xx = rng.random_range(lo..config.j_max);
        let j_yy = rng.random_range(lo..config.j_max);
        let j_zz = if config.randomize_jzz {
            rng.random_range(lo..config.j_max)
        } else {
            0.0
        };
        let params = RIParams {
            j_xx,
            j_yy,
            j_zz,
            ..base
        };
        let unitary = collision_unitary(&params);
        ledgers.push(LedgerCoefficients::new(&params).at_population(state.p()));
        state = ri_step(&state, &unitary, &ancilla)?;
        states.push(state);
    }

    Ok(TrajectoryRecord::from_parts(TrajectoryRecordParts {
        params: base,
        n_steps: config.n_max,
        steps: (0..=config.n_max).collect(),
        states,
        ledgers: Some(ledgers),
    }))
}

/// Ensemble summary over consecutive seeds.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub seeds_run: u64,
    /// Fraction of seeds whose trajectory crossed the threshold.
    pub success_fraction: f64,
    /// Median collisions to reach the threshold, over successful seeds.
    pub median_n_to_threshold: Option<f64>,
    pub threshold: f64,
    pub rng_algorithm: String,
}

/// Run `n_seeds` consecutive seeds (config.seed, config.seed + 1, ...) and
/// report how fast each trajectory reaches trace distance `threshold` from
/// the ancilla's thermal state.
pub fn run_seed_ensemble(
    state0: &QubitState,
    config: &ProtocolConfig,
    n_seeds: u64,
    threshold: f64,
) -> Result<EnsembleSummary> {
    let target = thermal_ancilla(config.beta, config.ancilla_frequency())?;
    let mut crossings = Vec::new();
    for k in 0..n_seeds {
        let run_config = ProtocolConfig {
            seed: config.seed.wrapping_add(k),
            ..*config
        };
        let record = randomized_thermalization(state0, &run_config)?;
        let hit = record
            .states()
            .iter()
            .position(|s| trace_distance(s, &target) < threshold);
        if let Some(ix) = hit {
            crossings.push(record.steps()[ix]);
        }
    }
    crossings.sort_unstable();
    let median = if crossings.is_empty() {
        None
    } else {
        let mid = crossings.len() / 2;
        Some(if crossings.len() % 2 == 1 {
            crossings[mid] as f64
        } else {
            (crossings[mid - 1] + crossings[mid]) as f64 / 2.0
        })
    };
    Ok(EnsembleSummary {
        seeds_run: n_seeds,
        success_fraction: crossings.len() as f64 / n_seeds as f64,
        median_n_to_threshold: median,
        threshold,
        rng_algorithm: RNG_ALGORITHM.to_string(),
    })
}
