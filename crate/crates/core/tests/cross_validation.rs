//! Consistency between the closed-form maps and the trajectory engine, the
//! global-fixed-point behavior, ledger agreement, and the protocol-level
//! observations that tie the modules together.

mod common;

use common::*;
use num_complex::Complex64;
use qri_core::analytic::{
    coherence_sequence, eta, is_degenerate, predict_population, steady_population,
};
use qri_core::collision::{collision_unitary, run_trajectory, TrajectoryOptions};
use qri_core::metrics::{n_star_numeric, trace_distance, Metric};
use qri_core::model::{thermal_ancilla, QubitState, RIParams};
use qri_core::protocols::{randomized_thermalization, ProtocolConfig};
use qri_core::thermo::{step_energetics_closed, step_energetics_numeric};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

#[test]
fn populations_follow_geometric_law_along_trajectories() {
    let mut rng = ChaCha12Rng::seed_from_u64(21);
    let mut checked = 0;
    while checked < 60 {
        let params = sample_params(&mut rng, -5.0..5.0, 0.05..5.0, 0.01..2.0, 0.0..10.0, false);
        if is_degenerate(&params, 1e-9) {
            continue;
        }
        let state0 = QubitState::random(&mut rng);
        let record = run_trajectory(&state0, &params, 500, TrajectoryOptions::default()).unwrap();
        for (i, s) in record.states().iter().enumerate() {
            let predicted = predict_population(i as u64, state0.p(), &params);
            assert!(
                (s.p() - predicted).abs() < 1e-10,
                "n = {i}, params {params:?}"
            );
        }
        checked += 1;
    }
}

#[test]
fn coherences_follow_psi_iteration_along_trajectories() {
    let mut rng = ChaCha12Rng::seed_from_u64(22);
    let mut checked = 0;
    while checked < 60 {
        let params = sample_params(&mut rng, -5.0..5.0, 0.05..5.0, 0.01..2.0, 0.0..10.0, true);
        if is_degenerate(&params, 1e-9) {
            continue;
        }
        let state0 = QubitState::random(&mut rng);
        let record = run_trajectory(&state0, &params, 500, TrajectoryOptions::default()).unwrap();
        let predicted = coherence_sequence(500, state0.c(), &params);
        for (i, s) in record.states().iter().enumerate() {
            assert!(
                (s.c() - predicted[i]).norm() < 1e-10,
                "n = {i}, params {params:?}: {} vs {}",
                s.c(),
                predicted[i]
            );
        }
        checked += 1;
    }
}

#[test]
fn trajectories_share_a_global_fixed_point() {
    // twenty random initial states under the same map end at the same state
    let mut rng = ChaCha12Rng::seed_from_u64(23);
    let mut checked = 0;
    while checked < 8 {
        let params = sample_params(&mut rng, -3.0..3.0, 0.2..3.0, 0.1..1.5, 0.0..5.0, false);
        let e = eta(&params);
        if e.abs() > 0.99 {
            continue; // keep runs short; the bound suite covers the rest
        }
        // enough steps to shrink any unit spread below 1e-9 in population
        // and let coherences die off
        let n = 40_000u64;
        let finals: Vec<QubitState> = (0..20)
            .map(|_| {
                let s0 = QubitState::random(&mut rng);
                *run_trajectory(&s0, &params, n, TrajectoryOptions::default())
                    .unwrap()
                    .final_state()
            })
            .collect();
        let first = finals[0];
        for s in &finals[1..] {
            assert!(
                trace_distance(s, &first) < 1e-8,
                "params {params:?}, spread {}",
                trace_distance(s, &first)
            );
        }
        let p_inf = steady_population(&params).unwrap();
        assert!((first.p() - p_inf).abs() < 1e-8);
        checked += 1;
    }

    // one slow map close to the degeneracy edge
    let stiff = RIParams::new(1.0, 2.0, 0.1, 0.05, 0.0, 1.0, 0.02).unwrap();
    let e = eta(&stiff);
    assert!(e > 0.9999 && e < 1.0 - 1e-7, "eta = {e}");
    let n = (1e-10f64.ln() / e.ln()).ceil() as u64;
    let finals: Vec<QubitState> = [0.02, 0.5, 0.98]
        .iter()
        .map(|&p0| {
            let s0 = QubitState::diagonal(p0).unwrap();
            *run_trajectory(&s0, &stiff, n, TrajectoryOptions::default())
                .unwrap()
                .final_state()
        })
        .collect();
    for s in &finals[1..] {
        assert!(trace_distance(s, &finals[0]) < 1e-8);
    }
}

#[test]
fn ledger_routes_agree_on_random_draws() {
    let mut rng = ChaCha12Rng::seed_from_u64(24);
    for _ in 0..10_000 {
        let params = sample_params(&mut rng, -5.0..5.0, 0.05..5.0, 0.01..2.0, 0.0..10.0, true);
        let state = QubitState::random(&mut rng);
        let u = collision_unitary(&params);
        let numeric = step_energetics_numeric(&state, &params, &u).unwrap();
        let closed = step_energetics_closed(&state, &params);
        assert!(
            (numeric.w - closed.w).abs() < 1e-10
                && (numeric.q - closed.q).abs() < 1e-10
                && (numeric.de_s - closed.de_s).abs() < 1e-10,
            "params {params:?}"
        );
    }
}

#[test]
fn n_star_temperature_independent_with_coherences_at_jzz_zero() {
    // coherence decay carries no beta dependence and outlasts population
    // relaxation, so for small enough epsilon the crossing is
    // coherence-dominated and its count is shared across temperatures while
    // the work bill is not; at loose epsilon the beta-dependent population
    // remnant can still move the crossing by a few steps
    let state0 = QubitState::new(0.627, Complex64::new(0.459, -0.152)).unwrap();
    let betas = [0.001, 0.1, 0.5, 1.0, 10.0];
    for metric in [Metric::TraceDistance, Metric::Infidelity] {
        let mut n_values = Vec::new();
        let mut works = Vec::new();
        for &beta in &betas {
            let params = RIParams::new(1.0, 2.0, 2.0, 1.0, 0.0, beta, 0.01).unwrap();
            let report = n_star_numeric(&state0, &params, 0.001, metric, 10_000_000).unwrap();
            n_values.push(report.n_star);
            works.push(report.total_work);
        }
        assert!(
            n_values.iter().all(|&n| n == n_values[0]),
            "{metric:?}: {n_values:?}"
        );
        let spread = works
            .iter()
            .fold(0.0f64, |acc, &w| acc.max((w - works[0]).abs()));
        assert!(spread > 1e-3, "work should vary with beta: {works:?}");
    }
}

#[test]
fn randomized_protocol_wall_clock_matches_short_step_route() {
    // few long collisions and many short ones spend a comparable total time
    // reaching their respective fixed points
    let state0 = QubitState::new(0.627, Complex64::new(0.459, -0.152)).unwrap();
    let threshold = 0.02;

    let config = ProtocolConfig::new(2.0, 0.01, 100.0, 30, 5, 1.0);
    let target = thermal_ancilla(config.beta, config.omega).unwrap();
    let record = randomized_thermalization(&state0, &config).unwrap();
    let hit = record
        .states()
        .iter()
        .position(|s| trace_distance(s, &target) < threshold)
        .expect("protocol thermalizes");
    let protocol_time = hit as f64 * config.tau;

    let fig2 = RIParams::new(1.0, 2.0, 2.0, 1.0, 0.0, 1.0, 0.01).unwrap();
    let report =
        n_star_numeric(&state0, &fig2, threshold, Metric::TraceDistance, 10_000_000).unwrap();
    let short_step_time = report.n_star as f64 * fig2.tau;

    let ratio = protocol_time / short_step_time;
    assert!(
        (0.1..=10.0).contains(&ratio),
        "protocol {protocol_time} vs short-step {short_step_time}"
    );
}

#[test]
fn probed_coherence_map_ignores_population() {
    // c' must not depend on p through the 4x4 route either
    let mut rng = ChaCha12Rng::seed_from_u64(25);
    for _ in 0..50 {
        let params = sample_params(&mut rng, -4.0..4.0, 0.2..4.0, 0.01..1.5, 0.0..5.0, true);
        let u = collision_unitary(&params);
        let ancilla = thermal_ancilla(params.beta, params.omega_a).unwrap();
        let c0 = Complex64::new(0.2, -0.15);
        let lo = QubitState::new(0.3, c0).unwrap();
        let hi = QubitState::new(0.7, c0).unwrap();
        let a = qri_core::collision::ri_step(&lo, &u, &ancilla).unwrap();
        let b = qri_core::collision::ri_step(&hi, &u, &ancilla).unwrap();
        assert!((a.c() - b.c()).norm() < 1e-14);
    }
}

#[test]
fn degenerate_map_freezes_trajectories() {
    // Rabi-resonant tau: the collision acts as the identity on populations
    let params = RIParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 1.0, std::f64::consts::PI).unwrap();
    assert!(is_degenerate(&params, 1e-9));
    let state0 = QubitState::new(0.31, Complex64::new(0.1, 0.2)).unwrap();
    let record = run_trajectory(&state0, &params, 200, TrajectoryOptions::default()).unwrap();
    for s in record.states() {
        assert!((s.p() - state0.p()).abs() < 1e-9);
    }
    assert!(steady_population(&params).is_err());
}
