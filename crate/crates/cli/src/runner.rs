//! Experiment dispatch: validated config in, CSV/JSON files and a one-line
//! summary out.
//!
//! Grid handling: sweep and steady grids evaluate per point. Degenerate
//! points inside a grid are reported in place (steady rows carry a flag,
//! sweep rows are skipped and counted); a single-point run on degenerate
//! parameters is refused outright, since there is no steady state to
//! converge to. Non-convergent sweep points leave the rows that did
//! converge on disk and the run exits nonzero.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use qri_core::analytic::{is_degenerate, relaxation_summary, DEGENERACY_TOL};
use qri_core::collision::{run_trajectory, TrajectoryOptions, TrajectoryRecord};
use qri_core::metrics::{n_star_numeric, Metric};
use qri_core::protocols::{
    randomized_thermalization, regime_diagnostics, run_seed_ensemble, ProtocolConfig,
};
use qri_core::thermo::asymptotic_housekeeping;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::CliError;

/// What a run produced: the one-line summary and every file written.
#[derive(Debug)]
pub struct RunOutcome {
    pub summary_line: String,
    pub files: Vec<PathBuf>,
}

pub fn run(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    config.validate()?;
    match config.kind {
        ExperimentKind::Simulate => run_simulate(config),
        ExperimentKind::Steady => run_steady(config),
        ExperimentKind::Resources => run_resources(config),
        ExperimentKind::Sweep => run_sweep(config),
        ExperimentKind::Thermalize => run_thermalize(config),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// fig2.csv -> fig2<suffix> (suffix carries its own extension).
fn sibling(path: &str, suffix: &str) -> PathBuf {
    let p = Path::new(path);
    let stem = p.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    p.with_file_name(format!("{stem}{suffix}"))
}

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

fn metric_name(metric: Metric) -> &'static str {
    match metric {
        Metric::TraceDistance => "trace_distance",
        Metric::Infidelity => "infidelity",
    }
}

fn trajectory_csv(record: &TrajectoryRecord) -> Result<String, CliError> {
    let mut buf = Vec::new();
    record.write_csv(&mut buf).map_err(|source| CliError::Io {
        path: "<memory>".into(),
        source,
    })?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

fn run_simulate(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let state0 = config.initial_state.resolve()?;
    let options = TrajectoryOptions {
        with_ledger: config.with_ledger,
        stride: config.stride,
    };
    let points = config.grid_points();
    let mut files = Vec::new();

    if config.sweep_axes.is_empty() {
        let record = run_trajectory(&state0, &config.params, config.n_steps, options)?;
        let path = PathBuf::from(&config.output_path);
        write_file(&path, &trajectory_csv(&record)?)?;
        files.push(path);
        let last = record.final_state();
        return Ok(RunOutcome {
            summary_line: format!(
                "simulate: {} collisions, final p = {:.6}, final |c| = {:.6} -> {}",
                config.n_steps,
                last.p(),
                last.c().norm(),
                config.output_path
            ),
            files,
        });
    }

    let axis_names: Vec<&str> = config.sweep_axes.iter().map(|a| a.axis()).collect();
    let mut runs = Vec::new();
    let mut last_final = None;
    for (k, (coords, params, _eps)) in points.iter().enumerate() {
        let record = run_trajectory(&state0, params, config.n_steps, options)?;
        let path = sibling(&config.output_path, &format!("_{k:03}.csv"));
        write_file(&path, &trajectory_csv(&record)?)?;
        let last = *record.final_state();
        let axes: serde_json::Map<String, serde_json::Value> = axis_names
            .iter()
            .zip(coords)
            .map(|(name, v)| ((*name).to_string(), serde_json::json!(v)))
            .collect();
        runs.push(serde_json::json!({
            "index": k,
            "axes": axes,
            "file": path.display().to_string(),
            "final_p": last.p(),
            "final_c_re": last.c().re,
            "final_c_im": last.c().im,
        }));
        files.push(path);
        last_final = Some(last);
    }
    let summary_path = sibling(&config.output_path, "_summary.json");
    let summary = serde_json::json!({
        "schema_version": crate::config::SCHEMA_VERSION,
        "kind": "simulate",
        "n_steps": config.n_steps,
        "runs": runs,
    });
    write_file(
        &summary_path,
        &serde_json::to_string_pretty(&summary).unwrap(),
    )?;
    files.push(summary_path);

    let last = last_final.expect("grid has at least one point");
    Ok(RunOutcome {
        summary_line: format!(
            "simulate: {} grid runs x {} collisions, last final p = {:.6}, |c| = {:.6} -> {}",
            points.len(),
            config.n_steps,
            last.p(),
            last.c().norm(),
            config.output_path
        ),
        files,
    })
}

fn run_steady(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    if config.sweep_axes.is_empty() {
        if is_degenerate(&config.params, DEGENERACY_TOL) {
            return Err(CliError::from(qri_core::Error::Degenerate));
        }
        let summary = relaxation_summary(&config.params);
        let path = PathBuf::from(&config.output_path);
        write_file(&path, &serde_json::to_string_pretty(&summary).unwrap())?;
        return Ok(RunOutcome {
            summary_line: format!(
                "steady: eta = {:.6}, p_inf = {:.6} -> {}",
                summary.eta,
                summary.p_inf.unwrap_or(f64::NAN),
                config.output_path
            ),
            files: vec![path],
        });
    }

    let points = config.grid_points();
    let axis_names: Vec<&str> = config.sweep_axes.iter().map(|a| a.axis()).collect();
    let rows: Vec<String> = points
        .par_iter()
        .map(|(coords, params, _)| {
            let s = relaxation_summary(params);
            let mut row = String::new();
            for v in coords {
                write!(row, "{},", fmt_f(*v)).unwrap();
            }
            write!(
                row,
                "{},{},{},{},{}",
                fmt_f(s.eta),
                fmt_f(s.p_inf.unwrap_or(f64::NAN)),
                fmt_f(s.theta),
                fmt_f(s.phi),
                s.degenerate
            )
            .unwrap();
            row
        })
        .collect();

    let mut csv = String::new();
    writeln!(
        csv,
        "{},eta,p_inf,theta,phi,degenerate",
        axis_names.join(",")
    )
    .unwrap();
    for row in &rows {
        writeln!(csv, "{row}").unwrap();
    }
    let path = PathBuf::from(&config.output_path);
    write_file(&path, &csv)?;
    let degenerate_count = rows.iter().filter(|r| r.ends_with("true")).count();
    Ok(RunOutcome {
        summary_line: format!(
            "steady: {} grid points ({} degenerate) -> {}",
            points.len(),
            degenerate_count,
            config.output_path
        ),
        files: vec![path],
    })
}

fn run_resources(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let state0 = config.initial_state.resolve()?;
    if is_degenerate(&config.params, DEGENERACY_TOL) {
        return Err(CliError::from(qri_core::Error::Degenerate));
    }
    let path = PathBuf::from(&config.output_path);
    match n_star_numeric(
        &state0,
        &config.params,
        config.epsilon,
        config.metric,
        config.max_steps,
    ) {
        Ok(report) => {
            let (w_inf, q_inf) = asymptotic_housekeeping(&config.params)?;
            let json = serde_json::json!({
                "schema_version": crate::config::SCHEMA_VERSION,
                "n_star": report.n_star,
                "metric": metric_name(report.metric),
                "epsilon": report.epsilon,
                "achieved_distance": report.achieved_distance,
                "total_work": report.total_work,
                "w_inf": w_inf,
                "q_inf": q_inf,
            });
            write_file(&path, &serde_json::to_string_pretty(&json).unwrap())?;
            Ok(RunOutcome {
                summary_line: format!(
                    "resources: n* = {} ({}, epsilon = {}), total work = {:.6e} -> {}",
                    report.n_star,
                    metric_name(report.metric),
                    report.epsilon,
                    report.total_work,
                    config.output_path
                ),
                files: vec![path],
            })
        }
        Err(qri_core::Error::NonConvergence {
            steps,
            best_distance,
        }) => {
            // partial output, then the nonzero status
            let json = serde_json::json!({
                "schema_version": crate::config::SCHEMA_VERSION,
                "n_star": null,
                "metric": metric_name(config.metric),
                "epsilon": config.epsilon,
                "best_distance": best_distance,
                "steps_searched": steps,
            });
            write_file(&path, &serde_json::to_string_pretty(&json).unwrap())?;
            Err(CliError::NonConvergence {
                steps,
                best_distance,
            })
        }
        Err(other) => Err(other.into()),
    }
}

struct SweepRow {
    coords: Vec<f64>,
    beta: f64,
    epsilon: f64,
    metric: Metric,
    n_star: u64,
    total_work: f64,
}

fn run_sweep(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let state0 = config.initial_state.resolve()?;
    let points = config.grid_points();
    let axis_names: Vec<&str> = config.sweep_axes.iter().map(|a| a.axis()).collect();
    let has_beta_axis = axis_names.contains(&"beta");
    let has_epsilon_axis = axis_names.contains(&"epsilon");

    // per point, both metrics; degenerate points are skipped, failures kept
    type PointResult = (Vec<SweepRow>, usize, Option<(u64, f64)>);
    let results: Vec<PointResult> = points
        .par_iter()
        .map(|(coords, params, epsilon)| {
            if is_degenerate(params, DEGENERACY_TOL) {
                return (Vec::new(), 1, None);
            }
            let mut rows = Vec::new();
            let mut failure = None;
            for metric in [Metric::TraceDistance, Metric::Infidelity] {
                match n_star_numeric(&state0, params, *epsilon, metric, config.max_steps) {
                    Ok(report) => rows.push(SweepRow {
                        coords: coords.clone(),
                        beta: params.beta,
                        epsilon: *epsilon,
                        metric,
                        n_star: report.n_star,
                        total_work: report.total_work,
                    }),
                    Err(qri_core::Error::NonConvergence {
                        steps,
                        best_distance,
                    }) => failure = Some((steps, best_distance)),
                    Err(_) => failure = Some((config.max_steps, f64::NAN)),
                }
            }
            (rows, 0, failure)
        })
        .collect();

    let mut csv = String::new();
    let mut header: Vec<String> = axis_names.iter().map(|s| s.to_string()).collect();
    if !has_beta_axis {
        header.push("beta".into());
    }
    if !has_epsilon_axis {
        header.push("epsilon".into());
    }
    header.extend(["metric".into(), "n_star".into(), "total_work".into()]);
    writeln!(csv, "{}", header.join(",")).unwrap();

    let mut written = 0usize;
    let mut skipped = 0usize;
    let mut failure = None;
    for (rows, skip, fail) in results {
        skipped += skip;
        if failure.is_none() {
            failure = fail;
        }
        for row in rows {
            for v in &row.coords {
                write!(csv, "{},", fmt_f(*v)).unwrap();
            }
            if !has_beta_axis {
                write!(csv, "{},", fmt_f(row.beta)).unwrap();
            }
            if !has_epsilon_axis {
                write!(csv, "{},", fmt_f(row.epsilon)).unwrap();
            }
            writeln!(
                csv,
                "{},{},{}",
                metric_name(row.metric),
                row.n_star,
                fmt_f(row.total_work)
            )
            .unwrap();
            written += 1;
        }
    }

    if written == 0 && skipped > 0 && failure.is_none() {
        return Err(CliError::from(qri_core::Error::Degenerate));
    }
    let path = PathBuf::from(&config.output_path);
    write_file(&path, &csv)?;
    if let Some((steps, best_distance)) = failure {
        return Err(CliError::NonConvergence {
            steps,
            best_distance,
        });
    }
    Ok(RunOutcome {
        summary_line: format!(
            "sweep: {written} rows over {} grid points ({skipped} degenerate skipped) -> {}",
            points.len(),
            config.output_path
        ),
        files: vec![path],
    })
}

fn run_thermalize(config: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let state0 = config.initial_state.resolve()?;
    let section = config.protocol.expect("validated: protocol present");
    let protocol = ProtocolConfig {
        omega: config.params.omega_s,
        omega_a: (config.params.omega_a != config.params.omega_s).then_some(config.params.omega_a),
        j_max: section.j_max,
        tau: config.params.tau,
        n_max: section.n_max,
        seed: section.seed,
        beta: config.params.beta,
        signed_draws: section.signed_draws,
        randomize_jzz: section.randomize_jzz,
    };

    let record = randomized_thermalization(&state0, &protocol)?;
    let path = PathBuf::from(&config.output_path);
    write_file(&path, &trajectory_csv(&record)?)?;

    let ensemble = run_seed_ensemble(&state0, &protocol, section.n_seeds, section.threshold)?;
    let diagnostics = regime_diagnostics(&protocol);
    let summary = serde_json::json!({
        "schema_version": crate::config::SCHEMA_VERSION,
        "seeds_run": ensemble.seeds_run,
        "success_fraction": ensemble.success_fraction,
        "median_n_to_threshold": ensemble.median_n_to_threshold,
        "threshold": ensemble.threshold,
        "rng_algorithm": ensemble.rng_algorithm,
        "regime": {
            "theta_phi_ratio": diagnostics.theta_phi_ratio,
            "j_tau": diagnostics.j_tau,
            "eta_at_j_max": diagnostics.eta_at_j_max,
            "warnings": diagnostics.warnings,
        },
    });
    let summary_path = sibling(&config.output_path, "_summary.json");
    write_file(
        &summary_path,
        &serde_json::to_string_pretty(&summary).unwrap(),
    )?;

    let last = record.final_state();
    Ok(RunOutcome {
        summary_line: format!(
            "thermalize: {} seeds, success {:.0}%, median n = {}, final p = {:.4}, |c| = {:.4} -> {}",
            ensemble.seeds_run,
            ensemble.success_fraction * 100.0,
            ensemble
                .median_n_to_threshold
                .map_or("-".into(), |m| format!("{m}")),
            last.p(),
            last.c().norm(),
            config.output_path
        ),
        files: vec![path, summary_path],
    })
}
