use std::path::Path;

use qfsieve_core::decomposition::decompose_diffusion;
use qfsieve_core::dynamics::{evolve, stationary_covariance, GaussianState};
use qfsieve_core::entropy;
use qfsieve_core::model::{ModelParams, ValidationReport};
use qfsieve_core::sieve::{self, landscape_row, LandscapePoint};
use qfsieve_core::wigner::{grid_integral, wigner_grid, MIN_BOX_SIGMAS};
use qfsieve_core::Error as CoreError;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{GridDoc, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, emit_json, mat_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Validate,
    Evolve,
    Sieve,
    Sweep,
    Wigner,
}

pub fn run(command: Command, config: &RunConfig) -> Result<()> {
    for path in config.output_paths() {
        ensure_parent(path)?;
    }
    match command {
        Command::Validate => cmd_validate(config),
        Command::Evolve => cmd_evolve(config),
        Command::Sieve => cmd_sieve(config),
        Command::Sweep => cmd_sweep(config),
        Command::Wigner => cmd_wigner(config),
    }
}

fn model_json(p: &ModelParams) -> Value {
    json!({
        "m": p.mass, "omega": p.omega, "mu": p.mu, "hbar": p.hbar,
        "D_qq": p.d_qq, "D_pp": p.d_pp, "D_pq": p.d_pq, "lambda": p.lambda,
    })
}

fn report_json(r: &ValidationReport) -> Value {
    let eig: Vec<Value> = r.drift_eigenvalues.iter().map(|z| json!([z.re, z.im])).collect();
    let mut warnings = Vec::new();
    if r.anti_damped {
        warnings.push("anti-damped: lambda < 0");
    }
    if !r.drift_hurwitz {
        warnings.push("drift matrix is not Hurwitz: no stationary state");
    }
    json!({
        "passed": r.passed(),
        "checks": {
            "constants": r.constants_ok,
            "D_qq_nonnegative": r.d_qq_nonnegative,
            "D_pp_nonnegative": r.d_pp_nonnegative,
            "positivity": r.positivity_ok,
        },
        "positivity_slack": r.positivity_slack,
        "tolerance": r.tolerance,
        "drift": {"eigenvalues": eig, "hurwitz": r.drift_hurwitz},
        "warnings": warnings,
    })
}

fn failed_checks(r: &ValidationReport) -> String {
    let mut names = Vec::new();
    if !r.constants_ok {
        names.push("constants m, omega, hbar must be positive and all fields finite");
    }
    if !r.d_qq_nonnegative {
        names.push("D_qq < 0");
    }
    if !r.d_pp_nonnegative {
        names.push("D_pp < 0");
    }
    if !r.positivity_ok {
        names.push("D_pp*D_qq - D_pq^2 < lambda^2 hbar^2 / 4");
    }
    names.join("; ")
}

/// Model parameters that passed validation.
fn checked_model(config: &RunConfig) -> Result<ModelParams> {
    let params = config.model.params();
    let report = params.validate();
    if !report.passed() {
        return Err(CliError::Physics(format!("model fails validation: {}", failed_checks(&report))));
    }
    if let Ok(dec) = decompose_diffusion(&params.scaled_diffusion(), params.hbar) {
        debug_assert!(dec.delta >= params.lambda.abs() * (1.0 - 1e-9));
    }
    Ok(params)
}

pub fn cmd_validate(config: &RunConfig) -> Result<()> {
    let params = config.model.params();
    let report = params.validate();
    emit_json(json!({"command": "validate", "model": model_json(&params), "report": report_json(&report)}), None)?;
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::Physics(format!("model fails validation: {}", failed_checks(&report))))
    }
}

fn state_json(t: f64, s: &GaussianState, hbar: f64) -> Result<Value> {
    let area = entropy::area(&s.sigma, hbar)?;
    Ok(json!({
        "t": t,
        "mean": s.mean,
        "sigma": mat_json(&s.sigma),
        "area": area,
        "lin_entropy": entropy::linear_entropy(&s.sigma, hbar)?,
    }))
}

fn evolve_section(config: &RunConfig) -> Result<&crate::config::EvolveSection> {
    config.evolve.as_ref().ok_or_else(|| CliError::usage("config has no \"evolve\" section"))
}

pub fn cmd_evolve(config: &RunConfig) -> Result<()> {
    let params = checked_model(config)?;
    let section = evolve_section(config)?;
    let state = config.state()?;
    let traj = evolve(&state, &params, section.t_final, section.dt, section.sample_every)?;
    if let Some(path) = &section.output {
        output::write_trajectory(path, &traj)?;
    }

    let last = traj.last();
    let mut final_json = state_json(last.t, &last.state, params.hbar)?;
    final_json["entropy_rate"] = json!(last.entropy.entropy_rate);
    let drift = params.drift();
    let stationary = if drift.is_hurwitz() {
        match stationary_covariance(&drift, &params.scaled_diffusion()) {
            Ok(sigma_inf) => {
                let area_inf = entropy::area(&sigma_inf, params.hbar)?;
                json!({
                    "sigma": mat_json(&sigma_inf),
                    "area": area_inf,
                    "lin_entropy": entropy::linear_entropy(&sigma_inf, params.hbar)?,
                    "frobenius_distance": (last.state.sigma - sigma_inf).frobenius_norm(),
                    "area_difference": last.entropy.area - area_inf,
                })
            }
            Err(e @ CoreError::SingularSystem) => json!({"error": e.to_string()}),
            Err(e) => return Err(e.into()),
        }
    } else {
        Value::Null
    };
    let steps = (traj.samples.len() - 1) * traj.sample_every;
    emit_json(
        json!({
            "command": "evolve",
            "model": model_json(&params),
            "dt": traj.dt,
            "sample_every": traj.sample_every,
            "samples": traj.len(),
            "t_final": last.t,
            "steps_sampled": steps,
            "initial": state_json(0.0, &state, params.hbar)?,
            "final": final_json,
            "drift_hurwitz": drift.is_hurwitz(),
            "stationary": stationary,
            "output": section.output.as_ref().map(|p| p.display().to_string()),
        }),
        section.summary.as_deref(),
    )
}

pub fn cmd_sieve(config: &RunConfig) -> Result<()> {
    let params = checked_model(config)?;
    let section = config.sieve.clone().unwrap_or(crate::config::SieveSection { area: 1.0, grid: None, output: None });
    let diff = decompose_diffusion(&params.scaled_diffusion(), params.hbar)?;
    let spec = section.grid.unwrap_or(GridDoc::DEFAULT).spec(diff.d);
    let result = sieve::sieve(section.area, params.lambda, &diff, &spec)?;
    let (a, g, r) = (result.analytic, result.grid, result.refined);
    let (g_aleph, g_theta) = g.canonical();
    let (off_u, off_t) = result.grid_offset_steps();
    let theta_delta = |t: f64| if a.degenerate_angle { 0.0 } else { sieve::angle_distance(t, a.theta_star) };
    emit_json(
        json!({
            "command": "sieve",
            "area": section.area,
            "lambda": params.lambda,
            "diffusion": {"Delta": diff.delta, "d": diff.d, "phi": diff.phi},
            "aleph_star": a.aleph_star,
            "theta_star": a.theta_star,
            "min_rate": a.min_rate,
            "degenerate_angle": a.degenerate_angle,
            "grid": {
                "n_aleph": spec.n_aleph,
                "n_theta": spec.n_theta,
                "aleph_range": [spec.aleph_lo, spec.aleph_hi],
                "aleph_index": g.aleph_index,
                "theta_index": g.theta_index,
                "aleph": g_aleph,
                "theta": g_theta,
                "rate": g.rate,
                "delta_aleph": (g_aleph - a.aleph_star).abs(),
                "delta_theta": theta_delta(g_theta),
                "delta_rate": g.rate - a.min_rate,
                "offset_log_steps": off_u,
                "offset_theta_steps": off_t,
                "refined": {
                    "aleph": r.aleph,
                    "theta": r.theta,
                    "rate": r.rate,
                    "delta_aleph": (r.aleph - a.aleph_star).abs(),
                    "delta_theta": theta_delta(r.theta),
                    "delta_rate": result.refined_excess(),
                },
            },
        }),
        section.output.as_deref(),
    )
}

pub fn cmd_sweep(config: &RunConfig) -> Result<()> {
    let params = checked_model(config)?;
    let section = config.sweep.as_ref().ok_or_else(|| CliError::usage("config has no \"sweep\" section"))?;
    let diff = decompose_diffusion(&params.scaled_diffusion(), params.hbar)?;
    let spec = section.grid.unwrap_or(GridDoc::DEFAULT).spec(diff.d);
    spec.check()?;
    let thetas = spec.theta_values();
    let rows: Vec<Vec<LandscapePoint>> = spec
        .aleph_values()
        .into_par_iter()
        .map(|aleph| landscape_row(section.area, params.lambda, &diff, aleph, &thetas).collect())
        .collect();
    let points: Vec<LandscapePoint> = rows.into_iter().flatten().collect();
    output::write_landscape(&section.output, &points)?;

    let best = points
        .iter()
        .enumerate()
        .fold(None::<(usize, &LandscapePoint)>, |acc, (i, p)| match acc {
            Some((_, b)) if b.rate <= p.rate => acc,
            _ => Some((i, p)),
        })
        .expect("grid is non-empty after check");
    let analytic = sieve::analytic_minimizer(section.area, params.lambda, &diff);
    emit_json(
        json!({
            "command": "sweep",
            "area": section.area,
            "grid": {
                "n_aleph": spec.n_aleph,
                "n_theta": spec.n_theta,
                "aleph_range": [spec.aleph_lo, spec.aleph_hi],
            },
            "points": points.len(),
            "argmin": {
                "aleph_index": best.0 / spec.n_theta,
                "theta_index": best.0 % spec.n_theta,
                "aleph": best.1.aleph,
                "theta": best.1.theta,
                "rate": best.1.rate,
            },
            "min_rate": analytic.min_rate,
            "output": section.output.display().to_string(),
        }),
        None,
    )
}

pub fn cmd_wigner(config: &RunConfig) -> Result<()> {
    let params = checked_model(config)?;
    let section = config.wigner.as_ref().ok_or_else(|| CliError::usage("config has no \"wigner\" section"))?;
    if !(section.half_width_sigmas >= MIN_BOX_SIGMAS) {
        return Err(CoreError::BoxTooSmall(section.half_width_sigmas).into());
    }
    let initial = config.state()?;
    let (t, state) = if section.time_index == 0 {
        (0.0, initial)
    } else {
        let ev = evolve_section(config)?;
        let traj = evolve(&initial, &params, ev.t_final, ev.dt, ev.sample_every)?;
        let sample = traj.samples.get(section.time_index).ok_or_else(|| {
            CliError::usage(format!(
                "time index {} is out of range for a trajectory of {} samples",
                section.time_index,
                traj.len()
            ))
        })?;
        (sample.t, sample.state)
    };

    let k = section.half_width_sigmas;
    let (w1, w2) = (k * state.sigma.get(0, 0).sqrt(), k * state.sigma.get(1, 1).sqrt());
    let x1_range = (state.mean[0] - w1, state.mean[0] + w1);
    let x2_range = (state.mean[1] - w2, state.mean[1] + w2);
    let table = wigner_grid(&state, x1_range, x2_range, section.n1, section.n2)?;
    output::write_wigner(&section.output, &table)?;
    let peak = table.iter().map(|p| p.2).fold(f64::NEG_INFINITY, f64::max);
    emit_json(
        json!({
            "command": "wigner",
            "time_index": section.time_index,
            "t": t,
            "mean": state.mean,
            "sigma": mat_json(&state.sigma),
            "hbar": params.hbar,
            "half_width_sigmas": k,
            "x1_range": [x1_range.0, x1_range.1],
            "x2_range": [x2_range.0, x2_range.1],
            "n1": section.n1,
            "n2": section.n2,
            "ordering": "row-major, x1 outer",
            "peak": peak,
            "normalization": grid_integral(&table, section.n1, section.n2)?,
            "output": section.output.display().to_string(),
        }),
        section.sidecar.as_deref(),
    )
}

/// Fails unless the directory that would hold `path` exists.
pub fn ensure_parent(path: &Path) -> Result<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(CliError::usage(format!("output directory {} does not exist", dir.display())))
        }
        _ => Ok(()),
    }
}
