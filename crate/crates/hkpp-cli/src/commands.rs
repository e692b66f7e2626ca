//! The seven subcommands. Each writes its artifacts under the chosen output
//! directory and finishes with a `manifest.json` listing them with checksums.

use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use hkpp::evolve::{init_from_datum, run, sup_norm};
use hkpp::frontlab::{
    classify_dichotomy, estimate_beta, fit_extinction, fit_front, track_front, Dichotomy,
    FrontTrace,
};
use hkpp::geometry::{heat_kernel_bound_h, heat_kernel_p3, p3_mass, SymmetryClass};
use hkpp::reaction::speeds;
use hkpp::selfsim::{dipole_distance, dipole_moment, fp_step, phi0_field, FrameParams,
    SelfSimField};
use hkpp::waves::{default_span, default_tail_window, normalize_half, solve_profile, tail_fit};

use crate::config::ExperimentConfig;
use crate::csvout;
use crate::manifest::{ManifestBuilder, SolverStats};
use crate::plot::{line_plot, Series};
use crate::CliError;

fn echo(cfg: &ExperimentConfig) -> Option<String> {
    toml::to_string(cfg).ok()
}

fn say(quiet: bool, msg: &str) {
    if !quiet {
        println!("{msg}");
    }
}

pub fn cmd_wave(cfg: &ExperimentConfig, out: &Path, quiet: bool) -> Result<(), CliError> {
    let spec = cfg
        .wave
        .as_ref()
        .ok_or_else(|| CliError::validation("missing [wave] section"))?;
    let f = cfg.reaction_fn()?;
    let span = spec
        .span
        .map(|[a, b]| (a, b))
        .unwrap_or_else(|| default_span(&f, spec.c));
    let profile = normalize_half(&solve_profile(&f, spec.c, span, spec.tol)?)?;
    let (lambda0_hat, kappa_hat) = tail_fit(&profile, default_tail_window(&profile))?;

    let mut m = ManifestBuilder::new(out, "wave", echo(cfg));
    let rows: Vec<Vec<f64>> = profile
        .grid()
        .zip(profile.values.iter())
        .map(|(s, &u)| vec![s, u])
        .collect();
    m.write_file("profile.csv", csvout::table(&["s", "U"], &rows).as_bytes())?;
    let summary = json!({
        "c": spec.c,
        "lambda0_hat": lambda0_hat,
        "kappa_hat": kappa_hat,
        "tail_amplitude": profile.tail.amplitude,
        "s_min": profile.s_min,
        "s_max": profile.s_max(),
        "normalized": profile.normalized,
    });
    m.write_file("summary.json", serde_json::to_string_pretty(&summary).unwrap().as_bytes())?;
    m.finish()?;
    say(quiet, &format!("wave: c={}, lambda0_hat={lambda0_hat:.6}", spec.c));
    Ok(())
}

pub fn cmd_simulate(cfg: &ExperimentConfig, out: &Path, quiet: bool) -> Result<(), CliError> {
    let f = cfg.reaction_fn()?;
    let class: SymmetryClass = cfg.class.into();
    let grid = cfg.grid()?;
    let solver = cfg.solver()?;
    let datum = cfg.datum_fn()?;
    let (t_end, times) = cfg.schedule()?;

    let state = init_from_datum(class, grid, &datum)?;
    let result = run(&f, class, cfg.dimension, &state, &solver, t_end, &times)?;

    let mut m = ManifestBuilder::new(out, "simulate", echo(cfg));
    for (i, snap) in result.snapshots.iter().enumerate() {
        let rows: Vec<Vec<f64>> = (0..snap.grid.n)
            .map(|j| vec![snap.grid.rho(j), snap.values[j]])
            .collect();
        m.write_file(
            &format!("snapshot_{i:04}.csv"),
            csvout::table(&["rho", "u"], &rows).as_bytes(),
        )?;
    }
    if !result.shifts.is_empty() {
        let rows: Vec<Vec<f64>> = result
            .shifts
            .iter()
            .map(|s| vec![s.time, s.cells as f64, s.new_rho_min])
            .collect();
        m.write_file(
            "window_shifts.csv",
            csvout::table(&["time", "cells", "new_rho_min"], &rows).as_bytes(),
        )?;
    }
    m.set_solver_stats(SolverStats {
        steps: result.steps,
        window_shifts: result.shifts.len(),
        max_clip: result.max_clip,
        final_rho_min: result.snapshots.last().map(|s| s.grid.rho_min),
        snapshot_times: result.snapshots.iter().map(|s| s.time).collect(),
    });
    m.finish()?;
    say(
        quiet,
        &format!(
            "simulate: {} steps, {} snapshots, {} window shifts, max clip {:.2e}",
            result.steps,
            result.snapshots.len(),
            result.shifts.len(),
            result.max_clip
        ),
    );
    Ok(())
}

/// One results row of the front-fit command; reused by `sweep`.
pub struct FrontFitRow {
    pub run_id: String,
    pub d: u32,
    pub class: &'static str,
    pub fprime0: f64,
    pub a_hat: f64,
    pub b_hat: f64,
    pub beta: f64,
    pub residual_rms: f64,
}

impl FrontFitRow {
    pub const HEADER: &'static str = "run_id,d,class,fprime0,a_hat,b_hat,beta,residual_rms";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.run_id,
            self.d,
            self.class,
            csvout::num(self.fprime0),
            csvout::num(self.a_hat),
            csvout::num(self.b_hat),
            csvout::num(self.beta),
            csvout::num(self.residual_rms),
        )
    }
}

pub fn cmd_front_fit(
    cfg: &ExperimentConfig,
    out: &Path,
    quiet: bool,
    run_id: &str,
) -> Result<FrontFitRow, CliError> {
    let f = cfg.reaction_fn()?;
    let window = cfg
        .analysis
        .front_fit_window
        .map(|[a, b]| (a, b))
        .ok_or_else(|| CliError::validation("missing analysis.front_fit_window"))?;
    let level = cfg.analysis.front_level;

    let mut m = ManifestBuilder::new(out, "front-fit", echo(cfg));
    let (trace, beta) = if let Some(path) = &cfg.analysis.trace_csv {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::validation(format!("cannot read trace {path}: {e}")))?;
        let samples = csvout::read_pairs(&text)
            .map_err(|e| CliError::validation(format!("trace {path}: {e}")))?;
        if samples.is_empty() {
            return Err(CliError::validation(format!("trace {path} is empty")));
        }
        (FrontTrace { samples, level }, f64::NAN)
    } else {
        let class: SymmetryClass = cfg.class.into();
        let grid = cfg.grid()?;
        let solver = cfg.solver()?;
        let datum = cfg.datum_fn()?;
        let (t_end, times) = cfg.schedule()?;
        let state = init_from_datum(class, grid, &datum)?;
        let result = run(&f, class, cfg.dimension, &state, &solver, t_end, &times)?;
        let trace = track_front(&result.snapshots, level)?;
        // in the frame moving at c* the limiting profile has speed c0
        let s = speeds(&f, cfg.dimension)?;
        let profile =
            normalize_half(&solve_profile(&f, s.c0, default_span(&f, s.c0), 1e-7)?)?;
        let frame = FrameParams::new(&f, cfg.dimension, 0.0)?;
        let beta = estimate_beta(&result.snapshots, &profile, &frame)?;
        m.set_solver_stats(SolverStats {
            steps: result.steps,
            window_shifts: result.shifts.len(),
            max_clip: result.max_clip,
            final_rho_min: result.snapshots.last().map(|s| s.grid.rho_min),
            snapshot_times: result.snapshots.iter().map(|s| s.time).collect(),
        });
        (trace, beta)
    };

    let fit = fit_front(&trace, window)?;
    let row = FrontFitRow {
        run_id: run_id.to_string(),
        d: cfg.dimension,
        class: cfg.class.name(),
        fprime0: f.fprime0(),
        a_hat: fit.a_hat,
        b_hat: fit.b_hat,
        beta,
        residual_rms: fit.residual_rms,
    };
    m.write_file(
        "results.csv",
        format!("{}\n{}\n", FrontFitRow::HEADER, row.to_csv()).as_bytes(),
    )?;
    m.write_file(
        "trace.csv",
        csvout::table(
            &["t", "m"],
            &trace.samples.iter().map(|&(t, x)| vec![t, x]).collect::<Vec<_>>(),
        )
        .as_bytes(),
    )?;
    if cfg.analysis.plots {
        // residual front position against log t: the slope is b_hat
        let pts: Vec<(f64, f64)> = trace
            .samples
            .iter()
            .filter(|(t, _)| *t > 0.0)
            .map(|&(t, x)| (t.ln(), x - fit.a_hat * t))
            .collect();
        let path = out.join("front_correction.png");
        line_plot(&path, &[Series { points: &pts, color: [30, 60, 200] }])?;
        m.record(path);
    }
    m.finish()?;
    say(
        quiet,
        &format!("front-fit: a_hat={:.5}, b_hat={:.5}, beta={beta:.4}", fit.a_hat, fit.b_hat),
    );
    Ok(row)
}

/// Deterministic generic dipole datum used when `dipole.datum = "generic"`.
fn generic_dipole_datum(eta_max: f64, n: usize) -> SelfSimField {
    let mut values: Vec<f64> = (0..n)
        .map(|j| {
            let eta = eta_max * j as f64 / (n - 1) as f64;
            eta * (1.0 + 0.4 * (1.3 * eta).sin()) * (-eta * eta / 4.0).exp()
        })
        .collect();
    values[0] = 0.0;
    *values.last_mut().unwrap() = 0.0;
    SelfSimField { eta_max, values, tau: 0.0 }
}

pub fn cmd_dipole(cfg: &ExperimentConfig, out: &Path, quiet: bool) -> Result<(), CliError> {
    let spec = cfg
        .dipole
        .as_ref()
        .ok_or_else(|| CliError::validation("missing [dipole] section"))?;
    if !(spec.tau_end > 0.0) || !(spec.dtau > 0.0) || !(spec.output_every > 0.0) {
        return Err(CliError::validation("dipole: tau_end, dtau, output_every must be positive"));
    }
    let mut w = match spec.datum.as_str() {
        "phi0" => phi0_field(spec.eta_max, spec.n, 0.0),
        "generic" => generic_dipole_datum(spec.eta_max, spec.n),
        other => {
            return Err(CliError::validation(format!("dipole.datum: unknown datum {other:?}")))
        }
    };
    let alpha = dipole_moment(&w).value / (2.0 * std::f64::consts::PI.sqrt());

    let steps = (spec.tau_end / spec.dtau).round() as usize;
    let record_every = (spec.output_every / spec.dtau).round().max(1.0) as usize;
    let mut rows = vec![vec![0.0, dipole_moment(&w).value, dipole_distance(&w, alpha)]];
    for k in 1..=steps {
        w = fp_step(&w, spec.dtau)?;
        if k % record_every == 0 || k == steps {
            rows.push(vec![w.tau, dipole_moment(&w).value, dipole_distance(&w, alpha)]);
        }
    }

    let mut m = ManifestBuilder::new(out, "dipole", echo(cfg));
    m.write_file(
        "dipole_trace.csv",
        csvout::table(&["tau", "dipole_moment", "dipole_distance"], &rows).as_bytes(),
    )?;
    let profile_rows: Vec<Vec<f64>> =
        (0..spec.n).map(|j| vec![w.eta(j), w.values[j]]).collect();
    m.write_file("final_profile.csv", csvout::table(&["eta", "w"], &profile_rows).as_bytes())?;
    m.finish()?;
    say(
        quiet,
        &format!(
            "dipole: tau={:.2}, moment={:.6}, distance={:.3e}",
            w.tau,
            dipole_moment(&w).value,
            dipole_distance(&w, alpha)
        ),
    );
    Ok(())
}

pub fn cmd_kernel(t: f64, r_max: f64, n: usize, out: &Path, quiet: bool) -> Result<(), CliError> {
    if n < 2 {
        return Err(CliError::validation("kernel: need n >= 2"));
    }
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        let r = r_max * j as f64 / (n - 1) as f64;
        let p3 = heat_kernel_p3(r, t)?;
        let h = heat_kernel_bound_h(3, r, t)?;
        rows.push(vec![r, p3, h, p3 / h]);
    }
    let mass = p3_mass(t)?;
    let ratios: Vec<f64> = rows.iter().map(|r| r[3]).collect();
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let mut m = ManifestBuilder::new(out, "kernel", None);
    m.write_file("kernel.csv", csvout::table(&["r", "P3", "h_t", "ratio"], &rows).as_bytes())?;
    let summary = json!({
        "t": t,
        "mass": mass,
        "mass_error": (mass - 1.0).abs(),
        "ratio_min": lo,
        "ratio_max": hi,
    });
    m.write_file("summary.json", serde_json::to_string_pretty(&summary).unwrap().as_bytes())?;
    m.finish()?;
    say(
        quiet,
        &format!("kernel: t={t}, |mass-1|={:.2e}, ratio in [{lo:.3}, {hi:.3}]", (mass - 1.0).abs()),
    );
    Ok(())
}

pub fn cmd_dichotomy(
    cfg: &ExperimentConfig,
    out: &Path,
    quiet: bool,
) -> Result<&'static str, CliError> {
    let f = cfg.reaction_fn()?;
    let class: SymmetryClass = cfg.class.into();
    let datum = cfg.datum_fn()?;
    let (horizon, _) = cfg.schedule()?;
    let verdict = match classify_dichotomy(&f, class, cfg.dimension, &datum, horizon)? {
        Dichotomy::Propagation => "propagation",
        Dichotomy::Vanishing => "vanishing",
        Dichotomy::Undecided => "undecided",
    };

    // record the sup-norm decay alongside the verdict when it is cheap to
    // recompute the extinction fit from the config's window
    let mut extinction = serde_json::Value::Null;
    if let Some([a, b]) = cfg.analysis.extinction_fit_window {
        let grid = hkpp::evolve::Grid1D::new(0.0, 120.0, 1201)?;
        let state = init_from_datum(class, grid, &datum)?;
        let solver = hkpp::evolve::SolverConfig {
            dt: 0.02,
            scheme: hkpp::evolve::Scheme::ImexCn,
            left_bc: hkpp::evolve::LeftBc::Neumann0,
            right_bc: hkpp::evolve::RightBc::Dirichlet0,
            window: None,
        };
        let times: Vec<f64> = (1..=(horizon as usize)).map(|k| k as f64).collect();
        let result = run(&f, class, cfg.dimension, &state, &solver, horizon, &times)?;
        let sups: Vec<(f64, f64)> =
            result.snapshots.iter().map(|s| (s.time, sup_norm(s))).collect();
        let fit = fit_extinction(&sups, (a, b))?;
        extinction = json!({ "alpha_hat": fit.alpha_hat, "gamma_hat": fit.gamma_hat });
    }

    let mut m = ManifestBuilder::new(out, "dichotomy", echo(cfg));
    let summary = json!({
        "classification": verdict,
        "horizon": horizon,
        "fprime0": f.fprime0(),
        "dimension": cfg.dimension,
        "class": cfg.class.name(),
        "extinction_fit": extinction,
    });
    m.write_file("result.json", serde_json::to_string_pretty(&summary).unwrap().as_bytes())?;
    m.finish()?;
    say(quiet, &format!("dichotomy: {verdict}"));
    Ok(verdict)
}

pub fn cmd_sweep(cfg: &ExperimentConfig, out: &Path, quiet: bool) -> Result<(), CliError> {
    let spec = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| CliError::validation("missing [sweep] section"))?;
    if spec.a_values.is_empty() {
        return Err(CliError::validation("sweep.a_values is empty"));
    }
    if cfg.reaction.name != "logistic" {
        return Err(CliError::validation("sweep varies reaction.a: needs a logistic reaction"));
    }
    let classes = spec.classes.clone().unwrap_or_else(|| vec![cfg.class]);

    // the grid of sub-configs, each with its own isolated output directory
    let mut jobs = Vec::new();
    for &class in &classes {
        for &a in &spec.a_values {
            let mut sub = cfg.clone();
            sub.reaction.a = Some(a);
            sub.class = class;
            sub.sweep = None;
            let id = format!("run-{:03}", jobs.len());
            jobs.push((id, a, class, sub));
        }
    }

    enum SweepRow {
        Dichotomy { id: String, a: f64, class: &'static str, verdict: &'static str },
        FrontFit(FrontFitRow),
    }

    let command = spec.command.as_str();
    if command != "dichotomy" && command != "front-fit" {
        return Err(CliError::validation(format!(
            "sweep.command must be \"dichotomy\" or \"front-fit\", got {command:?}"
        )));
    }
    let rows: Vec<Result<SweepRow, CliError>> = jobs
        .par_iter()
        .map(|(id, a, class, sub)| {
            let sub_out = out.join(id);
            std::fs::create_dir_all(&sub_out).map_err(|e| {
                CliError::validation(format!("cannot create {}: {e}", sub_out.display()))
            })?;
            match command {
                "dichotomy" => {
                    let verdict = cmd_dichotomy(sub, &sub_out, true)?;
                    Ok(SweepRow::Dichotomy {
                        id: id.clone(),
                        a: *a,
                        class: class.name(),
                        verdict,
                    })
                }
                _ => Ok(SweepRow::FrontFit(cmd_front_fit(sub, &sub_out, true, id)?)),
            }
        })
        .collect();

    let mut csv = String::new();
    match command {
        "dichotomy" => csv.push_str("run_id,a,class,classification\n"),
        _ => {
            csv.push_str(FrontFitRow::HEADER);
            csv.push('\n');
        }
    }
    for row in rows {
        match row? {
            SweepRow::Dichotomy { id, a, class, verdict } => {
                csv.push_str(&format!("{id},{},{class},{verdict}\n", csvout::num(a)));
            }
            SweepRow::FrontFit(r) => {
                csv.push_str(&r.to_csv());
                csv.push('\n');
            }
        }
    }
    let mut m = ManifestBuilder::new(out, "sweep", echo(cfg));
    m.write_file("results.csv", csv.as_bytes())?;
    m.finish()?;
    say(quiet, &format!("sweep: {} runs completed", jobs.len()));
    Ok(())
}
