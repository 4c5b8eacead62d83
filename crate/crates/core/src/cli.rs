//! Commands behind the `wip` binary.
//!
//! Exit codes: 0 success, 2 unreadable or invalid configuration, 3 simulation
//! or output failure, 4 tolerance exceeded.

use std::io::Write;
use std::path::Path;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::model::Params;
use crate::sim::{simulate, ModelKind, Scenario, Trajectory};
use crate::validation::{
    compare_trajectories, render_checks_kv, render_checks_text, render_comparison_kv,
    render_comparison_text, run_structural_suite, ComparisonReport,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SIMULATION: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

pub const CSV_HEADER: &str = "t,x,y,theta,alpha,phi,alpha_dot,p1,p2,E,res_x,res_y,res_theta";

/// Trajectory as CSV: 17 significant digits, LF line endings.
pub fn trajectory_csv(traj: &Trajectory, p: &Params) -> String {
    let mut out = String::with_capacity(traj.len() * 260);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for (sample, s) in traj.samples.iter().zip(traj.reduced_states(p)) {
        let d = &sample.diagnostics;
        let row = [
            sample.t, s.x, s.y, s.theta, s.alpha, s.phi, s.alpha_dot, s.p1, s.p2, d.energy,
            d.residuals[0], d.residuals[1], d.residuals[2],
        ];
        for (k, v) in row.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&format!("{v:.16e}"));
        }
        out.push('\n');
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

fn load(config: &Path, err: &mut dyn Write) -> std::result::Result<Config, i32> {
    Config::load(config).map_err(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_CONFIG
    })
}

/// Simulates the configured scenario and writes the trajectory CSV to `out`,
/// or to `stdout` when no path is given.
pub fn cmd_simulate(
    config: &Path,
    model: Option<ModelKind>,
    out: Option<&Path>,
    quiet: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cfg = match load(config, stderr) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let sc = cfg.scenario(model);
    let traj = match simulate(sc.model, &sc.initial, &sc.profile, sc.duration, sc.dt, &sc.params) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_SIMULATION;
        }
    };
    let csv = trajectory_csv(&traj, &cfg.params);
    match out {
        Some(path) => {
            if let Err(e) = write_file(path, &csv) {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_SIMULATION;
            }
            if !quiet {
                let _ = writeln!(stdout, "{} model: {} samples written to {}", sc.model, traj.len(), path.display());
            }
        }
        None => {
            let _ = stdout.write_all(csv.as_bytes());
        }
    }
    EXIT_OK
}

/// Runs the full, reduced and oracle models on one scenario concurrently.
pub fn run_all_models(sc: &Scenario) -> [Result<Trajectory>; 3] {
    let run = |model: ModelKind| simulate(model, &sc.initial, &sc.profile, sc.duration, sc.dt, &sc.params);
    std::thread::scope(|scope| {
        let full = scope.spawn(|| run(ModelKind::Full));
        let reduced = scope.spawn(|| run(ModelKind::Reduced));
        let oracle = run(ModelKind::Oracle);
        let join = |h: std::thread::ScopedJoinHandle<'_, Result<Trajectory>>| {
            h.join().unwrap_or_else(|_| Err(Error::InvalidSettings("worker panicked".into())))
        };
        [join(full), join(reduced), oracle]
    })
}

/// Full-vs-reduced and full-vs-oracle reports for one scenario.
pub fn compare_models(sc: &Scenario) -> Result<Vec<ComparisonReport>> {
    let [full, reduced, oracle] = run_all_models(sc);
    let (full, reduced, oracle) = (full?, reduced?, oracle?);
    Ok(vec![
        compare_trajectories(&full, &reduced, &sc.params)?,
        compare_trajectories(&full, &oracle, &sc.params)?,
    ])
}

/// Writes the per-variable error report (key=value lines) to `out` and a
/// table to `stdout`; exit 4 when any error exceeds `max_abs_error`.
pub fn cmd_compare(
    config: &Path,
    out: Option<&Path>,
    quiet: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cfg = match load(config, stderr) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let reports = match compare_models(&cfg.scenario(None)) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_SIMULATION;
        }
    };
    let tol = cfg.tolerances.max_abs_error;
    let worst = reports.iter().fold(0.0f64, |m, r| m.max(r.max_abs()));
    let passed = worst <= tol;
    let mut kv = render_comparison_kv(&reports);
    kv.push_str(&format!("max_abs_error={worst:e}\ntolerance={tol:e}\npassed={passed}\n"));
    if let Some(path) = out {
        if let Err(e) = write_file(path, &kv) {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_SIMULATION;
        }
    }
    if !quiet {
        let _ = write!(stdout, "{}", render_comparison_text(&reports));
        let _ = writeln!(stdout, "{} max error {worst:.3e} (tolerance {tol:.1e})", if passed { "PASS" } else { "FAIL" });
    }
    if passed {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    }
}

/// Structural suite on the configured parameters and scenario.
pub fn cmd_check(
    config: &Path,
    out: Option<&Path>,
    quiet: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cfg = match load(config, stderr) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let outcomes = run_structural_suite(&cfg.scenario(None), &cfg.tolerances.suite());
    if let Some(path) = out {
        if let Err(e) = write_file(path, &render_checks_kv(&outcomes)) {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_SIMULATION;
        }
    }
    if !quiet {
        let _ = write!(stdout, "{}", render_checks_text(&outcomes));
    }
    if outcomes.iter().all(|o| o.passed) {
        EXIT_OK
    } else {
        EXIT_TOLERANCE
    }
}
