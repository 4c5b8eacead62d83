//! Cross-model comparison, structural checks and the numeric momentum
//! pairing.
//!
//! Each check returns a [`CheckOutcome`]; the test suites and the `check`
//! command both go through [`run_structural_suite`].

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::connection::{curvature_at, ehresmann_at, ALPHA, STHETA};
use crate::dynamics_full::momenta_from_full;
use crate::dynamics_reduced::{momentum_rhs, WheelAnchor};
use crate::error::{Error, Result};
use crate::model::{f_of_alpha, lagrangian_case2, Case2Velocity, FullState, Params, ReducedState};
use crate::sim::{simulate, u_from_tau, Initial, ModelKind, Scenario, TorqueProfile, Trajectory};

/// Signed residuals of the three rolling constraints at one state.
pub fn constraint_residual(s: &FullState, p: &Params) -> [f64; 3] {
    let v = 0.5 * p.r * (s.phi1_dot + s.phi2_dot);
    let (st, ct) = s.theta.sin_cos();
    [
        s.x_dot - v * ct,
        s.y_dot - v * st,
        s.theta_dot - p.r / p.d * (s.phi2_dot - s.phi1_dot),
    ]
}

/// Absolute constraint residuals at every sample.
pub fn constraint_residuals(traj: &Trajectory, p: &Params) -> Vec<[f64; 3]> {
    traj.full_states(p)
        .iter()
        .map(|s| constraint_residual(s, p).map(f64::abs))
        .collect()
}

/// Symmetry generator paired with `∂L/∂q̇`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentumSection {
    /// Forward roll: `(r cos θ, r sin θ, 0, 0, 1)` in `(x, y, θ, α, φ)`.
    Roll,
    /// Rotation about the vertical axis: `(0, 0, 1, 0, 0)`.
    Yaw,
}

/// Velocity step of the pairing. The Lagrangian is quadratic in velocity,
/// so the central difference is exact up to cancellation.
const PAIRING_STEP: f64 = 1e-3;

/// `⟨∂L/∂q̇, ξ_Q(q)⟩` with `∂L/∂q̇` taken by central differences of
/// [`lagrangian_case2`].
pub fn momentum_pairing(s: &FullState, section: MomentumSection, p: &Params) -> f64 {
    let generator = match section {
        MomentumSection::Roll => [p.r * s.theta.cos(), p.r * s.theta.sin(), 0.0, 0.0, 1.0],
        MomentumSection::Yaw => [0.0, 0.0, 1.0, 0.0, 0.0],
    };
    let v = Case2Velocity::from_full(s).to_array();
    let mut pairing = 0.0;
    for (i, g) in generator.iter().enumerate() {
        if *g == 0.0 {
            continue;
        }
        let (mut vp, mut vm) = (v, v);
        vp[i] += PAIRING_STEP;
        vm[i] -= PAIRING_STEP;
        let lp = lagrangian_case2(s.theta, s.alpha, &Case2Velocity::from_array(vp), p);
        let lm = lagrangian_case2(s.theta, s.alpha, &Case2Velocity::from_array(vm), p);
        pairing += g * (lp - lm) / (2.0 * PAIRING_STEP);
    }
    pairing
}

/// Observables shared by every model.
pub const COMPARED_VARIABLES: [&str; 8] = ["x", "y", "theta", "alpha", "phi", "alpha_dot", "p1", "p2"];

fn observables(s: &ReducedState) -> [f64; 8] {
    [s.x, s.y, s.theta, s.alpha, s.phi, s.alpha_dot, s.p1, s.p2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableError {
    pub name: String,
    pub max_abs: f64,
    pub rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub label: String,
    pub variables: Vec<VariableError>,
}

impl ComparisonReport {
    pub fn max_abs(&self) -> f64 {
        self.variables.iter().fold(0.0, |m, v| m.max(v.max_abs))
    }

    /// Largest error over the named variables.
    pub fn max_over(&self, names: &[&str]) -> f64 {
        self.variables
            .iter()
            .filter(|v| names.contains(&v.name.as_str()))
            .fold(0.0, |m, v| m.max(v.max_abs))
    }

    pub fn get(&self, name: &str) -> Option<&VariableError> {
        self.variables.iter().find(|v| v.name == name)
    }
}

/// Per-variable max and RMS error in the reduced observables. Full-model
/// samples are mapped through `full_to_reduced`.
pub fn compare_trajectories(a: &Trajectory, b: &Trajectory, p: &Params) -> Result<ComparisonReport> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!("{} vs {} samples", a.len(), b.len())));
    }
    if a.dt != b.dt {
        return Err(Error::GridMismatch(format!("dt {} vs {}", a.dt, b.dt)));
    }
    for (ta, tb) in a.times().zip(b.times()) {
        if ta != tb {
            return Err(Error::GridMismatch(format!("sample times {ta} vs {tb}")));
        }
    }
    let ra = a.reduced_states(p);
    let rb = b.reduced_states(p);
    let mut max_abs = [0.0f64; 8];
    let mut sq = [0.0f64; 8];
    for (sa, sb) in ra.iter().zip(&rb) {
        let (oa, ob) = (observables(sa), observables(sb));
        for k in 0..8 {
            let e = (oa[k] - ob[k]).abs();
            max_abs[k] = max_abs[k].max(e);
            sq[k] += e * e;
        }
    }
    let n = ra.len().max(1) as f64;
    let variables = COMPARED_VARIABLES
        .iter()
        .enumerate()
        .map(|(k, name)| VariableError {
            name: name.to_string(),
            max_abs: max_abs[k],
            rms: (sq[k] / n).sqrt(),
        })
        .collect();
    Ok(ComparisonReport { label: format!("{}-vs-{}", a.model, b.model), variables })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyDrift {
    pub max_abs: f64,
    /// `max_abs / |E(0)|`, or `max_abs` when `E(0) = 0`.
    pub relative: f64,
}

pub fn energy_drift(traj: &Trajectory) -> EnergyDrift {
    let energies = traj.energies();
    let e0 = energies.first().copied().unwrap_or(0.0);
    let max_abs = energies.iter().fold(0.0f64, |m, e| m.max((e - e0).abs()));
    let relative = if e0 == 0.0 { max_abs } else { max_abs / e0.abs() };
    EnergyDrift { max_abs, relative }
}

/// Largest deviation from `θ − θ₀ = (r/d)((φ₂ − φ₂₀) − (φ₁ − φ₁₀))`.
pub fn holonomic_deviation(traj: &Trajectory, p: &Params) -> f64 {
    let states = traj.full_states(p);
    let Some(first) = states.first() else { return 0.0 };
    let anchor = WheelAnchor::from_full(first);
    states.iter().fold(0.0f64, |m, s| {
        let predicted = p.r / p.d * ((s.phi2 - anchor.phi2_0) - (s.phi1 - anchor.phi1_0));
        m.max((s.theta - anchor.theta0 - predicted).abs())
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: &str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    fn failed(name: &str, tolerance: f64, err: &Error) -> Self {
        CheckOutcome {
            name: name.to_string(),
            passed: false,
            measured: f64::NAN,
            tolerance,
            detail: err.to_string(),
        }
    }
}

/// Closed-form curvature against the defining formula with `∂A/∂θ` taken
/// by central differences, at `samples` random headings. The error is
/// measured relative to `max(|B|, r²/d)`. Any nonzero tilt slot fails.
pub fn check_curvature(p: &Params, samples: usize, seed: u64, tolerance: f64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-6;
    let floor = p.r * p.r / p.d;
    let mut worst = 0.0f64;
    let mut tilt_slots_zero = true;
    for _ in 0..samples {
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let a = ehresmann_at(theta, p).a;
        let (hi, lo) = (ehresmann_at(theta + h, p).a, ehresmann_at(theta - h, p).a);
        let closed = curvature_at(theta, p).b;
        for fibre in 0..3 {
            for beta in 0..3 {
                for gamma in 0..3 {
                    let d_gamma = (hi[fibre][gamma] - lo[fibre][gamma]) / (2.0 * h);
                    let d_beta = (hi[fibre][beta] - lo[fibre][beta]) / (2.0 * h);
                    let numeric = a[STHETA][beta] * d_gamma - a[STHETA][gamma] * d_beta;
                    let c = closed[fibre][beta][gamma];
                    worst = worst.max((c - numeric).abs() / c.abs().max(floor));
                    if (beta == ALPHA || gamma == ALPHA) && c != 0.0 {
                        tilt_slots_zero = false;
                    }
                }
            }
        }
    }
    let measured = if tilt_slots_zero { worst } else { f64::INFINITY };
    CheckOutcome::new(
        "curvature",
        measured,
        tolerance,
        format!("{samples} headings, tilt slots zero: {tilt_slots_zero}"),
    )
}

/// Random constrained state with unit-order velocities.
pub fn random_constrained_state(rng: &mut impl Rng, p: &Params) -> FullState {
    let pi = std::f64::consts::PI;
    FullState::on_constraints(
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(-pi..pi),
        rng.random_range(-1.3..1.3),
        rng.random_range(-pi..pi),
        rng.random_range(-pi..pi),
        rng.random_range(-1.0..1.0),
        rng.random_range(-5.0..5.0),
        rng.random_range(-5.0..5.0),
        p,
    )
}

/// Numeric pairing against the closed-form momenta.
pub fn check_pairing(p: &Params, samples: usize, seed: u64, tolerance: f64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let s = random_constrained_state(&mut rng, p);
        let (p1, p2) = momenta_from_full(&s, p);
        worst = worst.max((momentum_pairing(&s, MomentumSection::Roll, p) - p1).abs());
        worst = worst.max((momentum_pairing(&s, MomentumSection::Yaw, p) - p2).abs());
        worst = worst.max((f_of_alpha(s.alpha, p) * s.theta_dot - p2).abs());
    }
    CheckOutcome::new("pairing", worst, tolerance, format!("{samples} random states"))
}

/// Element `(x₀, y₀, θ₀, φ₀)` of SE(2)×S¹.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GroupShift {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub phi: f64,
}

impl GroupShift {
    pub fn apply_reduced(&self, s: &ReducedState) -> ReducedState {
        let (st, ct) = self.theta.sin_cos();
        ReducedState {
            x: self.x + ct * s.x - st * s.y,
            y: self.y + st * s.x + ct * s.y,
            theta: s.theta + self.theta,
            phi: s.phi + self.phi,
            ..*s
        }
    }

    /// Left action on a full state; both wheels turn by `φ₀`.
    pub fn apply_full(&self, s: &FullState) -> FullState {
        let (st, ct) = self.theta.sin_cos();
        FullState {
            x: self.x + ct * s.x - st * s.y,
            y: self.y + st * s.x + ct * s.y,
            theta: s.theta + self.theta,
            phi1: s.phi1 + self.phi,
            phi2: s.phi2 + self.phi,
            x_dot: ct * s.x_dot - st * s.y_dot,
            y_dot: st * s.x_dot + ct * s.y_dot,
            ..*s
        }
    }

    pub fn apply(&self, init: &Initial) -> Initial {
        match init {
            Initial::Full(s) => Initial::Full(self.apply_full(s)),
            Initial::Reduced(s) => Initial::Reduced(self.apply_reduced(s)),
        }
    }

    pub fn random(rng: &mut impl Rng) -> Self {
        let pi = std::f64::consts::PI;
        GroupShift {
            x: rng.random_range(-3.0..3.0),
            y: rng.random_range(-3.0..3.0),
            theta: rng.random_range(-pi..pi),
            phi: rng.random_range(-pi..pi),
        }
    }
}

/// Largest pointwise difference between `g·traj(s₀)` and `traj(g·s₀)` over
/// the given shifts, for the full and reduced models.
pub fn equivariance_error(scenario: &Scenario, shifts: &[GroupShift]) -> Result<f64> {
    let p = &scenario.params;
    let mut worst = 0.0f64;
    for model in [ModelKind::Full, ModelKind::Reduced] {
        let base = simulate(model, &scenario.initial, &scenario.profile, scenario.duration, scenario.dt, p)?;
        let base_states = base.reduced_states(p);
        for g in shifts {
            let moved = simulate(model, &g.apply(&scenario.initial), &scenario.profile, scenario.duration, scenario.dt, p)?;
            for (a, b) in base_states.iter().zip(moved.reduced_states(p)) {
                let expected = observables(&g.apply_reduced(a));
                for (e, m) in expected.iter().zip(observables(&b)) {
                    worst = worst.max((e - m).abs());
                }
            }
        }
    }
    Ok(worst)
}

pub fn check_equivariance(scenario: &Scenario, shifts: usize, seed: u64, tolerance: f64) -> CheckOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let group: Vec<GroupShift> = (0..shifts).map(|_| GroupShift::random(&mut rng)).collect();
    match equivariance_error(scenario, &group) {
        Ok(e) => CheckOutcome::new("equivariance", e, tolerance, format!("{shifts} shifts, full and reduced")),
        Err(err) => CheckOutcome::failed("equivariance", tolerance, &err),
    }
}

/// Step at which the energy and momentum-rate bounds are stated; coarser
/// scenario steps are refined to it for those two checks.
pub const REFERENCE_DT: f64 = 1e-4;

/// Relative energy drift of the full model from the scenario's initial
/// state with the torques switched off.
pub fn check_energy_drift(scenario: &Scenario, tolerance: f64) -> CheckOutcome {
    let p = &scenario.params;
    let dt = scenario.dt.min(REFERENCE_DT);
    match simulate(ModelKind::Full, &scenario.initial, &TorqueProfile::zero(), scenario.duration, dt, p) {
        Ok(traj) => {
            let drift = energy_drift(&traj);
            CheckOutcome::new(
                "energy-drift",
                drift.relative,
                tolerance,
                format!("max |dE| = {:.3e}, dt = {dt}", drift.max_abs),
            )
        }
        Err(err) => CheckOutcome::failed("energy-drift", tolerance, &err),
    }
}

/// Central-difference rates of the paired momenta along a full trajectory
/// minus the closed-form momentum equations. Stencils whose two steps use
/// different torques are skipped.
pub fn momentum_rate_error(traj: &Trajectory, profile: &TorqueProfile, p: &Params) -> f64 {
    let states = traj.full_states(p);
    let dt = traj.dt;
    let torque = |k: usize| profile.at(k as f64 * dt + 1e-9 * dt);
    let pairs: Vec<(f64, f64)> = states
        .iter()
        .map(|s| {
            (momentum_pairing(s, MomentumSection::Roll, p), momentum_pairing(s, MomentumSection::Yaw, p))
        })
        .collect();
    let mut worst = 0.0f64;
    for k in 1..states.len().saturating_sub(1) {
        if torque(k - 1) != torque(k) {
            continue;
        }
        let s = &states[k];
        let rate1 = (pairs[k + 1].0 - pairs[k - 1].0) / (2.0 * dt);
        let rate2 = (pairs[k + 1].1 - pairs[k - 1].1) / (2.0 * dt);
        let u = u_from_tau(torque(k), p);
        let (e1, e2) = momentum_rhs(s.alpha, s.alpha_dot, pairs[k].0, pairs[k].1, u, p);
        worst = worst.max((rate1 - e1).abs()).max((rate2 - e2).abs());
    }
    worst
}

pub fn check_momentum_rate(scenario: &Scenario, tolerance: f64) -> CheckOutcome {
    let p = &scenario.params;
    let dt = scenario.dt.min(REFERENCE_DT);
    match simulate(ModelKind::Full, &scenario.initial, &scenario.profile, scenario.duration, dt, p) {
        Ok(traj) => CheckOutcome::new(
            "momentum-rate",
            momentum_rate_error(&traj, &scenario.profile, p),
            tolerance,
            format!("dt = {dt}"),
        ),
        Err(err) => CheckOutcome::failed("momentum-rate", tolerance, &err),
    }
}

pub fn check_holonomic(scenario: &Scenario, tolerance: f64) -> CheckOutcome {
    let p = &scenario.params;
    match simulate(ModelKind::Full, &scenario.initial, &scenario.profile, scenario.duration, scenario.dt, p) {
        Ok(traj) => CheckOutcome::new(
            "holonomic-relation",
            holonomic_deviation(&traj, p),
            tolerance,
            format!("{} samples", traj.len()),
        ),
        Err(err) => CheckOutcome::failed("holonomic-relation", tolerance, &err),
    }
}

/// Tolerances of the structural suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteTolerances {
    pub curvature_rel: f64,
    pub pairing_abs: f64,
    pub equivariance_abs: f64,
    pub energy_rel: f64,
    pub momentum_rate_abs: f64,
    pub holonomic_abs: f64,
}

impl Default for SuiteTolerances {
    fn default() -> Self {
        SuiteTolerances {
            curvature_rel: 1e-7,
            pairing_abs: 1e-7,
            equivariance_abs: 1e-9,
            energy_rel: 1e-8,
            momentum_rate_abs: 1e-4,
            holonomic_abs: 1e-12,
        }
    }
}

/// Fixed seed for the randomized checks, so reports are reproducible.
pub const SUITE_SEED: u64 = 0x5e_ed0f_7ea1;

/// Curvature, pairing, equivariance, energy drift, momentum rate and the
/// holonomic relation, in that order.
pub fn run_structural_suite(scenario: &Scenario, tol: &SuiteTolerances) -> Vec<CheckOutcome> {
    let p = &scenario.params;
    vec![
        check_curvature(p, 50, SUITE_SEED, tol.curvature_rel),
        check_pairing(p, 100, SUITE_SEED + 1, tol.pairing_abs),
        check_equivariance(scenario, 20, SUITE_SEED + 2, tol.equivariance_abs),
        check_energy_drift(scenario, tol.energy_rel),
        check_momentum_rate(scenario, tol.momentum_rate_abs),
        check_holonomic(scenario, tol.holonomic_abs),
    ]
}

pub fn render_checks_text(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let _ = writeln!(
            out,
            "{} {:<20} measured={:.3e} tolerance={:.1e}  ({})",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.measured,
            o.tolerance,
            o.detail
        );
    }
    out
}

pub fn render_checks_kv(outcomes: &[CheckOutcome]) -> String {
    let mut out = String::new();
    for o in outcomes {
        let _ = writeln!(out, "check.{}.passed={}", o.name, o.passed);
        let _ = writeln!(out, "check.{}.measured={:e}", o.name, o.measured);
        let _ = writeln!(out, "check.{}.tolerance={:e}", o.name, o.tolerance);
    }
    out
}

pub fn render_comparison_text(reports: &[ComparisonReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = writeln!(out, "{}", r.label);
        for v in &r.variables {
            let _ = writeln!(out, "  {:<10} max={:.3e} rms={:.3e}", v.name, v.max_abs, v.rms);
        }
    }
    out
}

pub fn render_comparison_kv(reports: &[ComparisonReport]) -> String {
    let mut out = String::new();
    for r in reports {
        for v in &r.variables {
            let _ = writeln!(out, "{}.{}.max_abs={:e}", r.label, v.name, v.max_abs);
            let _ = writeln!(out, "{}.{}.rms={:e}", r.label, v.name, v.rms);
        }
    }
    out
}
