//! Fixed-step RK4 integration of the three models under piecewise-constant
//! wheel torques.

use serde::{Deserialize, Serialize};

use crate::dynamics_full::{full_rhs, momenta_from_full};
use crate::dynamics_reduced::{
    full_to_reduced, reduced_rhs, reduced_to_full, MomentumInputs, WheelAnchor,
};
use crate::error::{Error, Result};
use crate::model::{total_energy, Controls, FullState, Params, ReducedState};
use crate::oracle::{solve_saddle, OracleConfig};
use crate::validation::constraint_residual;

/// Roll and yaw generalized forces produced by the wheel torques.
///
/// A virtual displacement `(δφ, δθ)` moves the wheels by
/// `δφ₁ = δφ − (d/2r) δθ`, `δφ₂ = δφ + (d/2r) δθ`, so
/// `u₁ = τ₁ + τ₂` and `u₂ = d (τ₂ − τ₁) / (2r)`.
pub fn u_from_tau(c: Controls, p: &Params) -> MomentumInputs {
    MomentumInputs { u1: c.tau1 + c.tau2, u2: p.d * (c.tau2 - c.tau1) / (2.0 * p.r) }
}

/// Inverse of [`u_from_tau`].
pub fn tau_from_u(u: MomentumInputs, p: &Params) -> Controls {
    let diff = 2.0 * p.r * u.u2 / p.d;
    Controls { tau1: 0.5 * (u.u1 - diff), tau2: 0.5 * (u.u1 + diff) }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorqueSegment {
    pub t_start: f64,
    pub tau1: f64,
    pub tau2: f64,
}

/// Piecewise-constant torques. Segment `k` is active on
/// `[t_start_k, t_start_{k+1})`; before the first segment the torque is zero.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<TorqueSegment>", into = "Vec<TorqueSegment>")]
pub struct TorqueProfile {
    segments: Vec<TorqueSegment>,
}

impl TryFrom<Vec<TorqueSegment>> for TorqueProfile {
    type Error = Error;

    fn try_from(segments: Vec<TorqueSegment>) -> Result<Self> {
        TorqueProfile::new(segments)
    }
}

impl From<TorqueProfile> for Vec<TorqueSegment> {
    fn from(p: TorqueProfile) -> Self {
        p.segments
    }
}

impl TorqueProfile {
    pub fn new(segments: Vec<TorqueSegment>) -> Result<Self> {
        for (k, s) in segments.iter().enumerate() {
            if !(s.t_start.is_finite() && s.tau1.is_finite() && s.tau2.is_finite()) {
                return Err(Error::InvalidProfile(format!("segment {k} has non-finite values")));
            }
        }
        for (k, w) in segments.windows(2).enumerate() {
            if !(w[1].t_start > w[0].t_start) {
                return Err(Error::InvalidProfile(format!(
                    "segment start times must increase strictly (segment {})",
                    k + 1
                )));
            }
        }
        Ok(TorqueProfile { segments })
    }

    pub fn zero() -> Self {
        TorqueProfile::default()
    }

    /// Constant torque on `[start, end)`, zero elsewhere.
    pub fn pulse(start: f64, end: f64, torque: Controls) -> Result<Self> {
        TorqueProfile::new(vec![
            TorqueSegment { t_start: start, tau1: torque.tau1, tau2: torque.tau2 },
            TorqueSegment { t_start: end, tau1: 0.0, tau2: 0.0 },
        ])
    }

    pub fn segments(&self) -> &[TorqueSegment] {
        &self.segments
    }

    pub fn at(&self, t: f64) -> Controls {
        self.segments
            .iter()
            .rev()
            .find(|s| s.t_start <= t)
            .map(|s| Controls::new(s.tau1, s.tau2))
            .unwrap_or(Controls::ZERO)
    }

    /// Segment boundaries, for callers that need to avoid differencing across
    /// a jump.
    pub fn switch_times(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().map(|s| s.t_start)
    }
}

/// One classical Runge-Kutta step.
pub fn rk4_step<const N: usize, F>(rhs: &mut F, y: &[f64; N], t: f64, dt: f64) -> Result<[f64; N]>
where
    F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
{
    if !(dt > 0.0) {
        return Err(Error::InvalidSettings(format!("step must be positive, got {dt}")));
    }
    let offset = |base: &[f64; N], k: &[f64; N], scale: f64| {
        let mut out = *base;
        for (o, ki) in out.iter_mut().zip(k) {
            *o += scale * ki;
        }
        out
    };
    let checked = |k: [f64; N], at: f64| {
        if k.iter().all(|v| v.is_finite()) {
            Ok(k)
        } else {
            Err(Error::NonFinite { t: at })
        }
    };
    let k1 = checked(rhs(t, y)?, t)?;
    let k2 = checked(rhs(t + 0.5 * dt, &offset(y, &k1, 0.5 * dt))?, t + 0.5 * dt)?;
    let k3 = checked(rhs(t + 0.5 * dt, &offset(y, &k2, 0.5 * dt))?, t + 0.5 * dt)?;
    let k4 = checked(rhs(t + dt, &offset(y, &k3, dt))?, t + dt)?;
    let mut out = *y;
    for i in 0..N {
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    /// Base-coordinate equations with curvature forcing.
    Full,
    /// Momentum/shape equations with group reconstruction.
    Reduced,
    /// Finite-difference multiplier solve.
    Oracle,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Full => "full",
            ModelKind::Reduced => "reduced",
            ModelKind::Oracle => "oracle",
        })
    }
}

/// Initial condition in either representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Initial {
    Full(FullState),
    Reduced(ReducedState),
}

impl Initial {
    /// Anchor of the yaw relation: the full state itself, or both wheels at
    /// the mean angle when starting from a reduced state.
    pub fn anchor(&self) -> WheelAnchor {
        match self {
            Initial::Full(s) => WheelAnchor::from_full(s),
            Initial::Reduced(s) => WheelAnchor::centred(s.theta, s.phi),
        }
    }

    pub fn to_full(&self, p: &Params) -> FullState {
        match self {
            Initial::Full(s) => *s,
            Initial::Reduced(s) => reduced_to_full(s, &self.anchor(), p),
        }
    }

    pub fn to_reduced(&self, p: &Params) -> ReducedState {
        match self {
            Initial::Full(s) => full_to_reduced(s, p),
            Initial::Reduced(s) => *s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleState {
    Full(FullState),
    Reduced(ReducedState),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub energy: f64,
    pub p1: f64,
    pub p2: f64,
    /// Residuals of the x, y and yaw rolling constraints.
    pub residuals: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: SampleState,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub model: ModelKind,
    pub dt: f64,
    pub anchor: WheelAnchor,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    /// Every sample as a full state; reduced samples are lifted through the
    /// trajectory's wheel anchor.
    pub fn full_states(&self, p: &Params) -> Vec<FullState> {
        self.samples
            .iter()
            .map(|s| match s.state {
                SampleState::Full(f) => f,
                SampleState::Reduced(r) => reduced_to_full(&r, &self.anchor, p),
            })
            .collect()
    }

    pub fn reduced_states(&self, p: &Params) -> Vec<ReducedState> {
        self.samples
            .iter()
            .map(|s| match s.state {
                SampleState::Full(f) => full_to_reduced(&f, p),
                SampleState::Reduced(r) => r,
            })
            .collect()
    }

    pub fn energies(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.diagnostics.energy).collect()
    }
}

/// Number of steps covering `[0, duration]`, tolerant of `duration/dt`
/// landing a hair below an integer.
pub fn step_count(duration: f64, dt: f64) -> Result<usize> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidSettings(format!("dt must be positive and finite, got {dt}")));
    }
    if !(duration.is_finite() && duration >= 0.0) {
        return Err(Error::InvalidSettings(format!(
            "duration must be non-negative and finite, got {duration}"
        )));
    }
    Ok((duration / dt + 1e-9).floor() as usize)
}

fn full_diagnostics(s: &FullState, p: &Params) -> Diagnostics {
    let (p1, p2) = momenta_from_full(s, p);
    Diagnostics { energy: total_energy(s, p), p1, p2, residuals: constraint_residual(s, p) }
}

fn reduced_diagnostics(s: &ReducedState, anchor: &WheelAnchor, p: &Params) -> Diagnostics {
    let full = reduced_to_full(s, anchor, p);
    Diagnostics {
        energy: total_energy(&full, p),
        p1: s.p1,
        p2: s.p2,
        residuals: constraint_residual(&full, p),
    }
}

fn full_to_vec(s: &FullState) -> [f64; 9] {
    [s.x, s.y, s.theta, s.alpha, s.phi1, s.phi2, s.alpha_dot, s.phi1_dot, s.phi2_dot]
}

fn full_from_vec(v: &[f64; 9], p: &Params) -> FullState {
    FullState::on_constraints(v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], p)
}

fn reduced_to_vec(s: &ReducedState) -> [f64; 8] {
    [s.x, s.y, s.theta, s.phi, s.alpha, s.alpha_dot, s.p1, s.p2]
}

fn reduced_from_vec(v: &[f64; 8]) -> ReducedState {
    ReducedState {
        x: v[0],
        y: v[1],
        theta: v[2],
        phi: v[3],
        alpha: v[4],
        alpha_dot: v[5],
        p1: v[6],
        p2: v[7],
    }
}

fn oracle_to_vec(s: &FullState) -> [f64; 12] {
    let mut v = [0.0; 12];
    v[..6].copy_from_slice(&s.q());
    v[6..].copy_from_slice(&s.q_dot());
    v
}

fn oracle_from_vec(v: &[f64; 12]) -> FullState {
    let mut q = [0.0; 6];
    let mut q_dot = [0.0; 6];
    q.copy_from_slice(&v[..6]);
    q_dot.copy_from_slice(&v[6..]);
    FullState::from_arrays(q, q_dot)
}

/// Integrates `model` from `initial` over `[0, duration]` with step `dt`.
///
/// Torques are sampled once per step at the step's start time, so switch
/// times that fall on the grid are resolved exactly and every step
/// integrates a smooth vector field.
pub fn simulate(
    model: ModelKind,
    initial: &Initial,
    profile: &TorqueProfile,
    duration: f64,
    dt: f64,
    p: &Params,
) -> Result<Trajectory> {
    simulate_with(model, initial, profile, duration, dt, p, &OracleConfig::default())
}

pub fn simulate_with(
    model: ModelKind,
    initial: &Initial,
    profile: &TorqueProfile,
    duration: f64,
    dt: f64,
    p: &Params,
    oracle: &OracleConfig,
) -> Result<Trajectory> {
    let steps = step_count(duration, dt)?;
    let anchor = initial.anchor();
    let time = |k: usize| k as f64 * dt;
    let torque = |k: usize| profile.at(time(k) + 1e-9 * dt);
    let wrap = |t: f64| move |e: Error| Error::Simulation { t, source: Box::new(e) };
    let mut samples = Vec::with_capacity(steps + 1);

    match model {
        ModelKind::Full => {
            let s0 = initial.to_full(p);
            s0.check_finite()?;
            let mut y = full_to_vec(&s0);
            let s0 = full_from_vec(&y, p);
            samples.push(Sample { t: 0.0, state: SampleState::Full(s0), diagnostics: full_diagnostics(&s0, p) });
            for k in 0..steps {
                let c = torque(k);
                let mut f = |_t: f64, v: &[f64; 9]| -> Result<[f64; 9]> {
                    let s = full_from_vec(v, p);
                    let r = full_rhs(&s, c, p)?;
                    Ok([r.x_dot, r.y_dot, r.theta_dot, s.alpha_dot, s.phi1_dot, s.phi2_dot, r.alpha_ddot, r.phi1_ddot, r.phi2_ddot])
                };
                y = rk4_step(&mut f, &y, time(k), dt).map_err(wrap(time(k)))?;
                let s = full_from_vec(&y, p);
                samples.push(Sample { t: time(k + 1), state: SampleState::Full(s), diagnostics: full_diagnostics(&s, p) });
            }
        }
        ModelKind::Reduced => {
            let s0 = initial.to_reduced(p);
            s0.check_finite()?;
            let mut y = reduced_to_vec(&s0);
            samples.push(Sample {
                t: 0.0,
                state: SampleState::Reduced(s0),
                diagnostics: reduced_diagnostics(&s0, &anchor, p),
            });
            for k in 0..steps {
                let u = u_from_tau(torque(k), p);
                let mut f = |_t: f64, v: &[f64; 8]| -> Result<[f64; 8]> {
                    let s = reduced_from_vec(v);
                    let r = reduced_rhs(&s, u, p)?;
                    Ok([r.x_dot, r.y_dot, r.theta_dot, r.phi_dot, s.alpha_dot, r.alpha_ddot, r.p1_dot, r.p2_dot])
                };
                y = rk4_step(&mut f, &y, time(k), dt).map_err(wrap(time(k)))?;
                let s = reduced_from_vec(&y);
                samples.push(Sample {
                    t: time(k + 1),
                    state: SampleState::Reduced(s),
                    diagnostics: reduced_diagnostics(&s, &anchor, p),
                });
            }
        }
        ModelKind::Oracle => {
            let s0 = initial.to_full(p);
            s0.check_finite()?;
            // Enforce admissibility of the starting point once; afterwards the
            // solve keeps C q̇ invariant.
            crate::oracle::lagrange_dalembert_rhs(&s0.q(), &s0.q_dot(), &[0.0; 6], p, oracle)
                .map_err(wrap(0.0))?;
            let mut y = oracle_to_vec(&s0);
            samples.push(Sample { t: 0.0, state: SampleState::Full(s0), diagnostics: full_diagnostics(&s0, p) });
            for k in 0..steps {
                let c = torque(k);
                let forces = [0.0, 0.0, 0.0, 0.0, c.tau1, c.tau2];
                let mut f = |_t: f64, v: &[f64; 12]| -> Result<[f64; 12]> {
                    let s = oracle_from_vec(v);
                    let sol = solve_saddle(&s.q(), &s.q_dot(), &forces, p, oracle)?;
                    let mut out = [0.0; 12];
                    out[..6].copy_from_slice(&s.q_dot());
                    out[6..].copy_from_slice(&sol.q_ddot);
                    Ok(out)
                };
                y = rk4_step(&mut f, &y, time(k), dt).map_err(wrap(time(k)))?;
                let s = oracle_from_vec(&y);
                samples.push(Sample { t: time(k + 1), state: SampleState::Full(s), diagnostics: full_diagnostics(&s, p) });
            }
        }
    }
    Ok(Trajectory { model, dt, anchor, samples })
}

/// One scenario of a batch run.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub model: ModelKind,
    pub initial: Initial,
    pub profile: TorqueProfile,
    pub duration: f64,
    pub dt: f64,
    pub params: Params,
}

/// Runs independent scenarios on scoped threads; results come back in input
/// order.
pub fn simulate_batch(scenarios: &[Scenario]) -> Vec<Result<Trajectory>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = scenarios
            .iter()
            .map(|s| {
                scope.spawn(move || {
                    simulate(s.model, &s.initial, &s.profile, s.duration, s.dt, &s.params)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::InvalidSettings("worker panicked".into()))))
            .collect()
    })
}
