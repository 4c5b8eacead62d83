//! Physical parameters, state types and Lagrangian evaluations.
//!
//! Coordinates follow the rolling convention used throughout the crate:
//! forward speed `v = (r/2)(phi1_dot + phi2_dot)`, yaw rate
//! `theta_dot = (r/d)(phi2_dot - phi1_dot)`, and the mean wheel angle
//! `phi = (phi1 + phi2)/2` as the roll coordinate of the reduced model.
//! All angles are stored unwrapped.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of tilt samples used when checking shape-mass positivity.
const SHAPE_MASS_GRID: usize = 721;

/// Physical constants of the wheeled inverted pendulum.
///
/// Serialized with the conventional symbol names (`m_b`, `m_W`, `I_Bxx`, ...).
/// Every field is mandatory and unknown keys are rejected; deserialization
/// runs the same validation as [`Params::new`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct Params {
    /// Body mass [kg].
    pub m_b: f64,
    /// Mass of a single wheel [kg].
    pub m_w: f64,
    /// Height of the body centre of mass above the axle [m].
    pub b: f64,
    /// Wheel radius [m].
    pub r: f64,
    /// Wheel separation [m].
    pub d: f64,
    pub i_bxx: f64,
    pub i_byy: f64,
    pub i_bz: f64,
    pub i_wyy: f64,
    pub i_wzz: f64,
    /// Gravitational acceleration [m/s²].
    pub g: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawParams {
    m_b: f64,
    m_W: f64,
    b: f64,
    r: f64,
    d: f64,
    I_Bxx: f64,
    I_Byy: f64,
    I_Bz: f64,
    I_Wyy: f64,
    I_Wzz: f64,
    g: f64,
}

impl TryFrom<RawParams> for Params {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        Params {
            m_b: raw.m_b,
            m_w: raw.m_W,
            b: raw.b,
            r: raw.r,
            d: raw.d,
            i_bxx: raw.I_Bxx,
            i_byy: raw.I_Byy,
            i_bz: raw.I_Bz,
            i_wyy: raw.I_Wyy,
            i_wzz: raw.I_Wzz,
            g: raw.g,
        }
        .validated()
    }
}

impl From<Params> for RawParams {
    fn from(p: Params) -> Self {
        RawParams {
            m_b: p.m_b,
            m_W: p.m_w,
            b: p.b,
            r: p.r,
            d: p.d,
            I_Bxx: p.i_bxx,
            I_Byy: p.i_byy,
            I_Bz: p.i_bz,
            I_Wyy: p.i_wyy,
            I_Wzz: p.i_wzz,
            g: p.g,
        }
    }
}

impl Default for Params {
    /// Desk-scale reference vehicle: a 5 kg box-shaped body (0.1 × 0.3 × 0.4 m)
    /// on two 0.5 kg solid-disc wheels of radius 0.1 m, 0.4 m apart.
    fn default() -> Self {
        Params {
            m_b: 5.0,
            m_w: 0.5,
            b: 0.2,
            r: 0.1,
            d: 0.4,
            i_bxx: 0.1,
            i_byy: 0.07,
            i_bz: 0.04,
            i_wyy: 0.0025,
            i_wzz: 0.00125,
            g: 9.81,
        }
    }
}

impl Params {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        m_b: f64,
        m_w: f64,
        b: f64,
        r: f64,
        d: f64,
        i_bxx: f64,
        i_byy: f64,
        i_bz: f64,
        i_wyy: f64,
        i_wzz: f64,
        g: f64,
    ) -> Result<Self> {
        Params { m_b, m_w, b, r, d, i_bxx, i_byy, i_bz, i_wyy, i_wzz, g }.validated()
    }

    /// Checks positivity of every constant and of the shape-space mass over a
    /// grid covering one period in tilt.
    pub fn validated(self) -> Result<Self> {
        let fields = [
            ("m_b", self.m_b),
            ("m_W", self.m_w),
            ("b", self.b),
            ("r", self.r),
            ("d", self.d),
            ("I_Bxx", self.i_bxx),
            ("I_Byy", self.i_byy),
            ("I_Bz", self.i_bz),
            ("I_Wyy", self.i_wyy),
            ("I_Wzz", self.i_wzz),
            ("g", self.g),
        ];
        for (field, value) in fields {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParams {
                    field,
                    reason: format!("must be finite and strictly positive, got {value}"),
                });
            }
        }
        for k in 0..SHAPE_MASS_GRID {
            let alpha = std::f64::consts::PI * k as f64 / (SHAPE_MASS_GRID - 1) as f64;
            let m = shape_mass(alpha, &self);
            if !(m > 0.0) {
                return Err(Error::NonPositiveShapeMass { alpha, value: m });
            }
        }
        Ok(self)
    }

    /// Translational mass `m_b + 2 m_W`.
    pub fn total_mass(&self) -> f64 {
        self.m_b + 2.0 * self.m_w
    }

    /// Pitch inertia about the axle, `m_b b² + I_Byy`.
    pub fn pitch_inertia(&self) -> f64 {
        self.m_b * self.b * self.b + self.i_byy
    }
}

/// Yaw inertia as a function of tilt.
pub fn i_theta(alpha: f64, p: &Params) -> f64 {
    let (s, c) = alpha.sin_cos();
    2.0 * p.i_wzz + p.i_bz * c * c + 2.0 * p.m_w * p.d * p.d + (p.i_bxx + p.m_b * p.b * p.b) * s * s
}

/// `d I_θ / dα`.
pub fn i_theta_prime(alpha: f64, p: &Params) -> f64 {
    (p.i_bxx + p.m_b * p.b * p.b - p.i_bz) * (2.0 * alpha).sin()
}

/// Locked yaw inertia: `I_θ(α) + d² I_Wyy / (2 r²)`.
pub fn f_of_alpha(alpha: f64, p: &Params) -> f64 {
    i_theta(alpha, p) + p.d * p.d / (2.0 * p.r * p.r) * p.i_wyy
}

pub fn f_prime(alpha: f64, p: &Params) -> f64 {
    i_theta_prime(alpha, p)
}

/// Locked roll inertia: `(m_b + 2 m_W) r² + 2 I_Wyy`.
pub fn h_const(p: &Params) -> f64 {
    p.total_mass() * p.r * p.r + 2.0 * p.i_wyy
}

/// Effective pitch inertia once the roll momentum is held fixed:
/// `m_b b² + I_Byy − (m_b b r cos α)² / h`.
pub fn shape_mass(alpha: f64, p: &Params) -> f64 {
    let k = p.m_b * p.b * p.r * alpha.cos();
    p.pitch_inertia() - k * k / h_const(p)
}

/// Gravitational potential of the body, zero with the body horizontal.
pub fn potential(alpha: f64, p: &Params) -> f64 {
    p.m_b * p.b * p.g * alpha.cos()
}

/// Configuration and velocities in the six coordinates
/// `(x, y, θ, α, φ₁, φ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FullState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub alpha: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub x_dot: f64,
    pub y_dot: f64,
    pub theta_dot: f64,
    pub alpha_dot: f64,
    pub phi1_dot: f64,
    pub phi2_dot: f64,
}

impl FullState {
    /// Builds a state on the rolling-constraint surface from the independent
    /// velocities `(α̇, φ̇₁, φ̇₂)`.
    #[allow(clippy::too_many_arguments)]
    pub fn on_constraints(
        x: f64,
        y: f64,
        theta: f64,
        alpha: f64,
        phi1: f64,
        phi2: f64,
        alpha_dot: f64,
        phi1_dot: f64,
        phi2_dot: f64,
        p: &Params,
    ) -> Self {
        let v = 0.5 * p.r * (phi1_dot + phi2_dot);
        let (s, c) = theta.sin_cos();
        FullState {
            x,
            y,
            theta,
            alpha,
            phi1,
            phi2,
            x_dot: v * c,
            y_dot: v * s,
            theta_dot: p.r / p.d * (phi2_dot - phi1_dot),
            alpha_dot,
            phi1_dot,
            phi2_dot,
        }
    }

    pub fn q(&self) -> [f64; 6] {
        [self.x, self.y, self.theta, self.alpha, self.phi1, self.phi2]
    }

    pub fn q_dot(&self) -> [f64; 6] {
        [self.x_dot, self.y_dot, self.theta_dot, self.alpha_dot, self.phi1_dot, self.phi2_dot]
    }

    pub fn from_arrays(q: [f64; 6], q_dot: [f64; 6]) -> Self {
        FullState {
            x: q[0],
            y: q[1],
            theta: q[2],
            alpha: q[3],
            phi1: q[4],
            phi2: q[5],
            x_dot: q_dot[0],
            y_dot: q_dot[1],
            theta_dot: q_dot[2],
            alpha_dot: q_dot[3],
            phi1_dot: q_dot[4],
            phi2_dot: q_dot[5],
        }
    }

    /// Mean wheel angle.
    pub fn phi(&self) -> f64 {
        0.5 * (self.phi1 + self.phi2)
    }

    pub fn phi_dot(&self) -> f64 {
        0.5 * (self.phi1_dot + self.phi2_dot)
    }

    pub fn check_finite(&self) -> Result<()> {
        let names = ["x", "y", "theta", "alpha", "phi1", "phi2"];
        let dot_names =
            ["x_dot", "y_dot", "theta_dot", "alpha_dot", "phi1_dot", "phi2_dot"];
        for (name, v) in names.iter().zip(self.q()) {
            if !v.is_finite() {
                return Err(Error::NonFiniteState(name));
            }
        }
        for (name, v) in dot_names.iter().zip(self.q_dot()) {
            if !v.is_finite() {
                return Err(Error::NonFiniteState(name));
            }
        }
        Ok(())
    }
}

/// Group element `(x, y, θ, φ)` on SE(2)×S¹, shape `(α, α̇)` and the two
/// nonholonomic momenta.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReducedState {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub phi: f64,
    pub alpha: f64,
    pub alpha_dot: f64,
    pub p1: f64,
    pub p2: f64,
}

impl ReducedState {
    pub fn check_finite(&self) -> Result<()> {
        let fields = [
            ("x", self.x),
            ("y", self.y),
            ("theta", self.theta),
            ("phi", self.phi),
            ("alpha", self.alpha),
            ("alpha_dot", self.alpha_dot),
            ("p1", self.p1),
            ("p2", self.p2),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::NonFiniteState(name));
            }
        }
        Ok(())
    }
}

/// Wheel torques [N·m].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Controls {
    pub tau1: f64,
    pub tau2: f64,
}

impl Controls {
    pub const ZERO: Controls = Controls { tau1: 0.0, tau2: 0.0 };

    pub fn new(tau1: f64, tau2: f64) -> Self {
        Controls { tau1, tau2 }
    }
}

/// Velocity-Hessian of [`lagrangian_full`], in the order `(x, y, θ, α, φ₁, φ₂)`.
pub fn mass_matrix_full(theta: f64, alpha: f64, p: &Params) -> [[f64; 6]; 6] {
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let mb = p.m_b * p.b;
    let mut m = [[0.0; 6]; 6];
    m[0][0] = p.total_mass();
    m[1][1] = p.total_mass();
    m[2][2] = i_theta(alpha, p);
    m[3][3] = p.pitch_inertia();
    m[4][4] = p.i_wyy;
    m[5][5] = p.i_wyy;
    m[0][2] = -mb * sa * st;
    m[0][3] = mb * ca * ct;
    m[1][2] = mb * sa * ct;
    m[1][3] = mb * ca * st;
    symmetrize(&mut m);
    m
}

/// `∂/∂α` of [`mass_matrix_full`].
pub fn mass_matrix_full_dalpha(theta: f64, alpha: f64, p: &Params) -> [[f64; 6]; 6] {
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let mb = p.m_b * p.b;
    let mut m = [[0.0; 6]; 6];
    m[2][2] = i_theta_prime(alpha, p);
    m[0][2] = -mb * ca * st;
    m[0][3] = -mb * sa * ct;
    m[1][2] = mb * ca * ct;
    m[1][3] = -mb * sa * st;
    symmetrize(&mut m);
    m
}

fn symmetrize(m: &mut [[f64; 6]; 6]) {
    for i in 0..6 {
        for j in 0..i {
            m[i][j] = m[j][i];
        }
    }
}

/// Kinetic minus potential energy in the six coordinates.
pub fn lagrangian_full(s: &FullState, p: &Params) -> f64 {
    let (st, ct) = s.theta.sin_cos();
    let (sa, ca) = s.alpha.sin_cos();
    let mb = p.m_b * p.b;
    0.5 * p.total_mass() * (s.x_dot * s.x_dot + s.y_dot * s.y_dot)
        + 0.5 * i_theta(s.alpha, p) * s.theta_dot * s.theta_dot
        + 0.5 * p.pitch_inertia() * s.alpha_dot * s.alpha_dot
        + 0.5 * p.i_wyy * (s.phi1_dot * s.phi1_dot + s.phi2_dot * s.phi2_dot)
        - mb * sa * st * s.x_dot * s.theta_dot
        + mb * ca * ct * s.alpha_dot * s.x_dot
        + mb * sa * ct * s.theta_dot * s.y_dot
        + mb * ca * st * s.alpha_dot * s.y_dot
        - potential(s.alpha, p)
}

/// `∂L/∂q̇` of [`lagrangian_full`], computed analytically.
pub fn momentum_covector_full(s: &FullState, p: &Params) -> [f64; 6] {
    let m = mass_matrix_full(s.theta, s.alpha, p);
    mat_vec6(&m, &s.q_dot())
}

pub(crate) fn mat_vec6(m: &[[f64; 6]; 6], v: &[f64; 6]) -> [f64; 6] {
    let mut out = [0.0; 6];
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
    out
}

/// Velocities in the coordinates `(x, y, θ, α, φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Case2Velocity {
    pub x_dot: f64,
    pub y_dot: f64,
    pub theta_dot: f64,
    pub alpha_dot: f64,
    pub phi_dot: f64,
}

impl Case2Velocity {
    pub fn to_array(self) -> [f64; 5] {
        [self.x_dot, self.y_dot, self.theta_dot, self.alpha_dot, self.phi_dot]
    }

    pub fn from_array(v: [f64; 5]) -> Self {
        Case2Velocity { x_dot: v[0], y_dot: v[1], theta_dot: v[2], alpha_dot: v[3], phi_dot: v[4] }
    }

    /// Case-II velocities of a full state (wheel difference absorbed into yaw).
    pub fn from_full(s: &FullState) -> Self {
        Case2Velocity {
            x_dot: s.x_dot,
            y_dot: s.y_dot,
            theta_dot: s.theta_dot,
            alpha_dot: s.alpha_dot,
            phi_dot: s.phi_dot(),
        }
    }
}

/// Lagrangian in the coordinates `(x, y, θ, α, φ)` with the wheel
/// difference eliminated through the yaw relation.
pub fn lagrangian_case2(theta: f64, alpha: f64, v: &Case2Velocity, p: &Params) -> f64 {
    let (st, ct) = theta.sin_cos();
    let (sa, ca) = alpha.sin_cos();
    let mb = p.m_b * p.b;
    0.5 * p.total_mass() * (v.x_dot * v.x_dot + v.y_dot * v.y_dot)
        + 0.5 * f_of_alpha(alpha, p) * v.theta_dot * v.theta_dot
        + 0.5 * p.pitch_inertia() * v.alpha_dot * v.alpha_dot
        + 0.5 * p.i_wyy * 2.0 * v.phi_dot * v.phi_dot
        + mb * sa * v.theta_dot * (-st * v.x_dot + ct * v.y_dot)
        + mb * ca * v.alpha_dot * (ct * v.x_dot + st * v.y_dot)
        - potential(alpha, p)
}

/// Lagrangian restricted to the constraint surface and reduced by
/// SE(2)×S¹: `xi_yaw` is the body yaw rate, `xi_roll` the mean wheel rate.
pub fn reduced_constrained_lagrangian(
    alpha: f64,
    alpha_dot: f64,
    xi_yaw: f64,
    xi_roll: f64,
    p: &Params,
) -> f64 {
    0.5 * h_const(p) * xi_roll * xi_roll
        + p.r * p.m_b * p.b * alpha.cos() * alpha_dot * xi_roll
        + 0.5 * f_of_alpha(alpha, p) * xi_yaw * xi_yaw
        + 0.5 * p.pitch_inertia() * alpha_dot * alpha_dot
        - potential(alpha, p)
}

/// Legendre transform `Σ q̇ ∂L/∂q̇ − L`.
pub fn total_energy(s: &FullState, p: &Params) -> f64 {
    let momentum = momentum_covector_full(s, p);
    let pairing: f64 = momentum.iter().zip(s.q_dot()).map(|(a, b)| a * b).sum();
    pairing - lagrangian_full(s, p)
}
