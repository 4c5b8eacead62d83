//! Momentum/shape dynamics on SE(2)×S¹ with group reconstruction.
//!
//! ```text
//! g⁻¹ġ + 𝒜(α) α̇ = Γ(α) p
//! ṗ₁ = m_b r b sin α p₂² / f² + u₁
//! ṗ₂ = −(m_b b r sin α p₂ / (f h)) (p₁ − r m_b b cos α α̇) + u₂
//! m(α) α̈ = −(m_b² b² r² sin 2α / 2h) α̇²
//!          + ((h f′ − m_b² b² r² sin 2α) / (2 h f²)) p₂²
//!          + m_b g b sin α − (m_b b r cos α / h) u₁
//! ```
//!
//! `p₁ − r m_b b cos α α̇ = h φ̇`, so the yaw-momentum coupling is through the
//! mean wheel rate. The `u₁` term in the shape equation is the inertial
//! reaction of the roll torque through the `α̇ φ̇` coupling of the Lagrangian.

use crate::connection::body_velocity_from_momenta;
use crate::dynamics_full::momenta_from_full;
use crate::error::{Error, Result};
use crate::model::{f_of_alpha, f_prime, h_const, shape_mass, FullState, Params, ReducedState};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReducedRhs {
    pub p1_dot: f64,
    pub p2_dot: f64,
    pub alpha_ddot: f64,
    pub x_dot: f64,
    pub y_dot: f64,
    pub theta_dot: f64,
    pub phi_dot: f64,
}

/// Roll/yaw generalized forces.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MomentumInputs {
    pub u1: f64,
    pub u2: f64,
}

impl MomentumInputs {
    pub const ZERO: MomentumInputs = MomentumInputs { u1: 0.0, u2: 0.0 };
}

pub fn momentum_rhs(
    alpha: f64,
    alpha_dot: f64,
    p1: f64,
    p2: f64,
    u: MomentumInputs,
    p: &Params,
) -> (f64, f64) {
    let f = f_of_alpha(alpha, p);
    let h = h_const(p);
    let (sa, ca) = alpha.sin_cos();
    let k = p.m_b * p.r * p.b * sa;
    let p1_dot = k * p2 * p2 / (f * f) + u.u1;
    let p2_dot = -(k * p2 / (f * h)) * (p1 - p.r * p.m_b * p.b * ca * alpha_dot) + u.u2;
    (p1_dot, p2_dot)
}

pub fn shape_rhs(alpha: f64, alpha_dot: f64, p2: f64, u1: f64, p: &Params) -> Result<f64> {
    let mass = shape_mass(alpha, p);
    if !(mass > 0.0) {
        return Err(Error::NonPositiveShapeMass { alpha, value: mass });
    }
    let h = h_const(p);
    let f = f_of_alpha(alpha, p);
    let (sa, ca) = alpha.sin_cos();
    let s2 = (2.0 * alpha).sin();
    let coupling = p.m_b * p.b * p.r;
    let force = -(coupling * coupling * s2 / (2.0 * h)) * alpha_dot * alpha_dot
        + (h * f_prime(alpha, p) - coupling * coupling * s2) / (2.0 * h * f * f) * p2 * p2
        + p.m_b * p.g * p.b * sa
        - coupling * ca / h * u1;
    Ok(force / mass)
}

pub fn reduced_rhs(s: &ReducedState, u: MomentumInputs, p: &Params) -> Result<ReducedRhs> {
    let (p1_dot, p2_dot) = momentum_rhs(s.alpha, s.alpha_dot, s.p1, s.p2, u, p);
    let alpha_ddot = shape_rhs(s.alpha, s.alpha_dot, s.p2, u.u1, p)?;
    let xi = body_velocity_from_momenta(s.alpha, s.alpha_dot, s.p1, s.p2, p);
    let (st, ct) = s.theta.sin_cos();
    Ok(ReducedRhs {
        p1_dot,
        p2_dot,
        alpha_ddot,
        x_dot: xi.surge() * ct,
        y_dot: xi.surge() * st,
        theta_dot: xi.yaw(),
        phi_dot: xi.roll(),
    })
}

/// Reference point fixing the integration constant of the yaw relation
/// `θ − θ₀ = (r/d)((φ₂ − φ₂₀) − (φ₁ − φ₁₀))`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WheelAnchor {
    pub theta0: f64,
    pub phi1_0: f64,
    pub phi2_0: f64,
}

impl WheelAnchor {
    pub fn from_full(s: &FullState) -> Self {
        WheelAnchor { theta0: s.theta, phi1_0: s.phi1, phi2_0: s.phi2 }
    }

    /// Anchor with both wheels at the mean angle at heading θ₀.
    pub fn centred(theta0: f64, phi0: f64) -> Self {
        WheelAnchor { theta0, phi1_0: phi0, phi2_0: phi0 }
    }

    /// `φ₂ − φ₁` implied by heading θ.
    pub fn wheel_difference(&self, theta: f64, p: &Params) -> f64 {
        p.d / p.r * (theta - self.theta0) + (self.phi2_0 - self.phi1_0)
    }
}

pub fn full_to_reduced(s: &FullState, p: &Params) -> ReducedState {
    let (p1, p2) = momenta_from_full(s, p);
    ReducedState {
        x: s.x,
        y: s.y,
        theta: s.theta,
        phi: s.phi(),
        alpha: s.alpha,
        alpha_dot: s.alpha_dot,
        p1,
        p2,
    }
}

pub fn reduced_to_full(s: &ReducedState, anchor: &WheelAnchor, p: &Params) -> FullState {
    let half_diff = 0.5 * anchor.wheel_difference(s.theta, p);
    let xi = body_velocity_from_momenta(s.alpha, s.alpha_dot, s.p1, s.p2, p);
    let half_rate_diff = 0.5 * p.d / p.r * xi.yaw();
    FullState::on_constraints(
        s.x,
        s.y,
        s.theta,
        s.alpha,
        s.phi - half_diff,
        s.phi + half_diff,
        s.alpha_dot,
        xi.roll() - half_rate_diff,
        xi.roll() + half_rate_diff,
        p,
    )
}
