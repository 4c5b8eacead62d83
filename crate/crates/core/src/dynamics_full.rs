//! Constrained dynamics in the base coordinates `(α, φ₁, φ₂)`.
//!
//! The constrained Lagrangian is `L_c(α, ṙ) = L(q, S(θ) ṙ)`, where `S(θ)`
//! lifts base velocities to the horizontal distribution. Its equations are
//!
//! ```text
//! d/dt ∂L_c/∂ṙ_β − ∂L_c/∂r_β = −(∂L/∂ṡ_b) B^b_{βγ} ṙ^γ + τ_β
//! ```
//!
//! with `τ = (0, τ₁, τ₂)`. `L_c` carries no fibre dependence, so the
//! `A^a_β ∂L_c/∂s^a` term drops out. The group rates follow from `ṡ = −A ṙ`.

use crate::connection::{curvature_at, ehresmann_at};
use crate::error::{Error, Result};
use crate::model::{
    f_of_alpha, h_const, mass_matrix_full, mass_matrix_full_dalpha, mat_vec6, Controls,
    FullState, Params,
};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FullRhs {
    pub alpha_ddot: f64,
    pub phi1_ddot: f64,
    pub phi2_ddot: f64,
    pub x_dot: f64,
    pub y_dot: f64,
    pub theta_dot: f64,
}

/// Columns of the horizontal lift `q̇ = S(θ) ṙ`, as a 6×3 array.
pub fn horizontal_lift(theta: f64, p: &Params) -> [[f64; 3]; 6] {
    let a = ehresmann_at(theta, p).a;
    let mut s = [[0.0; 3]; 6];
    for beta in 0..3 {
        for fibre in 0..3 {
            s[fibre][beta] = -a[fibre][beta];
        }
        s[3 + beta][beta] = 1.0;
    }
    s
}

fn congruence(s: &[[f64; 3]; 6], m: &[[f64; 6]; 6]) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let mut acc = 0.0;
            for k in 0..6 {
                for l in 0..6 {
                    acc += s[k][i] * m[k][l] * s[l][j];
                }
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Velocity Hessian of the constrained Lagrangian, `Sᵀ M(q) S`.
pub fn constrained_mass_matrix(theta: f64, alpha: f64, p: &Params) -> [[f64; 3]; 3] {
    congruence(&horizontal_lift(theta, p), &mass_matrix_full(theta, alpha, p))
}

/// `∂/∂α` of [`constrained_mass_matrix`].
pub fn constrained_mass_matrix_dalpha(theta: f64, alpha: f64, p: &Params) -> [[f64; 3]; 3] {
    congruence(&horizontal_lift(theta, p), &mass_matrix_full_dalpha(theta, alpha, p))
}

/// `L_c(α, α̇, φ̇₁, φ̇₂)`, evaluated by composing the full Lagrangian with the
/// horizontal lift.
pub fn constrained_lagrangian(s: &FullState, p: &Params) -> f64 {
    let lifted = FullState::on_constraints(
        s.x, s.y, s.theta, s.alpha, s.phi1, s.phi2, s.alpha_dot, s.phi1_dot, s.phi2_dot, p,
    );
    crate::model::lagrangian_full(&lifted, p)
}

pub fn full_rhs(s: &FullState, c: Controls, p: &Params) -> Result<FullRhs> {
    let r_dot = [s.alpha_dot, s.phi1_dot, s.phi2_dot];
    let lift = horizontal_lift(s.theta, p);
    let m_q = mass_matrix_full(s.theta, s.alpha, p);
    let m_c = congruence(&lift, &m_q);
    let dm_c = congruence(&lift, &mass_matrix_full_dalpha(s.theta, s.alpha, p));

    let mut q_dot = [0.0; 6];
    for (k, row) in lift.iter().enumerate() {
        q_dot[k] = row.iter().zip(&r_dot).map(|(a, b)| a * b).sum();
    }
    let momentum = mat_vec6(&m_q, &q_dot);
    let fibre_momentum = [momentum[0], momentum[1], momentum[2]];

    let dm_rdot = mat_vec3(&dm_c, &r_dot);
    let dlc_dalpha = 0.5 * dot3(&r_dot, &dm_rdot) + p.m_b * p.g * p.b * s.alpha.sin();
    let forcing = curvature_at(s.theta, p).forcing(&fibre_momentum, &r_dot);

    let rhs = [
        dlc_dalpha - s.alpha_dot * dm_rdot[0] + forcing[0],
        -s.alpha_dot * dm_rdot[1] + forcing[1] + c.tau1,
        -s.alpha_dot * dm_rdot[2] + forcing[2] + c.tau2,
    ];
    let acc = solve3(m_c, rhs)?;

    let s_dot = ehresmann_at(s.theta, p).fibre_velocity(&r_dot);
    Ok(FullRhs {
        alpha_ddot: acc[0],
        phi1_ddot: acc[1],
        phi2_ddot: acc[2],
        x_dot: s_dot[0],
        y_dot: s_dot[1],
        theta_dot: s_dot[2],
    })
}

/// `(ẋ, ẏ, θ̇)` from the wheel rates via `ṡ = −A(θ) ṙ`.
pub fn reconstruct_group_rates(s: &FullState, p: &Params) -> [f64; 3] {
    ehresmann_at(s.theta, p).fibre_velocity(&[s.alpha_dot, s.phi1_dot, s.phi2_dot])
}

/// Nonholonomic momenta `(p₁, p₂)` of a constrained state.
pub fn momenta_from_full(s: &FullState, p: &Params) -> (f64, f64) {
    let phi_dot = s.phi_dot();
    let theta_dot = p.r / p.d * (s.phi2_dot - s.phi1_dot);
    let p1 = h_const(p) * phi_dot + p.r * p.m_b * p.b * s.alpha.cos() * s.alpha_dot;
    let p2 = f_of_alpha(s.alpha, p) * theta_dot;
    (p1, p2)
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn mat_vec3(m: &[[f64; 3]; 3], v: &[f64; 3]) -> [f64; 3] {
    [dot3(&m[0], v), dot3(&m[1], v), dot3(&m[2], v)]
}

/// Gaussian elimination with partial pivoting.
pub(crate) fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Result<[f64; 3]> {
    let scale = m.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    for col in 0..3 {
        let pivot_row = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap_or(col);
        let pivot = m[pivot_row][col];
        if !(pivot.abs() > 1e-13 * scale) {
            return Err(Error::SingularMassMatrix { pivot });
        }
        m.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in col + 1..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= factor * m[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| m[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / m[row][row];
    }
    Ok(x)
}
