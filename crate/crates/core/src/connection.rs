//! Ehresmann connection of the rolling constraints, its curvature, and the
//! local form of the nonholonomic connection on SE(2)×S¹.
//!
//! Base coordinates are `r = (α, φ₁, φ₂)`, fibre coordinates `s = (x, y, θ)`;
//! admissible velocities satisfy `ṡ + A(θ) ṙ = 0`. The Lie algebra of
//! SE(2)×S¹ uses the basis e₁ (surge), e₂ (sway), e₃ (yaw), e₄ (mean wheel
//! roll), stored at indices 0..4.

use crate::model::{f_of_alpha, h_const, Params};

/// Index of the tilt coordinate among the base coordinates.
pub const ALPHA: usize = 0;
pub const PHI1: usize = 1;
pub const PHI2: usize = 2;

/// Fibre coordinate indices.
pub const SX: usize = 0;
pub const SY: usize = 1;
pub const STHETA: usize = 2;

/// Coefficients `A^a_β` of the Ehresmann connection, indexed `[a][β]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EhresmannCoeffs {
    pub a: [[f64; 3]; 3],
}

impl EhresmannCoeffs {
    /// `ṡ = −A ṙ`.
    pub fn fibre_velocity(&self, r_dot: &[f64; 3]) -> [f64; 3] {
        let mut s_dot = [0.0; 3];
        for (out, row) in s_dot.iter_mut().zip(&self.a) {
            *out = -row.iter().zip(r_dot).map(|(a, v)| a * v).sum::<f64>();
        }
        s_dot
    }

    /// Residual of `ṡ + A ṙ`, zero on the horizontal distribution.
    pub fn constraint_residual(&self, s_dot: &[f64; 3], r_dot: &[f64; 3]) -> [f64; 3] {
        let horizontal = self.fibre_velocity(r_dot);
        [s_dot[0] - horizontal[0], s_dot[1] - horizontal[1], s_dot[2] - horizontal[2]]
    }
}

pub fn ehresmann_at(theta: f64, p: &Params) -> EhresmannCoeffs {
    let (s, c) = theta.sin_cos();
    let half_r = 0.5 * p.r;
    let yaw = p.r / p.d;
    EhresmannCoeffs {
        a: [
            [0.0, -half_r * c, -half_r * c],
            [0.0, -half_r * s, -half_r * s],
            [0.0, yaw, -yaw],
        ],
    }
}

/// `∂A/∂θ`; the coefficients depend on no other coordinate.
pub fn ehresmann_dtheta(theta: f64, p: &Params) -> EhresmannCoeffs {
    let (s, c) = theta.sin_cos();
    let half_r = 0.5 * p.r;
    EhresmannCoeffs {
        a: [[0.0, half_r * s, half_r * s], [0.0, -half_r * c, -half_r * c], [0.0; 3]],
    }
}

/// Curvature coefficients `B^b_{βγ}`, indexed `[b][β][γ]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Curvature {
    pub b: [[[f64; 3]; 3]; 3],
}

impl Curvature {
    /// Generalized constraint force `−(∂L/∂ṡ_b) B^b_{βγ} ṙ^γ` for each base
    /// coordinate β.
    pub fn forcing(&self, fibre_momentum: &[f64; 3], r_dot: &[f64; 3]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (beta, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (b, pb) in fibre_momentum.iter().enumerate() {
                for (gamma, rg) in r_dot.iter().enumerate() {
                    acc += pb * self.b[b][beta][gamma] * rg;
                }
            }
            *o = -acc;
        }
        out
    }
}

/// Curvature of the rolling connection, evaluated dense:
/// `B^b_{βγ} = ∂_γ A^b_β − ∂_β A^b_γ + A^a_β ∂_a A^b_γ − A^a_γ ∂_a A^b_β`.
///
/// `A` depends on θ only, so the base derivatives vanish and only the
/// `a = θ` fibre derivative contributes. Only the `(φ₁, φ₂)` slots end up
/// nonzero: `B^x_{φ₁φ₂} = (r²/d) sin θ`, `B^y_{φ₁φ₂} = −(r²/d) cos θ`.
pub fn curvature_at(theta: f64, p: &Params) -> Curvature {
    let a = ehresmann_at(theta, p).a;
    let da = ehresmann_dtheta(theta, p).a;
    let mut b = [[[0.0; 3]; 3]; 3];
    for (fibre, slab) in b.iter_mut().enumerate() {
        for beta in 0..3 {
            for gamma in 0..3 {
                slab[beta][gamma] =
                    a[STHETA][beta] * da[fibre][gamma] - a[STHETA][gamma] * da[fibre][beta];
            }
        }
    }
    Curvature { b }
}

/// Local form of the nonholonomic connection,
/// `g⁻¹ġ + 𝒜(α) α̇ = Γ(α) p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonholoConnectionLocal {
    /// `dα` coefficients of 𝒜 along e₁..e₄.
    pub shape_form: [f64; 4],
    /// Γ(α) as a 4×2 matrix acting on `(p₁, p₂)`.
    pub gamma: [[f64; 2]; 4],
}

impl NonholoConnectionLocal {
    pub fn gamma_times(&self, p1: f64, p2: f64) -> [f64; 4] {
        let mut xi = [0.0; 4];
        for (x, row) in xi.iter_mut().zip(&self.gamma) {
            *x = row[0] * p1 + row[1] * p2;
        }
        xi
    }
}

pub fn nonholo_connection(alpha: f64, p: &Params) -> NonholoConnectionLocal {
    let h = h_const(p);
    let roll = p.r * p.m_b * p.b * alpha.cos() / h;
    NonholoConnectionLocal {
        shape_form: [p.r * roll, 0.0, 0.0, roll],
        gamma: [[p.r / h, 0.0], [0.0, 0.0], [0.0, 1.0 / f_of_alpha(alpha, p)], [1.0 / h, 0.0]],
    }
}

/// Body velocity `ξ = g⁻¹ġ ∈ se(2)×ℝ` as (surge, sway, yaw, roll).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyVelocity(pub [f64; 4]);

impl BodyVelocity {
    pub fn surge(&self) -> f64 {
        self.0[0]
    }
    pub fn sway(&self) -> f64 {
        self.0[1]
    }
    pub fn yaw(&self) -> f64 {
        self.0[2]
    }
    pub fn roll(&self) -> f64 {
        self.0[3]
    }

    /// Spatial rates `(ẋ, ẏ, θ̇, φ̇)` at heading θ.
    pub fn spatial(&self, theta: f64) -> [f64; 4] {
        let (s, c) = theta.sin_cos();
        [
            c * self.surge() - s * self.sway(),
            s * self.surge() + c * self.sway(),
            self.yaw(),
            self.roll(),
        ]
    }
}

/// `ξ = −𝒜(α) α̇ + Γ(α) p`.
pub fn body_velocity_from_momenta(
    alpha: f64,
    alpha_dot: f64,
    p1: f64,
    p2: f64,
    p: &Params,
) -> BodyVelocity {
    let conn = nonholo_connection(alpha, p);
    let gp = conn.gamma_times(p1, p2);
    let mut xi = [0.0; 4];
    for k in 0..4 {
        xi[k] = gp[k] - conn.shape_form[k] * alpha_dot;
    }
    // Pure-rolling surge, exact rather than up to rounding.
    xi[0] = p.r * xi[3];
    BodyVelocity(xi)
}
