//! Reference dynamics from the unconstrained Lagrangian and the rolling
//! constraints, with Lagrange multipliers and finite-difference derivatives.
//!
//! Nothing here uses the connection, curvature or momentum closed forms: the
//! saddle system
//!
//! ```text
//! [ M  −Cᵀ ] [ q̈ ]   [ ∂L/∂q − (∂²L/∂q∂q̇) q̇ + τ ]
//! [ C   0  ] [ λ  ] = [ −Ċ q̇                       ]
//! ```
//!
//! is assembled from central differences of [`lagrangian_full`] and of the
//! constraint matrix, then solved with a fully pivoted LU.

use nalgebra::{SMatrix, SVector};

use crate::error::{Error, Result};
use crate::model::{lagrangian_full, FullState, Params};

/// Rows of the velocity constraints `C(q) q̇ = 0`: surge along x, surge
/// along y, and the yaw/wheel-difference relation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintMatrix {
    pub c: [[f64; 6]; 3],
}

impl ConstraintMatrix {
    pub fn at(q: &[f64; 6], p: &Params) -> Self {
        let (s, c) = q[2].sin_cos();
        let half_r = 0.5 * p.r;
        let yaw = p.r / p.d;
        ConstraintMatrix {
            c: [
                [1.0, 0.0, 0.0, 0.0, -half_r * c, -half_r * c],
                [0.0, 1.0, 0.0, 0.0, -half_r * s, -half_r * s],
                [0.0, 0.0, 1.0, 0.0, yaw, -yaw],
            ],
        }
    }

    pub fn apply(&self, v: &[f64; 6]) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (o, row) in out.iter_mut().zip(&self.c) {
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
        out
    }
}

/// Finite-difference step sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Relative step for configuration derivatives, scaled by `max(1, |q_i|)`.
    pub position_step: f64,
    /// Relative step for velocity derivatives, scaled by `max(1, ‖q̇‖∞)`.
    /// The Lagrangian is quadratic in velocity, so central differences are
    /// exact here and a large step only limits cancellation.
    pub velocity_step: f64,
    /// Admissibility tolerance on `‖C q̇‖∞`.
    pub constraint_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { position_step: 1e-5, velocity_step: 1e-2, constraint_tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSolution {
    pub q_ddot: [f64; 6],
    /// Constraint-force multipliers, one per constraint row.
    pub multipliers: [f64; 3],
}

/// Lagrange-d'Alembert accelerations for an admissible `(q, q̇)`.
pub fn lagrange_dalembert_rhs(
    q: &[f64; 6],
    q_dot: &[f64; 6],
    forces: &[f64; 6],
    p: &Params,
    cfg: &OracleConfig,
) -> Result<OracleSolution> {
    let residual = ConstraintMatrix::at(q, p)
        .apply(q_dot)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if residual > cfg.constraint_tol {
        return Err(Error::ConstraintViolation { residual, tolerance: cfg.constraint_tol });
    }
    solve_saddle(q, q_dot, forces, p, cfg)
}

/// Same solve without the admissibility check. Runge-Kutta stage states sit
/// off the constraint surface by O(dt²), so the integrator calls this.
pub(crate) fn solve_saddle(
    q: &[f64; 6],
    q_dot: &[f64; 6],
    forces: &[f64; 6],
    p: &Params,
    cfg: &OracleConfig,
) -> Result<OracleSolution> {
    let lag = |q: &[f64; 6], v: &[f64; 6]| lagrangian_full(&FullState::from_arrays(*q, *v), p);
    let hv = cfg.velocity_step * inf_norm(q_dot).max(1.0);

    let mass = velocity_hessian(&lag, q, q_dot, hv);
    let mut generalized = [0.0; 6];
    for i in 0..6 {
        let h = cfg.position_step * q[i].abs().max(1.0);
        let (mut qp, mut qm) = (*q, *q);
        qp[i] += h;
        qm[i] -= h;
        generalized[i] = (lag(&qp, q_dot) - lag(&qm, q_dot)) / (2.0 * h) + forces[i];
    }

    // Directional derivatives along q̇ of ∂L/∂q̇ and of C.
    let speed = inf_norm(q_dot);
    let mut drift = [0.0; 3];
    if speed > 0.0 {
        let eps = cfg.position_step * inf_norm(q).max(1.0) / speed;
        let (mut qp, mut qm) = (*q, *q);
        for i in 0..6 {
            qp[i] += eps * q_dot[i];
            qm[i] -= eps * q_dot[i];
        }
        let gp = velocity_gradient(&lag, &qp, q_dot, hv);
        let gm = velocity_gradient(&lag, &qm, q_dot, hv);
        for i in 0..6 {
            generalized[i] -= (gp[i] - gm[i]) / (2.0 * eps);
        }
        let cp = ConstraintMatrix::at(&qp, p).apply(q_dot);
        let cm = ConstraintMatrix::at(&qm, p).apply(q_dot);
        for k in 0..3 {
            drift[k] = (cp[k] - cm[k]) / (2.0 * eps);
        }
    }

    let c = ConstraintMatrix::at(q, p).c;
    let mut lhs = SMatrix::<f64, 9, 9>::zeros();
    let mut rhs = SVector::<f64, 9>::zeros();
    for i in 0..6 {
        for j in 0..6 {
            lhs[(i, j)] = mass[i][j];
        }
        rhs[i] = generalized[i];
    }
    for k in 0..3 {
        for j in 0..6 {
            lhs[(6 + k, j)] = c[k][j];
            lhs[(j, 6 + k)] = -c[k][j];
        }
        rhs[6 + k] = -drift[k];
    }
    let lu = lhs.full_piv_lu();
    if !lu.is_invertible() {
        return Err(Error::RankDeficientSaddle);
    }
    let sol = lu.solve(&rhs).ok_or(Error::RankDeficientSaddle)?;
    let mut q_ddot = [0.0; 6];
    let mut multipliers = [0.0; 3];
    for i in 0..6 {
        q_ddot[i] = sol[i];
    }
    for k in 0..3 {
        multipliers[k] = sol[6 + k];
    }
    Ok(OracleSolution { q_ddot, multipliers })
}

/// `Ċ q̇` by central difference along `q̇`; exposed for residual checks.
pub fn constraint_drift(q: &[f64; 6], q_dot: &[f64; 6], p: &Params, step: f64) -> [f64; 3] {
    let (mut qp, mut qm) = (*q, *q);
    for i in 0..6 {
        qp[i] += step * q_dot[i];
        qm[i] -= step * q_dot[i];
    }
    let cp = ConstraintMatrix::at(&qp, p).apply(q_dot);
    let cm = ConstraintMatrix::at(&qm, p).apply(q_dot);
    [0, 1, 2].map(|k| (cp[k] - cm[k]) / (2.0 * step))
}

fn inf_norm(v: &[f64; 6]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn velocity_gradient(
    lag: &impl Fn(&[f64; 6], &[f64; 6]) -> f64,
    q: &[f64; 6],
    q_dot: &[f64; 6],
    h: f64,
) -> [f64; 6] {
    let mut g = [0.0; 6];
    for i in 0..6 {
        let (mut vp, mut vm) = (*q_dot, *q_dot);
        vp[i] += h;
        vm[i] -= h;
        g[i] = (lag(q, &vp) - lag(q, &vm)) / (2.0 * h);
    }
    g
}

fn velocity_hessian(
    lag: &impl Fn(&[f64; 6], &[f64; 6]) -> f64,
    q: &[f64; 6],
    q_dot: &[f64; 6],
    h: f64,
) -> [[f64; 6]; 6] {
    let mut m = [[0.0; 6]; 6];
    let centre = lag(q, q_dot);
    for i in 0..6 {
        let (mut vp, mut vm) = (*q_dot, *q_dot);
        vp[i] += h;
        vm[i] -= h;
        m[i][i] = (lag(q, &vp) - 2.0 * centre + lag(q, &vm)) / (h * h);
        for j in 0..i {
            let shifted = |si: f64, sj: f64| {
                let mut v = *q_dot;
                v[i] += si * h;
                v[j] += sj * h;
                lag(q, &v)
            };
            let val = (shifted(1.0, 1.0) - shifted(1.0, -1.0) - shifted(-1.0, 1.0)
                + shifted(-1.0, -1.0))
                / (4.0 * h * h);
            m[i][j] = val;
            m[j][i] = val;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mass_matrix_full;

    fn admissible(p: &Params) -> FullState {
        FullState::on_constraints(0.4, -1.0, 1.1, 0.35, 0.2, -0.3, 0.9, -1.4, 0.6, p)
    }

    #[test]
    fn rest_is_equilibrium() {
        let p = Params::default();
        let sol =
            lagrange_dalembert_rhs(&[0.0; 6], &[0.0; 6], &[0.0; 6], &p, &OracleConfig::default())
                .unwrap();
        assert!(sol.q_ddot.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn accelerations_respect_constraints() {
        let p = Params::default();
        let s = admissible(&p);
        let cfg = OracleConfig::default();
        let sol = lagrange_dalembert_rhs(&s.q(), &s.q_dot(), &[0.0, 0.0, 0.0, 0.0, 0.3, -0.1], &p, &cfg)
            .unwrap();
        let c = ConstraintMatrix::at(&s.q(), &p);
        let acc = c.apply(&sol.q_ddot);
        let drift = constraint_drift(&s.q(), &s.q_dot(), &p, 1e-6);
        for k in 0..3 {
            assert!((acc[k] + drift[k]).abs() < 1e-8);
        }
        // Constraint forces do no work on admissible velocities.
        let power: f64 = (0..6)
            .map(|j| (0..3).map(|k| sol.multipliers[k] * c.c[k][j]).sum::<f64>() * s.q_dot()[j])
            .sum();
        assert!(power.abs() < 1e-10);
    }

    #[test]
    fn finite_difference_mass_matrix_matches_analytic() {
        let p = Params::default();
        let s = admissible(&p);
        let lag = |q: &[f64; 6], v: &[f64; 6]| lagrangian_full(&FullState::from_arrays(*q, *v), &p);
        let fd = velocity_hessian(&lag, &s.q(), &s.q_dot(), 1e-2);
        let exact = mass_matrix_full(s.theta, s.alpha, &p);
        for i in 0..6 {
            for j in 0..6 {
                assert!((fd[i][j] - exact[i][j]).abs() < 1e-10 * exact[i][j].abs().max(1.0));
            }
        }
    }

    #[test]
    fn rejects_inadmissible_velocity() {
        let p = Params::default();
        let mut s = admissible(&p);
        s.y_dot += 1e-6;
        let err = lagrange_dalembert_rhs(&s.q(), &s.q_dot(), &[0.0; 6], &p, &OracleConfig::default());
        assert!(matches!(err, Err(Error::ConstraintViolation { .. })));
    }

    #[test]
    fn constraint_matrix_has_full_rank() {
        let p = Params::default();
        for th in [0.0, 0.8, 2.4, -1.9] {
            let c = ConstraintMatrix::at(&[0.0, 0.0, th, 0.0, 0.0, 0.0], &p).c;
            let m = SMatrix::<f64, 3, 6>::from_fn(|i, j| c[i][j]);
            assert_eq!(m.rank(1e-12), 3);
        }
    }
}
