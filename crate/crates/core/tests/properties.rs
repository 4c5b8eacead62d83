use nalgebra::{Cholesky, SMatrix};
use proptest::prelude::*;
use wip_dynamics::dynamics_full::constrained_mass_matrix;
use wip_dynamics::dynamics_reduced::{full_to_reduced, reduced_to_full, WheelAnchor};
use wip_dynamics::model::{lagrangian_full, mass_matrix_full, total_energy};
use wip_dynamics::sim::{tau_from_u, u_from_tau};
use wip_dynamics::{Controls, FullState, Params};

fn angle() -> impl Strategy<Value = f64> {
    -std::f64::consts::PI..std::f64::consts::PI
}

fn rate() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

prop_compose! {
    fn constrained_state()(
        x in -10.0..10.0f64, y in -10.0..10.0f64, theta in angle(), alpha in angle(),
        phi1 in angle(), phi2 in angle(), ad in rate(), w1 in rate(), w2 in rate(),
    ) -> FullState {
        FullState::on_constraints(x, y, theta, alpha, phi1, phi2, ad, w1, w2, &Params::default())
    }
}

proptest! {
    #[test]
    fn lagrangian_is_invariant_under_planar_motions(
        s in constrained_state(),
        dx in -5.0..5.0f64, dy in -5.0..5.0f64, dth in angle(), dphi in angle(),
    ) {
        let p = Params::default();
        let (sn, cs) = dth.sin_cos();
        let moved = FullState {
            x: cs * s.x - sn * s.y + dx,
            y: sn * s.x + cs * s.y + dy,
            theta: s.theta + dth,
            phi1: s.phi1 + dphi,
            phi2: s.phi2 + dphi,
            x_dot: cs * s.x_dot - sn * s.y_dot,
            y_dot: sn * s.x_dot + cs * s.y_dot,
            ..s
        };
        let (a, b) = (lagrangian_full(&s, &p), lagrangian_full(&moved, &p));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn mass_matrices_are_positive_definite(theta in angle(), alpha in angle()) {
        let p = Params::default();
        let m = SMatrix::<f64, 6, 6>::from_fn(|i, j| mass_matrix_full(theta, alpha, &p)[i][j]);
        prop_assert!(m == m.transpose());
        prop_assert!(Cholesky::new(m).is_some());
        let mc = SMatrix::<f64, 3, 3>::from_fn(|i, j| constrained_mass_matrix(theta, alpha, &p)[i][j]);
        prop_assert!(Cholesky::new(mc).is_some());
    }

    #[test]
    fn momenta_reconstruct_the_velocities(s in constrained_state()) {
        let p = Params::default();
        let back = reduced_to_full(&full_to_reduced(&s, &p), &WheelAnchor::from_full(&s), &p);
        for (a, b) in s.q().iter().zip(back.q()).chain(s.q_dot().iter().zip(back.q_dot())) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn energy_is_never_below_the_potential(s in constrained_state()) {
        let p = Params::default();
        let kinetic = total_energy(&s, &p) - p.m_b * p.g * p.b * s.alpha.cos();
        prop_assert!(kinetic >= -1e-12);
    }

    #[test]
    fn torque_map_round_trips(t1 in -10.0..10.0f64, t2 in -10.0..10.0f64) {
        let p = Params::default();
        let back = tau_from_u(u_from_tau(Controls::new(t1, t2), &p), &p);
        prop_assert!((back.tau1 - t1).abs() <= 1e-14 && (back.tau2 - t2).abs() <= 1e-14);
    }
}
