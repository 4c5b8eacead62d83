// Base-coordinate dynamics: constrained mass matrix and accelerations.

use wip_dynamics::dynamics_full::{constrained_mass_matrix, full_rhs, momenta_from_full};
use wip_dynamics::{Controls, FullState, Params};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let s = FullState::on_constraints(0.0, 0.0, 0.0, 0.3, 0.0, 0.0, 0.5, -1.0, 3.0, &p);

    let m = constrained_mass_matrix(s.theta, s.alpha, &p);
    println!("M_c(alpha = 0.3):");
    for row in m {
        println!("  {row:>10.6?}");
    }

    for torque in [Controls::ZERO, Controls::new(0.2, 0.2), Controls::new(-0.1, 0.1)] {
        let r = full_rhs(&s, torque, &p)?;
        println!(
            "tau = ({:+.1}, {:+.1}): alpha_ddot = {:+.4}, phi1_ddot = {:+.4}, phi2_ddot = {:+.4}",
            torque.tau1, torque.tau2, r.alpha_ddot, r.phi1_ddot, r.phi2_ddot
        );
    }
    let (p1, p2) = momenta_from_full(&s, &p);
    println!("nonholonomic momenta: p1 = {p1:.5}, p2 = {p2:.5}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
