// Ehresmann connection, its curvature, and the nonholonomic connection.

use wip_dynamics::connection::{
    body_velocity_from_momenta, curvature_at, ehresmann_at, nonholo_connection, PHI1, PHI2, SX, SY,
};
use wip_dynamics::model::h_const;
use wip_dynamics::Params;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let theta = 0.7;

    let a = ehresmann_at(theta, &p);
    let s_dot = a.fibre_velocity(&[0.0, 2.0, 2.0]);
    println!("equal wheel rates 2 rad/s at heading {theta}: (xdot, ydot, thetadot) = {s_dot:.4?}");

    let b = curvature_at(theta, &p).b;
    println!("B^x_(phi1 phi2) = {:.5}, B^y_(phi1 phi2) = {:.5}", b[SX][PHI1][PHI2], b[SY][PHI1][PHI2]);

    let conn = nonholo_connection(0.0, &p);
    println!("shape form at alpha = 0: {:.5?}", conn.shape_form);

    // Momentum (h, 0) is pure rolling at unit wheel rate.
    let xi = body_velocity_from_momenta(0.0, 0.0, h_const(&p), 0.0, &p);
    println!("body velocity for p = (h, 0): {:?}", xi.0);
    assert!((xi.surge() - p.r).abs() < 1e-15 && (xi.roll() - 1.0).abs() < 1e-15);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
