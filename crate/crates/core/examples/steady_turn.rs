// Momentum/shape model: with the body upright and constant momenta the
// vehicle drives a circle of radius (r p1 / h) / (p2 / f(0)).

use wip_dynamics::model::{f_of_alpha, h_const};
use wip_dynamics::{simulate, Initial, ModelKind, Params, ReducedState, TorqueProfile};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let (p1, p2) = (2.0 * h_const(&p), 0.5 * f_of_alpha(0.0, &p));
    let radius = (p.r * p1 / h_const(&p)) / (p2 / f_of_alpha(0.0, &p));

    let start = Initial::Reduced(ReducedState { p1, p2, ..Default::default() });
    let traj = simulate(ModelKind::Reduced, &start, &TorqueProfile::zero(), 10.0, 1e-2, &p)?;

    let worst = traj
        .reduced_states(&p)
        .iter()
        .map(|s| (s.x.hypot(s.y - radius) - radius).abs())
        .fold(0.0f64, f64::max);
    println!("radius {radius:.4} m, largest distance error from the circle {worst:.2e} m");
    assert!(worst < 1e-9);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
