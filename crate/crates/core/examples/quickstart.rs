// Tip the pendulum slightly off upright and watch it fall.

use wip_dynamics::{simulate, FullState, Initial, ModelKind, Params, TorqueProfile};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let start = Initial::Full(FullState { alpha: 0.05, ..Default::default() });
    let traj = simulate(ModelKind::Full, &start, &TorqueProfile::zero(), 1.0, 1e-3, &p)?;

    for s in traj.reduced_states(&p).iter().step_by(200) {
        println!("alpha = {:+.4}  x = {:+.5}  p1 = {:+.5}", s.alpha, s.x, s.p1);
    }
    let last = traj.reduced_states(&p).pop().unwrap();
    assert!(last.alpha > 0.05, "upright is unstable");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
