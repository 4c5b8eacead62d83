// Energy drift of the free fall and its fourth-order decay with the step.

use wip_dynamics::validation::energy_drift;
use wip_dynamics::{simulate, FullState, Initial, ModelKind, Params, TorqueProfile};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let start = Initial::Full(FullState { alpha: 0.2, ..Default::default() });
    let mut previous: Option<f64> = None;
    for dt in [4e-3, 2e-3, 1e-3] {
        let traj = simulate(ModelKind::Full, &start, &TorqueProfile::zero(), 2.0, dt, &p)?;
        let drift = energy_drift(&traj).relative;
        match previous {
            Some(prev) => println!("dt = {dt:.0e}: relative drift {drift:.3e} (ratio {:.1})", prev / drift),
            None => println!("dt = {dt:.0e}: relative drift {drift:.3e}"),
        }
        previous = Some(drift);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
