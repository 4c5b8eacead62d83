// Independent scenarios simulated on worker threads.

use wip_dynamics::sim::simulate_batch;
use wip_dynamics::{FullState, Initial, ModelKind, Params, Scenario, TorqueProfile};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let scenarios: Vec<Scenario> = [0.02, 0.1, 0.3, 0.6]
        .iter()
        .map(|&alpha| Scenario {
            model: ModelKind::Reduced,
            initial: Initial::Full(FullState { alpha, ..Default::default() }),
            profile: TorqueProfile::zero(),
            duration: 1.0,
            dt: 1e-3,
            params: p,
        })
        .collect();
    for (sc, result) in scenarios.iter().zip(simulate_batch(&scenarios)) {
        let last = result?.reduced_states(&p).pop().unwrap();
        let Initial::Full(start) = sc.initial else { unreachable!() };
        println!("alpha0 = {:.2}: after 1 s alpha = {:+.4}, x = {:+.4}", start.alpha, last.alpha, last.x);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
