// A roll/yaw pulse applied to all three models; the trajectories agree.

use wip_dynamics::cli::run_all_models;
use wip_dynamics::model::{f_of_alpha, h_const};
use wip_dynamics::sim::tau_from_u;
use wip_dynamics::validation::{compare_trajectories, render_comparison_text};
use wip_dynamics::{Initial, ModelKind, MomentumInputs, Params, ReducedState, Scenario, TorqueProfile};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let torque = tau_from_u(MomentumInputs { u1: 0.2, u2: 0.05 }, &p);
    println!("u = (0.2, 0.05) needs wheel torques ({:.4}, {:.4}) N m", torque.tau1, torque.tau2);

    let scenario = Scenario {
        model: ModelKind::Full,
        initial: Initial::Reduced(ReducedState {
            alpha: 0.15,
            p1: 0.3 * h_const(&p),
            p2: 0.1 * f_of_alpha(0.0, &p),
            ..Default::default()
        }),
        profile: TorqueProfile::pulse(0.5, 1.0, torque)?,
        duration: 2.0,
        dt: 2e-3,
        params: p,
    };
    let [full, reduced, oracle] = run_all_models(&scenario);
    let (full, reduced, oracle) = (full?, reduced?, oracle?);
    let reports = vec![compare_trajectories(&full, &reduced, &p)?, compare_trajectories(&full, &oracle, &p)?];
    print!("{}", render_comparison_text(&reports));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
