// Scenario document in, trajectory CSV out.

use wip_dynamics::cli::trajectory_csv;
use wip_dynamics::{simulate, Config};

const SCENARIO: &str = r#"{
  "params": {"m_b": 5.0, "m_W": 0.5, "b": 0.2, "r": 0.1, "d": 0.4, "I_Bxx": 0.1,
             "I_Byy": 0.07, "I_Bz": 0.04, "I_Wyy": 0.0025, "I_Wzz": 0.00125, "g": 9.81},
  "initial": {"full": {"phi1_dot": 1.0, "phi2_dot": 3.0}},
  "torques": [{"t_start": 0.0, "tau1": 0.01, "tau2": -0.01}],
  "sim": {"T": 0.05, "dt": 0.01, "model": "oracle"}
}"#;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Config::from_json(SCENARIO)?;
    let sc = cfg.scenario(None);
    let traj = simulate(sc.model, &sc.initial, &sc.profile, sc.duration, sc.dt, &sc.params)?;
    let csv = trajectory_csv(&traj, &cfg.params);
    print!("{csv}");
    assert_eq!(csv.lines().count(), traj.len() + 1);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
