// The structural suite behind `wip check`, driven from a scenario file.

use wip_dynamics::validation::{render_checks_text, run_structural_suite};
use wip_dynamics::Config;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/default.json");
    let mut cfg = Config::load(path.as_ref())?;
    cfg.sim.duration = 1.0;
    let outcomes = run_structural_suite(&cfg.scenario(None), &cfg.tolerances.suite());
    print!("{}", render_checks_text(&outcomes));
    assert!(outcomes.iter().all(|o| o.passed));
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
