// The multiplier oracle against the closed-form base dynamics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wip_dynamics::dynamics_full::full_rhs;
use wip_dynamics::oracle::{lagrange_dalembert_rhs, OracleConfig};
use wip_dynamics::validation::random_constrained_state;
use wip_dynamics::{Controls, Params};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = Params::default();
    let cfg = OracleConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);

    for _ in 0..5 {
        let s = random_constrained_state(&mut rng, &p);
        let c = Controls::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5));
        let closed = full_rhs(&s, c, &p)?;
        let oracle = lagrange_dalembert_rhs(&s.q(), &s.q_dot(), &[0.0, 0.0, 0.0, 0.0, c.tau1, c.tau2], &p, &cfg)?;
        println!(
            "alpha_ddot closed {:+.9}  oracle {:+.9}   multipliers {:+.4?}",
            closed.alpha_ddot, oracle.q_ddot[3], oracle.multipliers
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
