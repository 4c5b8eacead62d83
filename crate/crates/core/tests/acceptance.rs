//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so the lines appear in plain `cargo test` output; the process
//! exits non-zero if any criterion fails.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wip_dynamics::connection::{curvature_at, ALPHA};
use wip_dynamics::dynamics_full::full_rhs;
use wip_dynamics::model::{f_of_alpha, h_const};
use wip_dynamics::oracle::{lagrange_dalembert_rhs, OracleConfig};
use wip_dynamics::sim::{tau_from_u, Scenario};
use wip_dynamics::validation::{
    check_curvature, check_pairing, compare_trajectories, energy_drift, equivariance_error,
    holonomic_deviation, momentum_rate_error, random_constrained_state, GroupShift,
};
use wip_dynamics::{
    simulate, Controls, FullState, Initial, ModelKind, MomentumInputs, Params, ReducedState,
    TorqueProfile,
};

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Initial state and torque pulse of the model-equivalence run.
fn equivalence_scenario(p: &Params) -> (Initial, TorqueProfile) {
    let init = Initial::Reduced(ReducedState {
        alpha: 0.15,
        p1: 0.3 * h_const(p),
        p2: 0.1 * f_of_alpha(0.0, p),
        ..Default::default()
    });
    let torque = tau_from_u(MomentumInputs { u1: 0.2, u2: 0.05 }, p);
    (init, TorqueProfile::pulse(1.0, 2.0, torque).unwrap())
}

const POSITIONS: [&str; 5] = ["x", "y", "theta", "alpha", "phi"];

fn model_equivalence(p: &Params) -> Line {
    let (init, prof) = equivalence_scenario(p);
    let error_at = |dt: f64| {
        let full = simulate(ModelKind::Full, &init, &prof, 5.0, dt, p).unwrap();
        let reduced = simulate(ModelKind::Reduced, &init, &prof, 5.0, dt, p).unwrap();
        compare_trajectories(&full, &reduced, p).unwrap().max_over(&POSITIONS)
    };
    let clock = Instant::now();
    let coarse = error_at(1e-3);
    let elapsed = clock.elapsed().as_secs_f64();
    let fine = error_at(2.5e-4);
    let ratio = coarse / fine;
    Line {
        id: 1,
        name: "model equivalence",
        passed: coarse <= 1e-5 && ratio >= 10.0 && elapsed < 1.0,
        detail: format!(
            "max err {coarse:.2e} at dt=1e-3, {fine:.2e} at dt=2.5e-4 (ratio {ratio:.1}), {elapsed:.2}s"
        ),
    }
}

fn oracle_agreement(p: &Params) -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = OracleConfig::default();
    let clock = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let s = random_constrained_state(&mut rng, p);
        let c = Controls::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let full = full_rhs(&s, c, p).unwrap();
        let forces = [0.0, 0.0, 0.0, 0.0, c.tau1, c.tau2];
        let oracle = lagrange_dalembert_rhs(&s.q(), &s.q_dot(), &forces, p, &cfg).unwrap();
        let a = [full.alpha_ddot, full.phi1_ddot, full.phi2_ddot];
        let b = [oracle.q_ddot[3], oracle.q_ddot[4], oracle.q_ddot[5]];
        let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
        let diff = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        worst = worst.max(diff / scale);
    }
    let elapsed = clock.elapsed().as_secs_f64();
    Line {
        id: 2,
        name: "oracle agreement",
        passed: worst <= 1e-6 && elapsed < 5.0,
        detail: format!("max relative error {worst:.2e} over 100 states, {elapsed:.2}s"),
    }
}

fn energy_conservation(p: &Params) -> Line {
    let init = Initial::Full(FullState { alpha: 0.2, ..Default::default() });
    let drift = |dt: f64| {
        let t = simulate(ModelKind::Full, &init, &TorqueProfile::zero(), 5.0, dt, p).unwrap();
        energy_drift(&t).relative
    };
    let at_fine = drift(1e-4);
    // Coarser steps are pre-asymptotic (λ·dt is not yet small); from
    // 2.5e-3 down each halving divides the drift by about 16.
    let sweep = [drift(2.5e-3), drift(1.25e-3), drift(6.25e-4)];
    let ratios = [sweep[0] / sweep[1], sweep[1] / sweep[2]];
    let fourth_order = ratios.iter().all(|r| (12.0..20.0).contains(r));
    Line {
        id: 3,
        name: "energy conservation",
        passed: at_fine <= 1e-8 && fourth_order,
        detail: format!(
            "relative drift {at_fine:.2e} at dt=1e-4; halving ratios {:.1}, {:.1}",
            ratios[0], ratios[1]
        ),
    }
}

fn momentum_closed_forms(p: &Params) -> Line {
    let o = check_pairing(p, 100, 4, 1e-7);
    Line { id: 4, name: "momentum closed forms", passed: o.passed, detail: format!("max abs error {:.2e}", o.measured) }
}

fn momentum_dynamics(p: &Params) -> Line {
    let (init, prof) = equivalence_scenario(p);
    let traj = simulate(ModelKind::Full, &init, &prof, 5.0, 1e-4, p).unwrap();
    let err = momentum_rate_error(&traj, &prof, p);
    Line { id: 5, name: "momentum dynamics", passed: err <= 1e-4, detail: format!("max abs rate error {err:.2e}") }
}

fn curvature(p: &Params) -> Line {
    let o = check_curvature(p, 50, 6, 1e-7);
    let mut rng = ChaCha8Rng::seed_from_u64(60);
    let tilt_zero = (0..50).all(|_| {
        let b = curvature_at(rng.random_range(-3.2..3.2), p).b;
        b.iter().all(|slab| (0..3).all(|k| slab[ALPHA][k] == 0.0 && slab[k][ALPHA] == 0.0))
    });
    Line {
        id: 6,
        name: "curvature",
        passed: o.passed && tilt_zero,
        detail: format!("max relative error {:.2e}, tilt slots zero: {tilt_zero}", o.measured),
    }
}

fn symmetry(p: &Params) -> Line {
    let (init, prof) = equivalence_scenario(p);
    let scenario = Scenario { model: ModelKind::Full, initial: init, profile: prof.clone(), duration: 5.0, dt: 1e-3, params: *p };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let shifts: Vec<GroupShift> = (0..20).map(|_| GroupShift::random(&mut rng)).collect();
    let equiv = equivariance_error(&scenario, &shifts).unwrap();
    let mut holo = 0.0f64;
    for model in [ModelKind::Full, ModelKind::Oracle] {
        let t = simulate(model, &init, &prof, 5.0, 1e-3, p).unwrap();
        holo = holo.max(holonomic_deviation(&t, p));
    }
    Line {
        id: 7,
        name: "symmetry",
        passed: equiv <= 1e-9 && holo <= 1e-12,
        detail: format!("equivariance {equiv:.2e} over 20 shifts, holonomic relation {holo:.2e}"),
    }
}

fn equilibria(p: &Params) -> Line {
    let rest = Initial::Full(FullState::default());
    let mut rest_dev = 0.0f64;
    for model in [ModelKind::Full, ModelKind::Reduced, ModelKind::Oracle] {
        let t = simulate(model, &rest, &TorqueProfile::zero(), 10.0, 1e-3, p).unwrap();
        for s in t.full_states(p) {
            for v in s.q().iter().chain(s.q_dot().iter()) {
                rest_dev = rest_dev.max(v.abs());
            }
        }
    }
    // Steady turn: forward speed r·p₁/h, yaw rate p₂/f(0), centre at (0, R).
    let (p1, p2) = (0.5 * h_const(p), 0.8 * f_of_alpha(0.0, p));
    let radius = (p.r * p1 / h_const(p)) / (p2 / f_of_alpha(0.0, p));
    let turn = Initial::Reduced(ReducedState { p1, p2, ..Default::default() });
    // The turn is an unstable relative equilibrium. The reduced equations keep
    // α = 0 exactly; in the full model roundoff seeds the tilt mode, which
    // e-folds roughly every 0.11 s, so it is followed for 3 s.
    let mut circle_dev = 0.0f64;
    for (model, horizon) in [(ModelKind::Reduced, 10.0), (ModelKind::Full, 3.0)] {
        let t = simulate(model, &turn, &TorqueProfile::zero(), horizon, 1e-3, p).unwrap();
        for s in t.reduced_states(p) {
            circle_dev = circle_dev.max((s.x.hypot(s.y - radius) - radius).abs());
        }
    }
    Line {
        id: 8,
        name: "equilibria",
        passed: rest_dev <= 1e-12 && circle_dev <= 1e-6,
        detail: format!("rest deviation {rest_dev:.2e}, circle deviation {circle_dev:.2e} (R = {radius:.4} m)"),
    }
}

fn discrepancy_ledger() -> Line {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/derivation.md");
    let text = std::fs::read_to_string(path).unwrap_or_default();
    let required = ["rolling convention", "a₁", "a₂", "a₃", "gravity", "shape mass", "evidence"];
    let missing: Vec<&str> = required.iter().copied().filter(|k| !text.to_lowercase().contains(&k.to_lowercase())).collect();
    Line {
        id: 9,
        name: "discrepancy ledger",
        passed: !text.is_empty() && missing.is_empty(),
        detail: if missing.is_empty() { "docs/derivation.md lists every delta".into() } else { format!("missing: {missing:?}") },
    }
}

fn main() {
    let p = Params::default();
    let lines = [
        model_equivalence(&p),
        oracle_agreement(&p),
        energy_conservation(&p),
        momentum_closed_forms(&p),
        momentum_dynamics(&p),
        curvature(&p),
        symmetry(&p),
        equilibria(&p),
        discrepancy_ledger(),
    ];
    for l in &lines {
        println!("criterion {} {:<22} {}  {}", l.id, l.name, if l.passed { "PASS" } else { "FAIL" }, l.detail);
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
