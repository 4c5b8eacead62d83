use std::path::{Path, PathBuf};

use tempfile::TempDir;
use wip_dynamics::cli::{
    cmd_check, cmd_compare, cmd_simulate, CSV_HEADER, EXIT_CONFIG, EXIT_OK, EXIT_TOLERANCE,
};

const PARAMS: &str = r#""params": {"m_b": 5.0, "m_W": 0.5, "b": 0.2, "r": 0.1, "d": 0.4, "I_Bxx": 0.1,
    "I_Byy": 0.07, "I_Bz": 0.04, "I_Wyy": 0.0025, "I_Wzz": 0.00125, "g": 9.81}"#;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn simulate(config: &Path) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = cmd_simulate(config, None, None, false, &mut out, &mut err);
    Run { code, out: String::from_utf8(out).unwrap(), err: String::from_utf8(err).unwrap() }
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

#[test]
fn csv_has_header_and_one_row_per_sample() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &format!(r#"{{{PARAMS}, "initial": {{"full": {{}}}}, "sim": {{"T": 0.1, "dt": 0.01}}}}"#));
    let run = simulate(&cfg);
    assert_eq!(run.code, EXIT_OK, "{}", run.err);
    assert_eq!(run.out.lines().next(), Some(CSV_HEADER));
    assert_eq!(run.out.lines().count(), 12);
    assert!(!run.out.contains('\r'));
}

#[test]
fn equilibrium_stays_at_rest_for_every_model() {
    for model in ["full", "reduced", "oracle"] {
        let dir = TempDir::new().unwrap();
        let cfg = write(
            &dir,
            "c.json",
            &format!(r#"{{{PARAMS}, "initial": {{"full": {{}}}}, "sim": {{"T": 2.0, "dt": 0.01, "model": "{model}"}}}}"#),
        );
        let run = simulate(&cfg);
        assert_eq!(run.code, EXIT_OK);
        for name in ["x", "y", "theta", "alpha", "phi", "alpha_dot", "p1", "p2"] {
            assert!(column(&run.out, name).iter().all(|v| *v == 0.0), "{model}: {name} moved");
        }
    }
}

#[test]
fn steady_roll_covers_r_times_t() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("roll.csv");
    let (mut so, mut se) = (Vec::new(), Vec::new());
    let code = cmd_simulate(&scenario("steady_roll.json"), None, Some(&out), true, &mut so, &mut se);
    assert_eq!(code, EXIT_OK);
    assert!(so.is_empty(), "quiet prints nothing");
    let csv = std::fs::read_to_string(out).unwrap();
    let x = column(&csv, "x");
    // p1 = 0.065 = h gives unit wheel rate, so x = r T = 0.5.
    assert!((x.last().unwrap() - 0.5).abs() < 1e-12);
    assert!(column(&csv, "y").iter().all(|v| v.abs() < 1e-15));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = simulate(&scenario("default.json"));
    let b = simulate(&scenario("default.json"));
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.out, b.out);
}

#[test]
fn model_flag_overrides_config() {
    let (mut so, mut se) = (Vec::new(), Vec::new());
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("o.csv");
    let code = cmd_simulate(
        &scenario("steady_roll.json"),
        Some(wip_dynamics::ModelKind::Oracle),
        Some(&out),
        false,
        &mut so,
        &mut se,
    );
    assert_eq!(code, EXIT_OK);
    assert!(String::from_utf8(so).unwrap().starts_with("oracle model"));
}

#[test]
fn missing_parameter_is_named() {
    let dir = TempDir::new().unwrap();
    let params = PARAMS.replace(r#""g": 9.81"#, r#""extra": 1.0"#).replace(r#", "extra": 1.0"#, "");
    let cfg = write(&dir, "c.json", &format!(r#"{{{params}, "initial": {{"full": {{}}}}, "sim": {{"T": 1.0, "dt": 0.01}}}}"#));
    let run = simulate(&cfg);
    assert_eq!(run.code, EXIT_CONFIG);
    assert!(run.err.contains("`g`"), "{}", run.err);
}

#[test]
fn nonphysical_parameters_are_rejected() {
    let dir = TempDir::new().unwrap();
    for (from, to, field) in [(r#""I_Wyy": 0.0025"#, r#""I_Wyy": 0.0"#, "I_Wyy"), (r#""m_b": 5.0"#, r#""m_b": -1.0"#, "m_b")] {
        let cfg = write(
            &dir,
            "c.json",
            &format!(r#"{{{}, "initial": {{"full": {{}}}}, "sim": {{"T": 1.0, "dt": 0.01}}}}"#, PARAMS.replace(from, to)),
        );
        let run = simulate(&cfg);
        assert_eq!(run.code, EXIT_CONFIG);
        assert!(run.err.contains(field), "{}", run.err);
    }
}

#[test]
fn corrupted_and_missing_files_exit_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", "{\"params\": {");
    assert_eq!(simulate(&cfg).code, EXIT_CONFIG);
    assert_eq!(simulate(&dir.path().join("absent.json")).code, EXIT_CONFIG);
}

#[test]
fn bad_step_exits_2() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.json", &format!(r#"{{{PARAMS}, "initial": {{"full": {{}}}}, "sim": {{"T": 1.0, "dt": 0.0}}}}"#));
    assert_eq!(simulate(&cfg).code, EXIT_CONFIG);
}

#[test]
fn compare_default_scenario_passes() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("report.txt");
    let (mut so, mut se) = (Vec::new(), Vec::new());
    let code = cmd_compare(&scenario("default.json"), Some(&report), false, &mut so, &mut se);
    assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&so));
    let kv = std::fs::read_to_string(report).unwrap();
    assert!(kv.contains("passed=true"));
    assert!(kv.contains("full-vs-oracle"));
}

#[test]
fn compare_with_zero_tolerance_exits_4() {
    let dir = TempDir::new().unwrap();
    let text = std::fs::read_to_string(scenario("default.json")).unwrap();
    let cfg = write(&dir, "c.json", &text.replace(r#""max_abs_error": 1e-4"#, r#""max_abs_error": 0.0"#).replace(r#""T": 5.0"#, r#""T": 0.5"#));
    let (mut so, mut se) = (Vec::new(), Vec::new());
    assert_eq!(cmd_compare(&cfg, None, false, &mut so, &mut se), EXIT_TOLERANCE);
    assert!(String::from_utf8(so).unwrap().contains("FAIL"));
}

#[test]
fn check_default_scenario_passes() {
    let dir = TempDir::new().unwrap();
    let report = dir.path().join("checks.txt");
    let (mut so, mut se) = (Vec::new(), Vec::new());
    let code = cmd_check(&scenario("default.json"), Some(&report), true, &mut so, &mut se);
    assert_eq!(code, EXIT_OK, "{}", String::from_utf8_lossy(&se));
    assert_eq!(std::fs::read_to_string(report).unwrap().lines().filter(|l| l.contains("passed=true")).count(), 6);
}
