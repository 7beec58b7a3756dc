use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_riccati-qlm")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn solve_harmonic_ground_state() {
    let out = run(&["solve", "--potential", "harmonic", "--n", "0", "--p", "3", "--digits", "24"]);
    let v = json(&out);
    assert_eq!(v["schema"], "riccati-qlm/1");
    assert_eq!(v["model"]["id"], "harmonic");
    let e: f64 = v["energy"].as_str().unwrap().parse().unwrap();
    assert!((e - 1.0).abs() < 1e-12, "{e}");
    assert_eq!(v["energies"]["qlm"].as_object().unwrap().len(), 3);
}

#[test]
fn wkb_quartic_prints_langer_level() {
    let v = json(&run(&["wkb", "--potential", "quartic", "--digits", "20"]));
    assert!(v["energies"]["wkb"].as_str().unwrap().starts_with("2.32662"));
}

#[test]
fn series_follows_doubling_law() {
    let v = json(&run(&["series", "--potential", "harmonic", "--p", "3"]));
    let m: Vec<u64> =
        v["diagnostics"]["reports"].as_array().unwrap().iter().map(|r| r["exact_matches"].as_u64().unwrap()).collect();
    assert_eq!(m, vec![2, 4, 8]);
}

#[test]
fn csv_output_has_header() {
    let out = run(&["solve", "--potential", "coulomb", "--p", "2", "--digits", "20", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() >= 2);
    assert!(text.lines().next().unwrap().contains("energy"));
}

#[test]
fn config_errors_exit_with_one() {
    for args in [
        &["solve", "--potential", "nope"][..],
        &["solve", "--potential", "harmonic", "--digits", "8"],
        &["solve", "--potential", "hulthen", "--params", "A"],
        &["solve", "--potential", "harmonic", "--guess", "ik"],
        &["wavefunction", "--potential", "harmonic", "--format", "json"],
        &["solve", "--config", "/nonexistent/cfg.json"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn missing_bound_state_is_numerical() {
    // A = 4 holds a single s-wave level.
    let out = run(&["solve", "--potential", "hulthen", "--params", "A=4,a=1", "--n", "3", "--p", "1"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn config_file_is_read() {
    let dir = std::env::temp_dir().join(format!("rqlm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.json");
    let dest = dir.join("out.json");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"potential": {{"id": "harmonic"}}, "n": 1, "p": 2, "digits": 20,
               "output": {{"format": "json", "path": {:?}}}}}"#,
            dest.to_str().unwrap()
        ),
    )
    .unwrap();
    let out = run(&["solve", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    let e: f64 = v["energy"].as_str().unwrap().parse().unwrap();
    assert!((e - 3.0).abs() < 1e-3, "{e}");
    std::fs::remove_dir_all(&dir).ok();
}
