use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stein-pearson"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scenario() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples/h2_gamma.json")
        .display()
        .to_string()
}

#[test]
fn classify_prints_case_name() {
    let o = bin(&["classify", "--alpha", "0", "--beta", "0", "--gamma", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "Normal");
    let o = bin(&["classify", "--alpha", "0", "--beta", "2", "--gamma", "2"]);
    assert_eq!(stdout(&o).trim(), "Gamma");
}

#[test]
fn chaos_g_of_a_gaussian_is_its_variance() {
    let o = bin(&["chaos-g", "--coeffs", "0,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1");
    let o = bin(&["chaos-g", "--coeffs", "0,0,1"]);
    assert_eq!(stdout(&o).trim(), "2*N^2");
}

#[test]
fn verify_scenario_passes_with_csv_report() {
    let o = bin(&["verify", "--scenario", &scenario()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("z,phi_star,lower,upper,empirical,ci,verdict"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.ends_with(",pass")));
}

#[test]
fn verify_is_reproducible_per_seed() {
    let a = bin(&["verify", "--scenario", &scenario(), "--seed", "7"]);
    let b = bin(&["verify", "--scenario", &scenario(), "--seed", "7"]);
    let c = bin(&["verify", "--scenario", &scenario(), "--seed", "8"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn failed_verdict_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // certified equality scenario, but K = 0.5 puts the upper bound below Φ∗;
    // the grid lies past z_min = 14 where the upper check is asserted
    let spec = r#"{"x_model":{"hermite":[0,0,1]},"reference":{"alpha":0,"beta":2,"gamma":2},
        "hypothesis":"sandwich","K":0.5,"z_grid":[15,20],"n_samples":10000,"seed":1}"#;
    std::fs::write(&path, spec).unwrap();
    let o = bin(&["verify", "--scenario", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("fail"));
}

#[test]
fn usage_and_evaluation_errors_exit_one_with_one_line() {
    for args in [
        &["tail", "--at", "1"][..],
        &["bogus"][..],
        &["classify", "--alpha", "0", "--beta", "0", "--gamma", "-1"][..],
        &["verify", "--scenario", "/nonexistent/scenario.json"][..],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 1, "{args:?}");
    }
}

#[test]
fn law_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("law.json");
    let path = path.to_str().unwrap();
    let o = bin(&["law", "--alpha", "0", "--beta", "2", "--gamma", "2", "--output", path]);
    assert!(o.status.success() && o.stdout.is_empty());
    let from_file = bin(&["tail", "--law-file", path, "--grid", "-0.5:5:12"]);
    let direct = bin(&[
        "tail",
        "--alpha",
        "0",
        "--beta",
        "2",
        "--gamma",
        "2",
        "--grid",
        "-0.5:5:12",
    ]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, direct.stdout);
}

#[test]
fn json_output_parses() {
    let o = bin(&[
        "--format", "json", "tail", "--alpha", "0", "--beta", "0", "--gamma", "1", "--at", "2",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v[0]["tail"].as_f64().unwrap() - 0.022750131948179).abs() < 1e-12);
}
