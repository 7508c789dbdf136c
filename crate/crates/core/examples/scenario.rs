//! Run a scenario file (default: the H₂ / Gamma equality scenario).

use stein_pearson::verify::{run_scenario, ScenarioSpec};

fn main() -> stein_pearson::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/h2_gamma.json").to_string());
    let text = std::fs::read_to_string(&path).expect("readable scenario file");
    let report = run_scenario(&ScenarioSpec::from_json_str(&text)?)?;
    print!("{}", report.to_csv());
    println!("passed: {}", report.passed());
    Ok(())
}
