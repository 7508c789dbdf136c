//! Solve the Stein equation for h = 1{x ≤ z} and certify the bounds on f′.

use stein_pearson::pearson::{PearsonCoefficients, PearsonLaw};
use stein_pearson::stein::solve_indicator;

fn main() -> stein_pearson::Result<()> {
    let law = PearsonLaw::new(&PearsonCoefficients::new(0.0, 0.0, 1.0)?)?;
    let sol = solve_indicator(&law, 2.0)?;
    println!("normal, z = 2: f(2) = {:.10}, E h = {:.10}", sol.f(2.0), sol.eh());

    let grid: Vec<f64> = (0..2000).map(|i| -6.0 + 12.0 * i as f64 / 1999.0).collect();
    for (coeffs, z) in [((0.0, 2.0, 2.0), 1.0), ((0.25, 0.0, 0.25), 0.5)] {
        let law = PearsonLaw::new(&PearsonCoefficients::new(coeffs.0, coeffs.1, coeffs.2)?)?;
        let cert = solve_indicator(&law, z)?.certify_fprime(&grid);
        println!(
            "{} z = {z}: residual {:.2e}, sign violations {}, margins ({:.4}, {:.4}, {:.4}), passed {}",
            law.case().name(),
            cert.residual_max,
            cert.sign_violations,
            cert.min_left,
            cert.min_right,
            cert.min_uniform,
            cert.passed
        );
    }
    Ok(())
}
