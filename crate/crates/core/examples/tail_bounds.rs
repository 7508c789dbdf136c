//! Tail envelope and the explicit lower / K·Φ∗ upper bounds.

use stein_pearson::bounds::{bounds_report, phi_envelope};
use stein_pearson::pearson::{PearsonCoefficients, PearsonLaw};

fn main() -> stein_pearson::Result<()> {
    let normal = PearsonLaw::new(&PearsonCoefficients::new(0.0, 0.0, 1.0)?)?;
    let e = phi_envelope(&normal, 2.0)?;
    println!(
        "normal tail at 2: {:.6} <= {:.6} <= {:.6}",
        e.lower,
        normal.tail(2.0),
        e.upper
    );

    let case4 = PearsonLaw::new(&PearsonCoefficients::new(0.2, 0.4, 0.2)?)?;
    let z: Vec<f64> = vec![0.5, 1.0, 2.0, 5.0, 10.0, 20.0];
    print!("{}", bounds_report(&case4, &z, 4.0, None)?.to_csv());
    Ok(())
}
