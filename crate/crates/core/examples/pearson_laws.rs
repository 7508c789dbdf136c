//! Classify the five Pearson cases and tabulate a few law evaluators.

use stein_pearson::pearson::{PearsonCoefficients, PearsonLaw};

fn main() -> stein_pearson::Result<()> {
    let laws = [
        (0.0, 0.0, 1.0),
        (0.0, 2.0, 2.0),
        (-0.125, 0.5, 1.5),
        (0.2, 0.4, 0.2),
        (0.25, 0.0, 0.25),
    ];
    println!(
        "{:<18} {:>8} {:>8} {:>10} {:>12} {:>12}",
        "case", "a", "b", "variance", "tail(1)", "q(1e-3)"
    );
    for (a, b, g) in laws {
        let law = PearsonLaw::new(&PearsonCoefficients::new(a, b, g)?)?;
        let (lo, hi) = law.support();
        println!(
            "{:<18} {:>8.3} {:>8.3} {:>10.5} {:>12.6e} {:>12.6}",
            law.case().name(),
            lo,
            hi,
            law.variance(),
            law.tail(1.0),
            law.quantile(1e-3)?
        );
    }

    // moments exist only below order 1 + 1/α
    let c = PearsonCoefficients::new(0.25, 0.0, 0.25)?;
    for m in 0..=5 {
        match c.moment(m) {
            Ok(v) => println!("E[Z^{m}] = {v}"),
            Err(e) => println!("E[Z^{m}]: {e}"),
        }
    }
    Ok(())
}
