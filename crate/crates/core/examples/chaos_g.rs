//! G = ⟨DX, −DL⁻¹X⟩ for Hermite series, the exact law of X and the
//! dominance margin of G against a Pearson kernel.

use stein_pearson::chaos::{
    default_dominance_grid, dominance_margin, g_function, ibp_check, law_of_polynomial, malliavin_g, HermiteSeries,
    Polynomial,
};
use stein_pearson::pearson::PearsonCoefficients;

fn main() -> stein_pearson::Result<()> {
    for coeffs in [
        vec![0.0, 1.0],
        vec![0.0, 0.0, 1.0],
        vec![0.0, 0.0, 0.0, 1.0],
        vec![0.0, 1.0, 0.25],
    ] {
        let x = HermiteSeries::new(coeffs.clone())?;
        println!(
            "X = {}  G = {}  Var X = {}",
            x.polynomial(),
            malliavin_g(&x),
            x.variance()
        );
    }

    let h2 = HermiteSeries::single(2, 1.0)?;
    let law = law_of_polynomial(&h2);
    for x in [-0.5, 0.0, 1.0, 4.0] {
        let g = g_function(&h2, x)?;
        println!(
            "H2: x = {x:>4}  density {:.6}  tail {:.6}  g {:.6}",
            law.density(x),
            law.tail(x),
            g.by_branches
        );
    }

    let grid = default_dominance_grid();
    for (a, b, c) in [(0.0, 2.0, 2.0), (0.0, 2.0, 1.0), (0.0, 2.0, 3.0)] {
        let r = dominance_margin(&h2, &PearsonCoefficients::new(a, b, c)?, &grid)?;
        println!(
            "H2 vs ({a}, {b}, {c}): margin in [{:.3e}, {:.3e}], G >= g*(X): {}, G <= g*(X): {}",
            r.min_margin, r.max_margin, r.lower_hypothesis, r.upper_hypothesis
        );
    }
    println!(
        "E[X m(X)] - E[m'(X) G] for m = x^3: {:.2e}",
        ibp_check(&h2, &Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]))
    );
    Ok(())
}
