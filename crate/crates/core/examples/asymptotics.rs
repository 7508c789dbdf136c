//! Asymptotic tail constants and slope fits on exact tails.

use stein_pearson::bounds::{asymptotic_tail_constant, scaled_tail};
use stein_pearson::pearson::{PearsonCoefficients, PearsonLaw};
use stein_pearson::verify::{law_slope, mode_grid, slope_target, SlopeMode};

fn main() -> stein_pearson::Result<()> {
    for (a, b, g, z) in [(0.0, 2.0, 2.0, 60.0), (0.25, 0.0, 0.25, 50.0), (0.2, 0.4, 0.2, 200.0)] {
        let law = PearsonLaw::new(&PearsonCoefficients::new(a, b, g)?)?;
        let (k, factor) = asymptotic_tail_constant(&law)?;
        println!(
            "{}: K = {k:.6}, liminf factor {factor:.4}, scaled tail at z = {z}: {:.6}",
            law.case().name(),
            scaled_tail(&law, z)?
        );
    }

    let cases = [
        ((0.25, 0.0, 0.25), SlopeMode::LogLog, 20.0, 200.0),
        ((0.0, 2.0, 2.0), SlopeMode::LogLinear, 20.0, 200.0),
        ((0.0, 0.0, 1.0), SlopeMode::Stretched(0.0), 3.0, 30.0),
    ];
    for ((a, b, g), mode, lo, hi) in cases {
        let c = PearsonCoefficients::new(a, b, g)?;
        let slope = law_slope(&PearsonLaw::new(&c)?, &mode_grid(lo, hi, 50, mode), mode)?;
        println!(
            "{mode:?} on [{lo}, {hi}]: slope {slope:.4}, target {:?}",
            slope_target(&c, mode)
        );
    }
    Ok(())
}
