//! Acceptance report: one PASS/FAIL line per criterion with the measured
//! quantities. Runs without the libtest harness so the lines always print.
//!
//! The process exits nonzero when any check fails unexpectedly. The literal
//! check 8a is known to fail (its exponent contradicts the limit it is meant
//! to exhibit) and is reported as FAIL; it is held to that outcome strictly,
//! so the run also fails if it ever starts passing.

use std::time::{Duration, Instant};

use stein_pearson::bounds::{asymptotic_tail_constant, phi_envelope};
use stein_pearson::chaos::{
    default_dominance_grid, dominance_margin, expected_g, ibp_check, law_of_polynomial, malliavin_g, HermiteSeries,
    Polynomial,
};
use stein_pearson::pearson::{PearsonCoefficients, PearsonLaw};
use stein_pearson::quad::{self, QuadOptions};
use stein_pearson::stein::solve_indicator;
use stein_pearson::verify::{law_slope, mode_grid, run_scenario, Hypothesis, ScenarioSpec, SlopeMode, XModel};

const CANONICAL: [(f64, f64, f64); 5] = [
    (0.0, 0.0, 1.0),
    (0.0, 2.0, 2.0),
    (-0.125, 0.5, 1.5),
    (0.2, 0.4, 0.2),
    (0.25, 0.0, 0.25),
];

/// Checks known to fail; see the module comment.
const EXPECTED_FAILURES: [&str; 1] = ["8a"];

fn law(c: (f64, f64, f64)) -> PearsonLaw {
    PearsonLaw::new(&PearsonCoefficients::new(c.0, c.1, c.2).unwrap()).unwrap()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

struct Report {
    unexpected: Vec<String>,
}

impl Report {
    fn line(&mut self, id: &str, ok: bool, elapsed: Option<Duration>, detail: String) {
        let time = elapsed
            .map(|t| format!(" [{:.2} s]", t.as_secs_f64()))
            .unwrap_or_default();
        println!("criterion {id}: {}{time} {detail}", if ok { "PASS" } else { "FAIL" });
        if ok == EXPECTED_FAILURES.contains(&id) {
            self.unexpected.push(id.to_string());
        }
    }
}

// ρ′/ρ by a five-point stencil on ln ρ. The step is a power of two scaled to
// the distance from the support ends and x is snapped to a multiple of it, so
// every stencil abscissa is exact.
fn log_density_slope_fd(law: &PearsonLaw, x: f64) -> (f64, f64) {
    let (a, b) = law.support();
    let h = (1e-3 * 1f64.min(x - a).min(b - x)).log2().floor().exp2();
    let x = (x / h).round() * h;
    let f = |t: f64| law.log_density(t);
    let d = (f(x - 2.0 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2.0 * h)) / (12.0 * h);
    (x, d)
}

fn criterion_1(rep: &mut Report) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    for c in CANONICAL {
        let l = law(c);
        let grid = linspace(l.quantile(0.99).unwrap(), l.quantile(0.01).unwrap(), 200);
        for x in grid {
            let (x, d) = log_density_slope_fd(&l, x);
            let r = (d + ((2.0 * c.0 + 1.0) * x + c.1) / l.g_star(x)).abs();
            worst = worst.max(r);
        }
    }
    let el = t.elapsed();
    rep.line(
        "1",
        worst < 1e-6 && el.as_secs_f64() < 1.0,
        Some(el),
        format!("max ODE residual {worst:.3e} (< 1e-6)"),
    );
}

fn stein_grid(l: &PearsonLaw) -> Vec<f64> {
    linspace(
        l.quantile(1.0 - 1e-6).unwrap() - 1.0,
        l.quantile(1e-6).unwrap() + 1.0,
        2000,
    )
}

fn thresholds(l: &PearsonLaw) -> [f64; 4] {
    let b = l.b();
    [0.5, 1.0, 2.0, 4f64.min(b - 1e-6)]
}

fn criterion_2(rep: &mut Report) {
    let t = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for (i, c) in CANONICAL.iter().enumerate() {
        let l = law(*c);
        let grid = stein_grid(&l);
        let tol = if i == 4 { 1e-7 } else { 1e-8 };
        let worst = thresholds(&l)
            .iter()
            .map(|&z| solve_indicator(&l, z).unwrap().check_residual(&grid))
            .fold(0.0, f64::max);
        ok &= worst < tol;
        detail.push(format!("case {}: {worst:.2e}", i + 1));
    }
    let el = t.elapsed();
    rep.line(
        "2",
        ok && el.as_secs_f64() < 5.0,
        Some(el),
        format!("max residual {}", detail.join(", ")),
    );
}

fn criterion_3(rep: &mut Report) {
    let t = Instant::now();
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for c in CANONICAL {
        let l = law(c);
        let grid = stein_grid(&l);
        for z in thresholds(&l) {
            let cert = solve_indicator(&l, z).unwrap().certify_fprime(&grid);
            violations += cert.sign_violations;
            min_margin = min_margin.min(cert.min_left).min(cert.min_right).min(cert.min_uniform);
        }
    }
    let el = t.elapsed();
    rep.line(
        "3",
        violations == 0 && min_margin >= 0.0 && el.as_secs_f64() < 10.0,
        Some(el),
        format!("sign violations {violations}, min bound margin {min_margin:.3e}"),
    );
}

// Φ∗(x) for x ≥ 0 and 1 − Φ∗(x) for x < 0 by quadrature of the density.
// Ranges ending at a finite support end use a squared map there, which
// absorbs density singularities up to order d^(-1/2). The density is a
// function of x, so offsets d from a support end below one ulp d0 of the end
// are unresolvable; that piece is taken as 2 d0 ρ(end ± d0), exact for a
// d^(-1/2) singularity.
fn tail_by_quadrature(l: &PearsonLaw, x: f64) -> f64 {
    let (a, b) = l.support();
    let opts = QuadOptions::default()
        .with_tol(1e-300, 1e-10)
        .with_scale(l.variance().sqrt());
    let near_end = |end: f64, sign: f64, len: f64| {
        let d0 = if sign > 0.0 {
            end.next_up() - end
        } else {
            end - end.next_down()
        };
        let rho = |d: f64| if d < d0 { 0.0 } else { l.density(end + sign * d) };
        // The cut at d0 is a jump the adaptive scheme cannot resolve below
        // rounding, so the estimate is accepted on its own error bound.
        let est = quad::integrate_left_power(rho, len, 0.5, opts);
        assert!(est.error <= 1e-7 * est.value, "{est:?}");
        est.value + 2.0 * d0 * l.density(end + sign * d0)
    };
    if x >= 0.0 {
        if b.is_finite() {
            near_end(b, -1.0, b - x)
        } else {
            quad::integrate(|t| l.density(t), x, b, opts).ok().unwrap()
        }
    } else if a.is_finite() {
        near_end(a, 1.0, x - a)
    } else {
        quad::integrate(|t| l.density(t), a, x, opts).ok().unwrap()
    }
}

fn criterion_4(rep: &mut Report) {
    let t = Instant::now();
    let mut min_margin = f64::INFINITY;
    for c in CANONICAL {
        let l = law(c);
        let grid = linspace(l.quantile(1.0 - 1e-3).unwrap(), l.quantile(1e-4).unwrap(), 50);
        for x in grid {
            let e = phi_envelope(&l, x).unwrap();
            let v = tail_by_quadrature(&l, x);
            min_margin = min_margin.min(v - e.lower).min(e.upper - v);
        }
    }
    let e = phi_envelope(&law(CANONICAL[0]), 2.0).unwrap();
    let exact = (e.lower - 0.021596).abs() < 1e-6 && (e.upper - 0.026995).abs() < 1e-6;
    let phi2 = tail_by_quadrature(&law(CANONICAL[0]), 2.0);
    let el = t.elapsed();
    rep.line(
        "4",
        min_margin >= 0.0 && exact && (phi2 - 0.022750).abs() < 1e-6,
        Some(el),
        format!(
            "min bracket margin {min_margin:.3e}; normal z=2: [{:.6}, {:.6}] around {phi2:.6}",
            e.lower, e.upper
        ),
    );
}

fn criterion_5(rep: &mut Report) {
    let t = Instant::now();
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for c in CANONICAL {
        let coeffs = PearsonCoefficients::new(c.0, c.1, c.2).unwrap();
        let l = law(c);
        for m in 0..=6u32 {
            if !coeffs.moment_exists(m) {
                continue;
            }
            let rec = coeffs.moment(m).unwrap();
            let q = l.expect(|x| x.powi(m as i32)).unwrap();
            worst = worst.max((rec - q).abs() / rec.abs().max(1.0));
            checked += 1;
        }
    }
    let mut sweep_ok = true;
    for alpha in [-0.25, 0.0, 0.2, 0.25, 0.49] {
        let coeffs = PearsonCoefficients::new(alpha, 0.0, 1.0).unwrap();
        for m in 0..=12u32 {
            let expected = alpha <= 0.0 || (m as f64) < 1.0 + 1.0 / alpha;
            sweep_ok &= coeffs.moment_exists(m) == expected;
        }
    }
    let el = t.elapsed();
    rep.line(
        "5",
        worst < 1e-6 && sweep_ok,
        Some(el),
        format!(
            "{checked} moments, max relative error {worst:.3e}; existence sweep matches m < 1 + 1/alpha: {sweep_ok}"
        ),
    );
}

fn criterion_6(rep: &mut Report) {
    let t = Instant::now();
    let h2 = HermiteSeries::single(2, 1.0).unwrap();
    let g_ok = malliavin_g(&h2) == Polynomial::new(vec![0.0, 0.0, 2.0]);
    let chaos = law_of_polynomial(&h2);
    let gamma = law((0.0, 2.0, 2.0));
    let (mut tail_diff, mut dens_diff): (f64, f64) = (0.0, 0.0);
    for x in linspace(-0.999, 40.0, 2000) {
        tail_diff = tail_diff.max((chaos.tail(x) - gamma.tail(x)).abs());
        dens_diff = dens_diff.max((chaos.density(x) - gamma.density(x)).abs());
    }
    let dom = dominance_margin(
        &h2,
        &PearsonCoefficients::new(0.0, 2.0, 2.0).unwrap(),
        &default_dominance_grid(),
    )
    .unwrap();
    let dom_ok =
        dom.lower_hypothesis && dom.upper_hypothesis && dom.min_margin.abs() < 1e-14 && dom.max_margin.abs() < 1e-14;
    let ibp = [
        Polynomial::x(),
        Polynomial::new(vec![0.0, 0.0, 1.0]),
        Polynomial::new(vec![0.0, 0.0, 0.0, 1.0]),
    ]
    .iter()
    .map(|m| ibp_check(&h2, m).abs())
    .fold(0.0, f64::max);
    let eg = expected_g(&h2);
    let var_ok = (eg - 2.0).abs() < 1e-12 && (h2.variance() - 2.0).abs() < 1e-15;
    let el = t.elapsed();
    rep.line(
        "6",
        g_ok && tail_diff < 1e-10 && dens_diff < 1e-9 && dom_ok && ibp < 1e-10 && var_ok && el.as_secs_f64() < 5.0,
        Some(el),
        format!(
            "G = {}; tail sup-diff {tail_diff:.2e}, density sup-diff {dens_diff:.2e}; margin in [{:.1e}, {:.1e}]; ibp {ibp:.2e}; E[G] = {eg}",
            malliavin_g(&h2),
            dom.min_margin,
            dom.max_margin
        ),
    );
}

fn scenario_7() -> ScenarioSpec {
    ScenarioSpec {
        x_model: XModel::Hermite(HermiteSeries::single(2, 1.0).unwrap()),
        reference: PearsonCoefficients::new(0.0, 2.0, 2.0).unwrap(),
        upper_reference: None,
        hypothesis: Hypothesis::Sandwich,
        z_grid: vec![1.0, 2.0, 3.0, 5.0, 8.0],
        n_samples: 1_000_000,
        seed: 20240601,
        confidence: 0.99,
        c: 4.0,
        k: None,
    }
}

fn criterion_7(rep: &mut Report) -> String {
    let t = Instant::now();
    let r = run_scenario(&scenario_7()).unwrap();
    let el = t.elapsed();
    let all_pass = r.verdicts.iter().all(|v| v.as_str() == "pass");
    let in_band = (0..r.len()).all(|i| (r.empirical[i] - r.phi_star[i]).abs() <= r.ci[i]);
    let worst = (0..r.len())
        .map(|i| (r.empirical[i] - r.phi_star[i]).abs() / r.ci[i])
        .fold(0.0, f64::max);
    rep.line(
        "7",
        all_pass && in_band && el.as_secs_f64() < 30.0,
        Some(el),
        format!(
            "verdicts [{}]; max |empirical - Phi*| / DKW = {worst:.3}",
            r.verdicts.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(", ")
        ),
    );
    r.to_csv()
}

fn criterion_8(rep: &mut Report) {
    let gamma = law((0.0, 2.0, 2.0));
    let z = 60.0f64;
    let target = 0.48394;
    let literal = (1.5 * z.ln() + z / 2.0 + gamma.tail(z).ln()).exp();
    rep.line(
        "8a",
        (literal / target - 1.0).abs() <= 0.05,
        None,
        format!("literal z^1.5 e^(z/2) Phi*(60) = {literal:.5} vs {target} +/- 5% (exponent should be 1 - r = 0.5)"),
    );
    let corrected = (0.5 * z.ln() + z / 2.0 + gamma.tail(z).ln()).exp();
    let (k_gamma, _) = asymptotic_tail_constant(&gamma).unwrap();
    rep.line(
        "8b",
        (corrected / target - 1.0).abs() <= 0.05 && (k_gamma - target).abs() < 1e-5,
        None,
        format!("z^0.5 e^(z/2) Phi*(60) = {corrected:.5}, K = {k_gamma:.8} vs {target} +/- 5%"),
    );
    let c5 = law((0.25, 0.0, 0.25));
    let (k, factor) = asymptotic_tail_constant(&c5).unwrap();
    let v = (5.0 * 50f64.ln() + c5.tail(50.0).ln()).exp();
    rep.line(
        "8c",
        v >= factor * k * 0.95 && v <= k * 1.05 && (factor - 2.0 / 3.0).abs() < 1e-15,
        None,
        format!(
            "case 5: z^5 Phi*(50) = {v:.5} in [{:.5}, {:.5}] (K = {k:.5}, widened 5%)",
            factor * k * 0.95,
            k * 1.05
        ),
    );
}

fn criterion_9(rep: &mut Report) {
    let c5 = law((0.25, 0.0, 0.25));
    let g = law((0.0, 2.0, 2.0));
    let s1 = law_slope(&c5, &mode_grid(20.0, 200.0, 50, SlopeMode::LogLog), SlopeMode::LogLog).unwrap();
    let s2 = law_slope(
        &g,
        &mode_grid(20.0, 200.0, 50, SlopeMode::LogLinear),
        SlopeMode::LogLinear,
    )
    .unwrap();
    rep.line(
        "9",
        (s1 + 5.0).abs() <= 0.1 && (s2 + 0.5).abs() <= 0.01,
        None,
        format!("LogLog slope {s1:.4} (-5 +/- 0.1), LogLinear slope {s2:.4} (-0.5 +/- 0.01)"),
    );
}

fn criterion_10(rep: &mut Report, first: &str) {
    let t = Instant::now();
    let spec = scenario_7();
    let mut runs = Vec::new();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let r = pool.install(|| run_scenario(&spec).unwrap());
        runs.push((r.to_csv(), r.to_json().to_string()));
    }
    let same = runs.iter().all(|(csv, _)| csv == first) && runs[0].1 == runs[1].1;
    let el = t.elapsed();
    rep.line(
        "10",
        same,
        Some(el),
        format!("3 runs (default pool, 1 thread, 4 threads) byte-identical: {same}"),
    );
}

fn main() {
    let mut rep = Report { unexpected: Vec::new() };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criterion_3(&mut rep);
    criterion_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    let csv7 = criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    criterion_10(&mut rep, &csv7);
    if rep.unexpected.is_empty() {
        println!(
            "acceptance: all outcomes as expected (known failure: {})",
            EXPECTED_FAILURES.join(", ")
        );
    } else {
        println!("acceptance: unexpected outcome for {}", rep.unexpected.join(", "));
        std::process::exit(1);
    }
}
