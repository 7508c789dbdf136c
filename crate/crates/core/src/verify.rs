//! Monte Carlo and exact-tail harness: scenario runs producing tail reports,
//! and slope fits on exact tails.

use serde::{Deserialize, Serialize};

use crate::bounds::{implicit_lower_bound, pearson_lower, pearson_upper_constant, z_min, TailReport, Verdict};
use crate::chaos::{default_dominance_grid, dominance_margin, law_of_polynomial, HermiteSeries, PolynomialLaw};
use crate::error::{Error, Result};
use crate::pearson::{PearsonCoefficients, PearsonLaw};

/// Below this many exceedances the empirical tail is replaced by the exact one.
pub const DEEP_TAIL_COUNT: usize = 100;

/// Smallest admissible sample size.
pub const MIN_SAMPLES: usize = 10_000;

/// Half-width √(ln(2/(1−confidence))/(2n)) of the uniform DKW band.
pub fn dkw_half_width(n: usize, confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidProbability(confidence));
    }
    if n == 0 {
        return Err(Error::InvalidScenario("no samples".into()));
    }
    Ok(((2.0 / (1.0 - confidence)).ln() / (2.0 * n as f64)).sqrt())
}

/// Fraction of samples strictly above each grid point, plus the DKW
/// half-width. `samples` need not be sorted.
pub fn empirical_tail(samples: &[f64], z_grid: &[f64], confidence: f64) -> Result<(Vec<f64>, f64)> {
    let eps = dkw_half_width(samples.len(), confidence)?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let tails = z_grid.iter().map(|&z| exceedances(&sorted, z) as f64 / n).collect();
    Ok((tails, eps))
}

fn exceedances(sorted: &[f64], z: f64) -> usize {
    sorted.len() - sorted.partition_point(|&s| s <= z)
}

/// Model of X in a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XModel {
    Hermite(HermiteSeries),
    Pearson(PearsonCoefficients),
}

/// Which comparison of G with g∗(X) the scenario asserts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    DominatesLower,
    DominatedUpper,
    Sandwich,
}

impl Hypothesis {
    pub fn lower(self) -> bool {
        matches!(self, Hypothesis::DominatesLower | Hypothesis::Sandwich)
    }

    pub fn upper(self) -> bool {
        matches!(self, Hypothesis::DominatedUpper | Hypothesis::Sandwich)
    }
}

fn default_confidence() -> f64 {
    0.99
}

fn default_c() -> f64 {
    4.0
}

/// A scenario as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub x_model: XModel,
    /// Reference law for the lower comparison (and the upper one when
    /// `upper_reference` is absent).
    pub reference: PearsonCoefficients,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper_reference: Option<PearsonCoefficients>,
    pub hypothesis: Hypothesis,
    pub z_grid: Vec<f64>,
    pub n_samples: usize,
    pub seed: u64,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// Constant of the explicit lower bound, c > 2.
    #[serde(default = "default_c")]
    pub c: f64,
    /// Upper-bound constant; defaults to 1.1·(1−ᾱ)/(1−2ᾱ).
    #[serde(default, rename = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
}

impl ScenarioSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidScenario(e.to_string()))
    }

    pub fn upper_coefficients(&self) -> PearsonCoefficients {
        self.upper_reference.unwrap_or(self.reference)
    }

    /// Checks the grid, sample size and confidence against the reference laws.
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < MIN_SAMPLES {
            return Err(Error::InvalidScenario(format!(
                "n_samples = {} is below {MIN_SAMPLES}",
                self.n_samples
            )));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::InvalidProbability(self.confidence));
        }
        if self.z_grid.is_empty() {
            return Err(Error::InvalidScenario("empty z_grid".into()));
        }
        if self.z_grid.windows(2).any(|w| !(w[1] > w[0])) || self.z_grid.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidScenario(
                "z_grid must be finite and strictly increasing".into(),
            ));
        }
        let mut refs = vec![self.reference];
        if self.hypothesis.upper() {
            refs.push(self.upper_coefficients());
        }
        for c in refs {
            let law = PearsonLaw::new(&c)?;
            if let Some(&z) = self.z_grid.iter().find(|&&z| !law.in_support(z)) {
                return Err(Error::InvalidScenario(format!(
                    "z = {z} outside the reference support ({}, {})",
                    law.a(),
                    law.b()
                )));
            }
        }
        Ok(())
    }
}

/// Exact law of X in either model.
#[derive(Debug, Clone)]
pub enum ExactLaw {
    Chaos(PolynomialLaw),
    Pearson(PearsonLaw),
}

impl ExactLaw {
    pub fn of(model: &XModel) -> Result<Self> {
        Ok(match model {
            XModel::Hermite(s) => ExactLaw::Chaos(law_of_polynomial(s)),
            XModel::Pearson(c) => ExactLaw::Pearson(PearsonLaw::new(c)?),
        })
    }

    pub fn tail(&self, z: f64) -> f64 {
        match self {
            ExactLaw::Chaos(l) => l.tail(z),
            ExactLaw::Pearson(l) => l.tail(z),
        }
    }
}

/// Draws of X for a scenario; identical for identical (model, n, seed).
pub fn sample_model(model: &XModel, n: usize, seed: u64) -> Result<Vec<f64>> {
    Ok(match model {
        XModel::Hermite(s) => s.sample(n, seed),
        XModel::Pearson(c) => PearsonLaw::new(c)?.sample(n, seed),
    })
}

/// Outcome of checking a dominance hypothesis over the whole line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certification {
    /// Essential infimum of g_X(X) − g∗(X), with g_X = G for chaos models.
    pub min_margin: f64,
    pub max_margin: f64,
    pub holds: bool,
}

/// Certifies G ≥ g∗(X) (`lower`) or G ≤ g∗(X) against `reference`.
///
/// For a Pearson model X the role of G is played by its own kernel g_X(X),
/// which equals E[G | X] for any representation; the margin is then
/// piecewise quadratic and its extremes are found exactly.
pub fn certify(model: &XModel, reference: &PearsonCoefficients, lower: bool) -> Result<Certification> {
    let (min_margin, max_margin) = match model {
        XModel::Hermite(s) => {
            let r = dominance_margin(s, reference, &default_dominance_grid())?;
            let holds = if lower { r.lower_hypothesis } else { r.upper_hypothesis };
            return Ok(Certification {
                min_margin: r.min_margin,
                max_margin: r.max_margin,
                holds,
            });
        }
        XModel::Pearson(c) => pearson_margin(c, reference)?,
    };
    let tol = 1e-12 * (1.0 + reference.gamma.abs() + reference.beta.abs() + reference.alpha.abs());
    let holds = if lower { min_margin >= -tol } else { max_margin <= tol };
    Ok(Certification {
        min_margin,
        max_margin,
        holds,
    })
}

// Extremes of g_X(x) − g∗(x) over the support of X, taking one-sided
// limits at the reference support ends.
fn pearson_margin(x: &PearsonCoefficients, reference: &PearsonCoefficients) -> Result<(f64, f64)> {
    let lx = PearsonLaw::new(x)?;
    let lr = PearsonLaw::new(reference)?;
    let (xa, xb) = lx.support();
    let (ra, rb) = lr.support();
    let mut cuts = vec![xa];
    cuts.extend([ra, rb].into_iter().filter(|&c| c > xa && c < xb));
    cuts.push(xb);
    let inside = [
        x.gamma - reference.gamma,
        x.beta - reference.beta,
        x.alpha - reference.alpha,
    ];
    let outside = [x.gamma, x.beta, x.alpha];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for w in cuts.windows(2) {
        let mid = if w[0].is_finite() && w[1].is_finite() {
            0.5 * (w[0] + w[1])
        } else if w[0].is_finite() {
            w[0] + 1.0
        } else if w[1].is_finite() {
            w[1] - 1.0
        } else {
            0.0
        };
        let q = if lr.in_support(mid) { inside } else { outside };
        let (a, b) = quadratic_extremes(q, w[0], w[1]);
        lo = lo.min(a);
        hi = hi.max(b);
    }
    Ok((lo, hi))
}

// Min and max of c0 + c1 x + c2 x² over [lo, hi], with limits at infinite ends.
fn quadratic_extremes(q: [f64; 3], lo: f64, hi: f64) -> (f64, f64) {
    let eval = |x: f64| {
        if x.is_finite() {
            q[0] + q[1] * x + q[2] * x * x
        } else if q[2] != 0.0 {
            q[2].signum() * f64::INFINITY
        } else if q[1] != 0.0 {
            q[1].signum() * x.signum() * f64::INFINITY
        } else {
            q[0]
        }
    };
    let mut pts = vec![eval(lo), eval(hi)];
    if q[2] != 0.0 {
        let v = -q[1] / (2.0 * q[2]);
        if v > lo && v < hi {
            pts.push(eval(v));
        }
    }
    let mn = pts.iter().copied().fold(f64::INFINITY, f64::min);
    let mx = pts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (mn, mx)
}

/// Runs a scenario end to end and returns its tail report.
///
/// Columns: `phi_star` is the reference tail; `lower` the implicit lower
/// bound (raised to the explicit Pearson bound from z_min on); `upper` is
/// K·Φ̄∗ for the upper reference. `empirical` is the sample tail, or the
/// exact tail with `ci` = 0 once fewer than [`DEEP_TAIL_COUNT`] samples
/// exceed z. Checks on large-z corollaries count only from z_min on;
/// below it a failure is reported as inconclusive.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<TailReport> {
    spec.validate()?;
    let lower_on = spec.hypothesis.lower();
    let upper_on = spec.hypothesis.upper();
    let up_coeffs = spec.upper_coefficients();
    if lower_on && !certify(&spec.x_model, &spec.reference, true)?.holds {
        return Err(Error::UncertifiedHypothesis(
            "G >= g*(X) fails somewhere on the line".into(),
        ));
    }
    if upper_on && !certify(&spec.x_model, &up_coeffs, false)?.holds {
        return Err(Error::UncertifiedHypothesis(
            "G <= g*(X) fails somewhere on the line".into(),
        ));
    }
    let reference = PearsonLaw::new(&spec.reference)?;
    let upper_ref = PearsonLaw::new(&up_coeffs)?;
    let k = match spec.k {
        Some(k) if k > 0.0 && k.is_finite() => k,
        Some(k) => return Err(Error::InvalidConstant(format!("K = {k} must be positive"))),
        None => 1.1 * pearson_upper_constant(up_coeffs.alpha)?,
    };
    let exact = ExactLaw::of(&spec.x_model)?;

    let mut samples = sample_model(&spec.x_model, spec.n_samples, spec.seed)?;
    samples.sort_by(f64::total_cmp);
    let eps = dkw_half_width(samples.len(), spec.confidence)?;
    let n = samples.len() as f64;
    let zmin_lower = z_min(&spec.reference);
    let zmin_upper = z_min(&up_coeffs);

    let m = spec.z_grid.len();
    let mut rep = TailReport {
        z: spec.z_grid.clone(),
        phi_star: Vec::with_capacity(m),
        lower: Vec::with_capacity(m),
        upper: Vec::with_capacity(m),
        empirical: Vec::with_capacity(m),
        ci: Vec::with_capacity(m),
        verdicts: Vec::with_capacity(m),
    };
    for &z in &spec.z_grid {
        let count = exceedances(&samples, z);
        let (emp, ci) = if count < DEEP_TAIL_COUNT {
            (exact.tail(z), 0.0)
        } else {
            (count as f64 / n, eps)
        };
        let mut verdict = Verdict::Pass;
        let mut lower = f64::NAN;
        if lower_on {
            if z > 0.0 {
                let implicit = implicit_lower_bound(&reference, |x| exact.tail(x), z)?;
                lower = implicit;
                verdict = verdict.and(check(emp + ci >= implicit));
                let (explicit, _) = pearson_lower(&reference, z, spec.c)?;
                let asserted = z >= zmin_lower;
                if asserted {
                    lower = lower.max(explicit);
                }
                verdict = verdict.and(check(emp + ci >= explicit).soften(asserted));
            } else {
                verdict = verdict.and(Verdict::Inconclusive);
            }
        }
        let mut upper = f64::NAN;
        if upper_on {
            upper = k * upper_ref.tail(z);
            verdict = verdict.and(check(emp - ci <= upper).soften(z >= zmin_upper));
        }
        rep.phi_star.push(reference.tail(z));
        rep.lower.push(lower);
        rep.upper.push(upper);
        rep.empirical.push(emp);
        rep.ci.push(ci);
        rep.verdicts.push(verdict);
    }
    Ok(rep)
}

fn check(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// Abscissa of a tail-slope fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlopeMode {
    /// ln S against ln z; target −(1 + 1/α).
    LogLog,
    /// ln S against z; target −1/β.
    LogLinear,
    /// ln S against z^{2−p}; target −1/(β(2−p)).
    Stretched(f64),
}

impl SlopeMode {
    fn abscissa(self, z: f64) -> f64 {
        match self {
            SlopeMode::LogLog => z.ln(),
            SlopeMode::LogLinear => z,
            SlopeMode::Stretched(p) => z.powf(2.0 - p),
        }
    }
}

/// Least-squares slope of ln S(z) against the mode's abscissa.
/// The grid must be positive and span at least a decade.
pub fn slope_estimate(z_grid: &[f64], tails: &[f64], mode: SlopeMode) -> Result<f64> {
    if z_grid.len() != tails.len() || z_grid.len() < 2 {
        return Err(Error::InsufficientRange("need at least two matched points".into()));
    }
    let lo = z_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = z_grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0) || !(hi >= 10.0 * lo) {
        return Err(Error::InsufficientRange(format!(
            "grid [{lo}, {hi}] spans less than a decade"
        )));
    }
    if let SlopeMode::Stretched(p) = mode {
        if !(p < 2.0) {
            return Err(Error::InvalidConstant(format!(
                "stretch exponent p = {p} must be below 2"
            )));
        }
    }
    if let Some(&t) = tails.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::Domain {
            func: "slope_estimate",
            detail: format!("tail value {t} has no logarithm"),
        });
    }
    let xs: Vec<f64> = z_grid.iter().map(|&z| mode.abscissa(z)).collect();
    let ys: Vec<f64> = tails.iter().map(|t| t.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// Slope fit on the exact tail of a Pearson law.
pub fn law_slope(law: &PearsonLaw, z_grid: &[f64], mode: SlopeMode) -> Result<f64> {
    let tails: Vec<f64> = z_grid.iter().map(|&z| law.tail(z)).collect();
    slope_estimate(z_grid, &tails, mode)
}

/// Target slope of a mode for a reference law, when the law has one.
pub fn slope_target(coeffs: &PearsonCoefficients, mode: SlopeMode) -> Option<f64> {
    match mode {
        SlopeMode::LogLog if coeffs.alpha > 0.0 => Some(-(1.0 + 1.0 / coeffs.alpha)),
        SlopeMode::LogLinear if coeffs.alpha == 0.0 && coeffs.beta != 0.0 => Some(-1.0 / coeffs.beta.abs()),
        SlopeMode::Stretched(p) if coeffs.alpha == 0.0 && coeffs.beta == 0.0 && coeffs.gamma > 0.0 => {
            // ln S ≈ −z²/(2γ)
            (p == 0.0).then(|| -1.0 / (coeffs.gamma * 2.0))
        }
        _ => None,
    }
}

/// Points `lo..=hi` spaced uniformly in the mode's abscissa.
pub fn mode_grid(lo: f64, hi: f64, n: usize, mode: SlopeMode) -> Vec<f64> {
    let (a, b) = (mode.abscissa(lo), mode.abscissa(hi));
    (0..n)
        .map(|i| {
            // endpoints exactly, so a decade-wide window stays a decade wide
            if i == 0 {
                return lo;
            }
            if i == n - 1 {
                return hi;
            }
            let t = a + (b - a) * i as f64 / (n - 1) as f64;
            match mode {
                SlopeMode::LogLog => t.exp(),
                SlopeMode::LogLinear => t,
                SlopeMode::Stretched(p) => t.powf(1.0 / (2.0 - p)),
            }
        })
        .collect()
}
