//! Centered Pearson laws, i.e. laws whose Stein kernel is the quadratic
//! g∗(x) = αx² + βx + γ on the interior of the support.
//!
//! A law is built from its coefficients, classified into one of five
//! canonical shapes, and then exposes density, tail, CDF, quantile, the
//! kernel g∗, the function Q, moments and seeded sampling.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::{parse_real_json, real_json};
use crate::quad::{self, QuadOptions};
use crate::rng;
use crate::specfun::{
    self, inc_gamma_pair, ln_beta, ln_gamma_pos, ln_inc_gamma_pair, ln_normal_tail, normal_cdf, normal_tail,
    reg_inc_beta_xy, LN_SQRT_2PI,
};

/// Relative tolerance used to snap α to 0 and the discriminant to 0.
pub const CLASSIFY_TOL: f64 = 1e-12;

/// The quadratic Stein kernel coefficients of a centered Pearson law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PearsonCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl PearsonCoefficients {
    /// Coefficients that pass [`classify`].
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        let c = Self { alpha, beta, gamma };
        classify(&c)?;
        Ok(c)
    }

    /// g∗ as a polynomial, ignoring the support.
    pub fn poly(&self, x: f64) -> f64 {
        (self.alpha * x + self.beta) * x + self.gamma
    }

    /// Var[Z] = γ / (1 - α).
    pub fn variance(&self) -> f64 {
        self.gamma / (1.0 - self.alpha)
    }

    /// Whether E[|Z|^m] is finite: always for α ≤ 0, and iff m < 1 + 1/α
    /// otherwise.
    pub fn moment_exists(&self, m: u32) -> bool {
        self.alpha <= 0.0 || (m as f64 - 1.0) * self.alpha < 1.0
    }

    /// E[Z^m] from the three-term moment recursion.
    pub fn moment(&self, m: u32) -> Result<f64> {
        Ok(*self.moments(m)?.last().unwrap_or(&1.0))
    }

    /// E[Z^0], ..., E[Z^m].
    pub fn moments(&self, m: u32) -> Result<Vec<f64>> {
        classify(self)?;
        if !self.moment_exists(m) {
            return Err(Error::MomentDoesNotExist {
                order: m,
                alpha: self.alpha,
            });
        }
        let mut out = vec![1.0, 0.0];
        for k in 1..m {
            let kf = k as f64;
            let denom = 1.0 - self.alpha * kf;
            if denom <= 0.0 {
                return Err(Error::MomentDoesNotExist {
                    order: k + 1,
                    alpha: self.alpha,
                });
            }
            let ku = k as usize;
            out.push((self.beta * kf * out[ku] + self.gamma * kf * out[ku - 1]) / denom);
        }
        out.truncate(m as usize + 1);
        Ok(out)
    }
}

/// Free-function form of [`PearsonCoefficients::moment`].
pub fn moment(coeffs: &PearsonCoefficients, m: u32) -> Result<f64> {
    coeffs.moment(m)
}

/// Free-function form of [`PearsonCoefficients::moment_exists`].
pub fn moment_exists(coeffs: &PearsonCoefficients, m: u32) -> bool {
    coeffs.moment_exists(m)
}

/// The five canonical Pearson shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Case {
    Normal,
    Gamma,
    Beta,
    InverseGammaType,
    NoRealRoots,
}

impl Case {
    pub fn number(self) -> u8 {
        match self {
            Case::Normal => 1,
            Case::Gamma => 2,
            Case::Beta => 3,
            Case::InverseGammaType => 4,
            Case::NoRealRoots => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Normal => "Normal",
            Case::Gamma => "Gamma",
            Case::Beta => "Beta",
            Case::InverseGammaType => "InverseGammaType",
            Case::NoRealRoots => "NoRealRoots",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        [
            Case::Normal,
            Case::Gamma,
            Case::Beta,
            Case::InverseGammaType,
            Case::NoRealRoots,
        ]
        .into_iter()
        .find(|c| c.name().eq_ignore_ascii_case(s))
        .ok_or_else(|| Error::UnsupportedCase(s.to_string()))
    }
}

fn alpha_is_zero(c: &PearsonCoefficients) -> bool {
    c.alpha.abs() < CLASSIFY_TOL * 1f64.max(c.beta.abs()).max(c.gamma.abs())
}

fn discriminant(c: &PearsonCoefficients) -> (f64, bool) {
    let b2 = c.beta * c.beta;
    let ag = 4.0 * c.alpha * c.gamma;
    let d = b2 - ag;
    (d, d.abs() < CLASSIFY_TOL * (b2 + ag.abs()))
}

/// Case of a coefficient triple.
pub fn classify(c: &PearsonCoefficients) -> Result<Case> {
    if !(c.alpha.is_finite() && c.beta.is_finite() && c.gamma.is_finite()) {
        return Err(Error::InvalidCoefficients("coefficients must be finite".into()));
    }
    if c.gamma <= 0.0 {
        return Err(Error::InvalidCoefficients(format!(
            "gamma = {} must be positive",
            c.gamma
        )));
    }
    if c.alpha >= 1.0 {
        return Err(Error::InvalidCoefficients(format!(
            "alpha = {} must be below 1",
            c.alpha
        )));
    }
    if alpha_is_zero(c) {
        return Ok(if c.beta == 0.0 { Case::Normal } else { Case::Gamma });
    }
    if c.alpha < 0.0 {
        return Ok(Case::Beta);
    }
    let (d, zero) = discriminant(c);
    if zero {
        Ok(Case::InverseGammaType)
    } else if d < 0.0 {
        Ok(Case::NoRealRoots)
    } else {
        Err(Error::InvalidCoefficients(format!(
            "alpha > 0 with positive discriminant {d}: support cannot contain 0"
        )))
    }
}

/// A centered Pearson law. Immutable once built.
///
/// Parameters are stored for the base orientation; a mirrored law is the
/// reflection x ↦ -x of the base law built from (α, -β, γ).
#[derive(Debug, Clone)]
pub struct PearsonLaw {
    coeffs: PearsonCoefficients,
    case: Case,
    alpha: f64,
    r: f64,
    s: f64,
    mu: f64,
    delta: f64,
    base_a: f64,
    base_b: f64,
    log_c: f64,
    mirrored: bool,
}

/// Build the law of a coefficient triple.
pub fn build_law(coeffs: &PearsonCoefficients) -> Result<PearsonLaw> {
    PearsonLaw::new(coeffs)
}

/// (g∗(x), Q(x)) for a coefficient triple, honouring the support.
pub fn g_star_and_q(coeffs: &PearsonCoefficients, x: f64) -> Result<(f64, f64)> {
    let law = PearsonLaw::new(coeffs)?;
    Ok((law.g_star(x), law.q(x)))
}

// k·ln t with the convention 0·ln 0 = 0.
fn xlogy(k: f64, t: f64) -> f64 {
    if k == 0.0 {
        0.0
    } else {
        k * t.ln()
    }
}

impl PearsonLaw {
    pub fn new(coeffs: &PearsonCoefficients) -> Result<Self> {
        let case = classify(coeffs)?;
        let PearsonCoefficients { alpha, beta, gamma } = *coeffs;
        let mut law = PearsonLaw {
            coeffs: *coeffs,
            case,
            alpha: 0.0,
            r: 0.0,
            s: 0.0,
            mu: 0.0,
            delta: 0.0,
            base_a: f64::NEG_INFINITY,
            base_b: f64::INFINITY,
            log_c: 0.0,
            mirrored: false,
        };
        match case {
            Case::Normal => {
                law.s = gamma.sqrt();
                law.log_c = -LN_SQRT_2PI - law.s.ln();
            }
            Case::Gamma => {
                law.mirrored = beta < 0.0;
                let b = beta.abs();
                law.s = b;
                law.mu = gamma / b;
                law.r = gamma / (b * b);
                law.base_a = -law.mu;
                law.log_c = -law.r * b.ln() - ln_gamma_pos(law.r);
            }
            Case::Beta => {
                law.alpha = alpha;
                let disc = beta * beta - 4.0 * alpha * gamma;
                let q = -0.5 * (beta + beta.signum() * disc.sqrt());
                let q = if beta == 0.0 { -0.5 * disc.sqrt() } else { q };
                let (x1, x2) = (q / alpha, gamma / q);
                let (a, b) = (x1.min(x2), x1.max(x2));
                let len = b - a;
                law.base_a = a;
                law.base_b = b;
                law.r = a / (alpha * len);
                law.s = -b / (alpha * len);
                law.log_c = -ln_beta(law.r, law.s) - (law.r + law.s - 1.0) * len.ln();
                let mean = a + len * law.r / (law.r + law.s);
                if !(a < 0.0 && b > 0.0) || mean.abs() > 1e-9 * len {
                    return Err(Error::InvalidCoefficients(format!(
                        "roots ({a}, {b}) do not give a centered law"
                    )));
                }
            }
            Case::InverseGammaType => {
                law.mirrored = beta < 0.0;
                law.alpha = alpha;
                law.mu = beta.abs() / (2.0 * alpha);
                law.r = 2.0 + 1.0 / alpha;
                law.s = law.mu / alpha;
                if !(law.s > 0.0) {
                    return Err(Error::InvalidCoefficients(
                        "degenerate scale s = 0 in the single-root case".into(),
                    ));
                }
                law.base_a = -law.mu;
                law.log_c = (law.r - 1.0) * law.s.ln() - ln_gamma_pos(law.r - 1.0);
            }
            Case::NoRealRoots => {
                law.alpha = alpha;
                law.mu = beta / (2.0 * alpha);
                law.delta = ((4.0 * alpha * gamma - beta * beta) / (4.0 * alpha * alpha)).sqrt();
                law.r = 1.0 + 1.0 / (2.0 * alpha);
                law.s = law.mu / (alpha * law.delta);
                let ln_i = law.theta_log_mass(law.s, PI);
                law.log_c = -(1.0 - 2.0 * law.r) * law.delta.ln() - ln_i;
            }
        }
        if !law.log_c.is_finite() {
            return Err(Error::InvalidCoefficients(format!(
                "normalizing constant is not finite for {coeffs:?}"
            )));
        }
        Ok(law)
    }

    pub fn coefficients(&self) -> PearsonCoefficients {
        self.coeffs
    }
    pub fn case(&self) -> Case {
        self.case
    }
    /// Shape r (Gamma, Beta, Case 4 exponent, Case 5 exponent; 0 for Normal).
    pub fn r(&self) -> f64 {
        self.r
    }
    /// Second parameter: Gamma scale, Beta shape, Case 4 scale, Case 5
    /// arctan weight, Normal standard deviation.
    pub fn s(&self) -> f64 {
        self.s
    }
    /// Centering shift of the base orientation.
    pub fn mu(&self) -> f64 {
        self.mu
    }
    /// Case 5 scale δ; 0 otherwise.
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn log_norm_const(&self) -> f64 {
        self.log_c
    }
    pub fn mirrored(&self) -> bool {
        self.mirrored
    }
    /// Left end of the support.
    pub fn a(&self) -> f64 {
        if self.mirrored {
            -self.base_b
        } else {
            self.base_a
        }
    }
    /// Right end of the support.
    pub fn b(&self) -> f64 {
        if self.mirrored {
            -self.base_a
        } else {
            self.base_b
        }
    }
    pub fn support(&self) -> (f64, f64) {
        (self.a(), self.b())
    }
    pub fn in_support(&self, x: f64) -> bool {
        x > self.a() && x < self.b()
    }
    /// True when the case-4 variance condition r > 3 fails.
    pub fn variance_warning(&self) -> bool {
        self.case == Case::InverseGammaType && self.r <= 3.0
    }
    pub fn variance(&self) -> f64 {
        self.coeffs.variance()
    }

    #[inline]
    fn to_base(&self, x: f64) -> f64 {
        if self.mirrored {
            -x
        } else {
            x
        }
    }

    // ---- base orientation -------------------------------------------------

    fn base_ln_rho(&self, y: f64) -> f64 {
        if y < self.base_a || y > self.base_b || y.is_nan() {
            return f64::NEG_INFINITY;
        }
        match self.case {
            Case::Normal => {
                let u = y / self.s;
                self.log_c - 0.5 * u * u
            }
            Case::Gamma => self.gamma_ln_rho(y + self.mu),
            Case::Beta => self.beta_ln_rho(y - self.base_a, self.base_b - y),
            Case::InverseGammaType => self.ig_ln_rho(y + self.mu),
            Case::NoRealRoots => {
                let t = y + self.mu;
                self.log_c - self.r * self.ln_t2_d2(t) + self.s * (t / self.delta).atan()
            }
        }
    }

    fn gamma_ln_rho(&self, t: f64) -> f64 {
        if t == 0.0 && self.r == 1.0 {
            return self.log_c;
        }
        self.log_c + xlogy(self.r - 1.0, t) - t / self.s
    }

    fn beta_ln_rho(&self, u: f64, v: f64) -> f64 {
        self.log_c + xlogy(self.r - 1.0, u) + xlogy(self.s - 1.0, v)
    }

    fn ig_ln_rho(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return f64::NEG_INFINITY;
        }
        self.log_c - self.r * t.ln() - self.s / t
    }

    fn ln_t2_d2(&self, t: f64) -> f64 {
        let d = self.delta;
        if t.abs() > d {
            2.0 * t.abs().ln() + (d / t).powi(2).ln_1p()
        } else {
            2.0 * d.ln() + (t / d).powi(2).ln_1p()
        }
    }

    fn base_g(&self, y: f64) -> f64 {
        if !(y > self.base_a && y < self.base_b) {
            return 0.0;
        }
        match self.case {
            Case::Normal => self.coeffs.gamma,
            Case::Gamma => self.s * (y + self.mu),
            Case::Beta => -self.alpha * (y - self.base_a) * (self.base_b - y),
            Case::InverseGammaType => self.alpha * (y + self.mu).powi(2),
            Case::NoRealRoots => {
                let t = y + self.mu;
                self.alpha * (t * t + self.delta * self.delta)
            }
        }
    }

    fn base_ln_g(&self, y: f64) -> f64 {
        if !(y > self.base_a && y < self.base_b) {
            return f64::NEG_INFINITY;
        }
        match self.case {
            Case::Normal => self.coeffs.gamma.ln(),
            Case::Gamma => self.s.ln() + (y + self.mu).ln(),
            Case::Beta => (-self.alpha).ln() + (y - self.base_a).ln() + (self.base_b - y).ln(),
            Case::InverseGammaType => self.alpha.ln() + 2.0 * (y + self.mu).ln(),
            Case::NoRealRoots => self.alpha.ln() + self.ln_t2_d2(y + self.mu),
        }
    }

    fn base_g_prime(&self, y: f64) -> f64 {
        if !(y > self.base_a && y < self.base_b) {
            return 0.0;
        }
        match self.case {
            Case::Normal => 0.0,
            Case::Gamma => self.s,
            Case::Beta => -self.alpha * ((self.base_b - y) - (y - self.base_a)),
            Case::InverseGammaType | Case::NoRealRoots => 2.0 * self.alpha * (y + self.mu),
        }
    }

    fn base_tail(&self, y: f64) -> f64 {
        if y <= self.base_a {
            return 1.0;
        }
        if y >= self.base_b {
            return 0.0;
        }
        match self.case {
            Case::Normal => normal_tail(y / self.s),
            Case::Gamma => inc_gamma_pair(self.r, (y + self.mu) / self.s).1,
            Case::Beta => {
                let len = self.base_b - self.base_a;
                reg_inc_beta_xy(self.s, self.r, (self.base_b - y) / len, (y - self.base_a) / len)
            }
            Case::InverseGammaType => inc_gamma_pair(self.r - 1.0, self.s / (y + self.mu)).0,
            Case::NoRealRoots => {
                let t = y + self.mu;
                self.theta_mass(self.s, self.delta.atan2(t))
            }
        }
        .clamp(0.0, 1.0)
    }

    fn base_cdf(&self, y: f64) -> f64 {
        if y <= self.base_a {
            return 0.0;
        }
        if y >= self.base_b {
            return 1.0;
        }
        match self.case {
            Case::Normal => normal_cdf(y / self.s),
            Case::Gamma => inc_gamma_pair(self.r, (y + self.mu) / self.s).0,
            Case::Beta => {
                let len = self.base_b - self.base_a;
                reg_inc_beta_xy(self.r, self.s, (y - self.base_a) / len, (self.base_b - y) / len)
            }
            Case::InverseGammaType => inc_gamma_pair(self.r - 1.0, self.s / (y + self.mu)).1,
            Case::NoRealRoots => {
                let t = y + self.mu;
                self.theta_mass(-self.s, self.delta.atan2(-t))
            }
        }
        .clamp(0.0, 1.0)
    }

    fn base_log_tail(&self, y: f64) -> f64 {
        match self.case {
            _ if y <= self.base_a || y >= self.base_b => self.base_tail(y).ln(),
            Case::Normal => ln_normal_tail(y / self.s),
            Case::Gamma => ln_inc_gamma_pair(self.r, (y + self.mu) / self.s).1,
            Case::InverseGammaType => ln_inc_gamma_pair(self.r - 1.0, self.s / (y + self.mu)).0,
            _ => self.base_tail(y).ln(),
        }
    }

    fn base_log_cdf(&self, y: f64) -> f64 {
        match self.case {
            _ if y <= self.base_a || y >= self.base_b => self.base_cdf(y).ln(),
            Case::Normal => ln_normal_tail(-y / self.s),
            Case::Gamma => ln_inc_gamma_pair(self.r, (y + self.mu) / self.s).0,
            Case::InverseGammaType => ln_inc_gamma_pair(self.r - 1.0, self.s / (y + self.mu)).1,
            _ => self.base_cdf(y).ln(),
        }
    }

    // Case 5 in angle coordinates: with x + μ = δ·cot φ the mass element is
    // exp(ln C + (1 - 2r) ln δ + (2r - 2) ln sin φ + w (π/2 - φ)) dφ, and the
    // upper tail at x is the integral over (0, φ_x). The lower tail uses the
    // same form with w ↦ -w.
    fn theta_mass(&self, w: f64, upto: f64) -> f64 {
        let k = self.log_c + (1.0 - 2.0 * self.r) * self.delta.ln();
        (k + self.theta_log_mass(w, upto)).exp()
    }

    // ln ∫_0^upto exp((2r - 2) ln sin φ + w (π/2 - φ)) dφ
    fn theta_log_mass(&self, w: f64, upto: f64) -> f64 {
        if upto <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let k = 2.0 * self.r - 2.0;
        let expo = |phi: f64| k * phi.sin().ln() + w * (FRAC_PI_2 - phi);
        let mode = k.atan2(w);
        let peak = expo(upto.min(mode));
        let f = |phi: f64| {
            if phi <= 0.0 || phi >= PI {
                0.0
            } else {
                (expo(phi) - peak).exp()
            }
        };
        let opts = QuadOptions::default().with_tol(1e-300, 1e-13);
        let v = if upto <= mode {
            quad::integrate_finite(f, 0.0, upto, opts).value
        } else {
            quad::integrate_finite(f, 0.0, mode, opts).value + quad::integrate_finite(f, mode, upto, opts).value
        };
        peak + v.ln()
    }

    fn base_mode(&self) -> f64 {
        match self.case {
            Case::Normal => 0.0,
            Case::Gamma => self.s * (self.r - 1.0).max(0.0) - self.mu,
            Case::Beta => {
                if self.r > 1.0 && self.s > 1.0 {
                    self.base_a + (self.base_b - self.base_a) * (self.r - 1.0) / (self.r + self.s - 2.0)
                } else {
                    0.5 * (self.base_a + self.base_b)
                }
            }
            Case::InverseGammaType => self.s / self.r - self.mu,
            Case::NoRealRoots => self.mu / (2.0 * self.r * self.alpha) - self.mu,
        }
    }

    fn scale(&self) -> f64 {
        self.coeffs.gamma.sqrt()
    }

    // ---- public evaluators ------------------------------------------------

    /// ln ρ∗(x); −∞ outside the support, the one-sided limit at finite ends.
    pub fn log_density(&self, x: f64) -> f64 {
        self.base_ln_rho(self.to_base(x))
    }

    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    /// g∗(x) = αx² + βx + γ inside the support, 0 outside.
    pub fn g_star(&self, x: f64) -> f64 {
        self.base_g(self.to_base(x))
    }

    /// ln g∗(x) from its factored form; −∞ outside the support.
    pub fn log_g_star(&self, x: f64) -> f64 {
        self.base_ln_g(self.to_base(x))
    }

    /// Derivative of g∗ inside the support, 0 outside.
    pub fn g_star_prime(&self, x: f64) -> f64 {
        let d = self.base_g_prime(self.to_base(x));
        if self.mirrored {
            -d
        } else {
            d
        }
    }

    /// Q(x) = x² − x·g∗′(x) + g∗(x): (1−α)x² + γ inside the support, x²
    /// outside.
    pub fn q(&self, x: f64) -> f64 {
        x * x - x * self.g_star_prime(x) + self.g_star(x)
    }

    /// ln(g∗ρ∗)(x), finite only inside the support.
    pub fn log_g_rho(&self, x: f64) -> f64 {
        let y = self.to_base(x);
        if !(y > self.base_a && y < self.base_b) {
            return f64::NEG_INFINITY;
        }
        self.base_ln_g(y) + self.base_ln_rho(y)
    }

    /// ρ∗′/ρ∗ = −((2α+1)x + β)/g∗(x) on the support.
    pub fn log_density_slope(&self, x: f64) -> f64 {
        -(x + self.g_star_prime(x)) / self.g_star(x)
    }

    /// Φ∗(z) = P[Z > z].
    pub fn tail(&self, z: f64) -> f64 {
        if self.mirrored {
            self.base_cdf(-z)
        } else {
            self.base_tail(z)
        }
    }

    /// P[Z ≤ z], accurate on its small side.
    pub fn cdf(&self, z: f64) -> f64 {
        if self.mirrored {
            self.base_tail(-z)
        } else {
            self.base_cdf(z)
        }
    }

    /// ln Φ∗(z), finite where Φ∗ itself underflows (normal, Gamma and
    /// Case 4 laws).
    pub fn log_tail(&self, z: f64) -> f64 {
        if self.mirrored {
            self.base_log_cdf(-z)
        } else {
            self.base_log_tail(z)
        }
    }

    /// ln P[Z ≤ z], with the same range as [`PearsonLaw::log_tail`].
    pub fn log_cdf(&self, z: f64) -> f64 {
        if self.mirrored {
            self.base_log_tail(-z)
        } else {
            self.base_log_cdf(z)
        }
    }

    /// The z with tail(z) = p.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        if self.case == Case::Normal {
            return Ok(-self.s * specfun::normal_quantile(p)?);
        }
        // base variable y = ±x; solve on whichever side keeps p small
        let (upper, q) = match (self.mirrored, p < 0.5) {
            (false, true) => (true, p),
            (false, false) => (false, 1.0 - p),
            (true, true) => (false, p),
            (true, false) => (true, 1.0 - p),
        };
        let y = self.solve_base(upper, q);
        Ok(self.to_base(y))
    }

    // y with base_tail(y) = q (upper) or base_cdf(y) = q (lower), q ≤ ½.
    fn solve_base(&self, upper: bool, q: f64) -> f64 {
        let side = |y: f64| if upper { self.base_tail(y) } else { self.base_cdf(y) };
        let target = q.ln();
        // bracket [lo, hi] with side(lo) ≥ q ≥ side(hi) when upper
        let start = 0.0;
        let mut step = self.scale();
        let (mut lo, mut hi);
        let s0 = side(start);
        let dir = if upper == (s0 > q) { 1.0 } else { -1.0 };
        let mut prev = start;
        loop {
            let mut next = prev + dir * step;
            next = next.clamp(self.base_a, self.base_b);
            let sn = side(next);
            let crossed = if dir > 0.0 {
                if upper {
                    sn <= q
                } else {
                    sn >= q
                }
            } else if upper {
                sn >= q
            } else {
                sn <= q
            };
            if crossed || next == prev || !next.is_finite() {
                lo = prev.min(next);
                hi = prev.max(next);
                break;
            }
            prev = next;
            step *= 2.0;
        }
        let mut y = if lo.is_finite() && hi.is_finite() {
            0.5 * (lo + hi)
        } else {
            start
        };
        for _ in 0..300 {
            let sv = side(y);
            let too_far_right = if upper { sv < q } else { sv > q };
            if too_far_right {
                hi = y;
            } else {
                lo = y;
            }
            if sv == q {
                return y;
            }
            let rho = self.base_ln_rho(y).exp();
            let slope = if upper { -rho / sv } else { rho / sv };
            let newton = y - (sv.ln() - target) / slope;
            let next = if sv > 0.0 && slope.is_finite() && slope != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - y).abs() <= f64::EPSILON * next.abs() || lo.next_up() >= hi {
                return self.polish_base(&side, q, next);
            }
            y = next;
        }
        self.polish_base(&side, q, y)
    }

    // Newton stops on a step relative to |y|; near a singular support end the
    // side probability still moves between neighbouring doubles, so walk ulps
    // while that brings it closer to q.
    fn polish_base(&self, side: &dyn Fn(f64) -> f64, q: f64, mut y: f64) -> f64 {
        let mut err = (side(y) - q).abs();
        for _ in 0..64 {
            let best = [y.next_up(), y.next_down()]
                .into_iter()
                .filter(|t| (self.base_a..=self.base_b).contains(t))
                .map(|t| (t, (side(t) - q).abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1));
            match best {
                Some((t, e)) if e < err => {
                    y = t;
                    err = e;
                }
                _ => break,
            }
        }
        y
    }

    /// `n` draws by inversion of uniforms from stream blocks keyed by `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        rng::map_uniforms(n, seed, |u| self.quantile(u).expect("uniform in (0,1)"))
    }

    /// E[f(Z)] by adaptive quadrature of f·ρ∗ in x-space, split at the mode,
    /// with power maps at integrable density singularities.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let sgn = if self.mirrored { -1.0 } else { 1.0 };
        let fb = |y: f64| f(sgn * y);
        let opts = QuadOptions::default().with_tol(1e-14, 1e-12).with_scale(self.scale());
        let (a, b) = (self.base_a, self.base_b);
        let c = self.base_mode().clamp(
            if a.is_finite() {
                a + 1e-3 * (b.min(a + 1.0) - a)
            } else {
                f64::NEG_INFINITY
            },
            if b.is_finite() {
                b - 1e-3 * (b - a.max(b - 1.0))
            } else {
                f64::INFINITY
            },
        );
        let c = if c.is_finite() { c } else { 0.0 };
        let dens = |y: f64| {
            let v = fb(y);
            if v == 0.0 {
                0.0
            } else {
                v * self.base_ln_rho(y).exp()
            }
        };
        let left_singular = matches!(self.case, Case::Gamma | Case::Beta) && self.r < 1.0;
        let right_singular = self.case == Case::Beta && self.s < 1.0;
        let left = if left_singular {
            quad::integrate_left_power(
                |d| {
                    let y = a + d;
                    let v = fb(y);
                    if v == 0.0 {
                        return 0.0;
                    }
                    let lr = match self.case {
                        Case::Gamma => self.gamma_ln_rho(d),
                        _ => self.beta_ln_rho(d, (b - a) - d),
                    };
                    v * lr.exp()
                },
                c - a,
                self.r,
                opts,
            )
        } else {
            quad::integrate(dens, a, c, opts)
        };
        let right = if right_singular {
            quad::integrate_left_power(
                |e| {
                    let y = b - e;
                    let v = fb(y);
                    if v == 0.0 {
                        return 0.0;
                    }
                    v * self.beta_ln_rho((b - a) - e, e).exp()
                },
                b - c,
                self.s,
                opts,
            )
        } else {
            quad::integrate(dens, c, b, opts)
        };
        Ok(left.ok()? + right.ok()?)
    }

    /// Residuals of the defining identities of the law.
    pub fn check_identities(&self) -> Result<IdentityReport> {
        let lo = self.quantile(1.0 - 1e-4)?;
        let hi = self.quantile(1e-4)?;
        let n = 200;
        let mut ode: f64 = 0.0;
        let (a, b) = self.support();
        let g_rho = |x: f64| self.log_g_rho(x).exp();
        for i in 0..n {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / n as f64;
            let room = (x - a).min(b - x).min(1.0);
            let h = 1e-3 * room;
            let d = (g_rho(x - 2.0 * h) - 8.0 * g_rho(x - h) + 8.0 * g_rho(x + h) - g_rho(x + 2.0 * h)) / (12.0 * h);
            ode = ode.max((d + x * self.density(x)).abs());
        }
        let mass = self.expect(|_| 1.0)?;
        let mean = self.expect(|x| x)?;
        let boundary_lower = g_rho(self.quantile(1.0 - 1e-8)?);
        let boundary_upper = g_rho(self.quantile(1e-8)?);
        let mass_defect = (mass - 1.0).abs();
        let mean_defect = mean.abs();
        let passed = [ode, mass_defect, mean_defect, boundary_lower, boundary_upper]
            .iter()
            .all(|&v| v < 1e-6);
        Ok(IdentityReport {
            ode_residual: ode,
            mass_defect,
            mean_defect,
            boundary_lower,
            boundary_upper,
            passed,
        })
    }

    /// JSON object with the coefficients, case and canonical parameters.
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": real_json(self.coeffs.alpha),
            "beta": real_json(self.coeffs.beta),
            "gamma": real_json(self.coeffs.gamma),
            "case": self.case.name(),
            "r": real_json(self.r),
            "s": real_json(self.s),
            "mu": real_json(self.mu),
            "delta": real_json(self.delta),
            "a": real_json(self.a()),
            "b": real_json(self.b()),
            "logC": real_json(self.log_c),
            "mirrored": self.mirrored,
        })
    }

    /// Rebuild a law from the output of [`PearsonLaw::to_json`].
    pub fn from_json(v: &Value) -> Result<Self> {
        let get = |k: &str| {
            v.get(k)
                .and_then(parse_real_json)
                .ok_or_else(|| Error::InvalidCoefficients(format!("missing or invalid field {k}")))
        };
        let coeffs = PearsonCoefficients {
            alpha: get("alpha")?,
            beta: get("beta")?,
            gamma: get("gamma")?,
        };
        let law = Self::new(&coeffs)?;
        if let Some(case) = v.get("case").and_then(Value::as_str) {
            if case.parse::<Case>()? != law.case {
                return Err(Error::InvalidCoefficients(format!(
                    "case {case} does not match coefficients"
                )));
            }
        }
        Ok(law)
    }
}

impl Serialize for PearsonLaw {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(ser)
    }
}

/// Closed-form ln C of the Case 5 density C(1+t²)^{-r} e^{w·atan t}.
pub fn unit_scale_case5_log_norm(r: f64, w: f64) -> Result<f64> {
    Ok(2.0 * specfun::log_abs_gamma_complex(r, -0.5 * w)?
        - 0.5 * PI.ln()
        - specfun::log_gamma(r - 0.5)?
        - specfun::log_gamma(r)?)
}

/// Residuals reported by [`PearsonLaw::check_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    /// max |(g∗ρ∗)′ + xρ∗| over an interior grid.
    pub ode_residual: f64,
    /// |∫ρ∗ − 1|.
    pub mass_defect: f64,
    /// |∫xρ∗|.
    pub mean_defect: f64,
    /// g∗ρ∗ at the 1e-8 lower quantile.
    pub boundary_lower: f64,
    /// g∗ρ∗ at the 1e-8 upper quantile.
    pub boundary_upper: f64,
    pub passed: bool,
}

/// Free-function form of [`PearsonLaw::check_identities`].
pub fn check_pearson_identities(law: &PearsonLaw) -> Result<IdentityReport> {
    law.check_identities()
}
