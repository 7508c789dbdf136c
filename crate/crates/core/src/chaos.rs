//! One-dimensional Wiener chaos: X = Σ cₙ Hₙ(N) for a standard Gaussian N.
//!
//! D and −L⁻¹ act on grade n by the factors n and 1/n, so
//! G = ⟨DX, −DL⁻¹X⟩ = X′(N) · Σ cₘ H_{m−1}(N) is a polynomial in N, and the
//! law of X is obtained exactly by inverting X on its monotone branches.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::real;
use crate::pearson::{PearsonCoefficients, PearsonLaw};
use crate::quad::{self, GaussHermite, QuadOptions};
use crate::rng;
use crate::specfun::{normal_cdf, normal_pdf, normal_quantile, normal_tail};

/// Largest Hermite index accepted by [`hermite_eval`].
pub const MAX_HERMITE: usize = 64;

/// Probabilists' Hermite polynomial Hₙ(x) by the three-term recurrence.
pub fn hermite_eval(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE {
        return Err(Error::InvalidSeries(format!("Hermite index {n} exceeds {MAX_HERMITE}")));
    }
    let (mut prev, mut cur) = (0.0, 1.0);
    for k in 0..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Real polynomial in monomial form, lowest degree first.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial x.
    pub fn x() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Σ |cᵢ||x|ⁱ, the scale of rounding errors in [`Polynomial::eval`].
    pub fn abs_eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * ax + c.abs())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&0.0) + other.coeffs.get(i).unwrap_or(&0.0))
                .collect(),
        )
    }

    pub fn scale(&self, k: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| k * c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(-1.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::default();
        }
        let mut out = vec![0.0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::default(), |acc, &c| acc.mul(inner).add(&Self::constant(c)))
    }

    /// Bound on the modulus of every root (Cauchy).
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().abs();
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.abs() / lead)
            .fold(0.0, f64::max)
    }

    /// All distinct real roots in increasing order. Multiple roots are found
    /// as critical points where the polynomial vanishes to rounding accuracy.
    pub fn real_roots(&self) -> Vec<f64> {
        if self.degree() == 0 {
            return Vec::new();
        }
        if self.degree() == 1 {
            return vec![-self.coeffs[0] / self.coeffs[1]];
        }
        let bound = self.root_bound();
        let crit = self.derivative().real_roots();
        let mut pts = vec![-bound];
        pts.extend(crit.iter().copied().filter(|c| c.abs() < bound));
        pts.push(bound);
        let mut roots = Vec::new();
        for w in pts.windows(2) {
            let (l, r) = (w[0], w[1]);
            let (pl, pr) = (self.eval(l), self.eval(r));
            if pl == 0.0 {
                roots.push(l);
            } else if pl.signum() != pr.signum() && pr != 0.0 {
                roots.push(self.solve_monotone(l, r, 0.0));
            }
        }
        if let Some(&last) = pts.last() {
            if self.eval(last) == 0.0 {
                roots.push(last);
            }
        }
        for &c in &crit {
            if self.eval(c).abs() <= 64.0 * f64::EPSILON * self.abs_eval(c) {
                roots.push(c);
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * a.abs().max(1.0));
        roots
    }

    /// Root of self − target in [lo, hi] where self is monotone and changes
    /// sign relative to target. Newton inside the bracket, bisection fallback.
    pub fn solve_monotone(&self, mut lo: f64, mut hi: f64, target: f64) -> f64 {
        let d = self.derivative();
        let f_lo = self.eval(lo) - target;
        let increasing = f_lo < 0.0;
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let fx = self.eval(x) - target;
            if fx == 0.0 {
                return x;
            }
            if (fx < 0.0) == increasing {
                lo = x;
            } else {
                hi = x;
            }
            let dx = d.eval(x);
            let newton = x - fx / dx;
            let next = if dx != 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - x).abs() <= f64::EPSILON * next.abs() || lo.next_up() >= hi {
                return next;
            }
            x = next;
        }
        x
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let num = |c: f64| {
            if c.fract() == 0.0 && c.abs() < 1e15 {
                format!("{}", c as i64)
            } else {
                real(c)
            }
        };
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0.0 {
                continue;
            }
            let mag = c.abs();
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match i {
                0 => f.write_str(&num(mag))?,
                _ => {
                    if mag != 1.0 {
                        write!(f, "{}*", num(mag))?;
                    }
                    if i == 1 {
                        f.write_str("N")?;
                    } else {
                        write!(f, "N^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Monomial coefficients of Hₙ.
pub fn hermite_polynomial(n: usize) -> Polynomial {
    let mut prev = Polynomial::default();
    let mut cur = Polynomial::constant(1.0);
    for k in 0..n {
        let next = Polynomial::x().mul(&cur).sub(&prev.scale(k as f64));
        prev = cur;
        cur = next;
    }
    cur
}

/// X = Σ cₙ Hₙ(N) with c₀ = 0 and a nonzero top coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HermiteSeries {
    coeffs: Vec<f64>,
}

impl TryFrom<Vec<f64>> for HermiteSeries {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<HermiteSeries> for Vec<f64> {
    fn from(s: HermiteSeries) -> Self {
        s.coeffs
    }
}

impl HermiteSeries {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidSeries("need at least c_0 and c_1".into()));
        }
        if coeffs.len() - 1 > MAX_HERMITE {
            return Err(Error::InvalidSeries(format!("degree above {MAX_HERMITE}")));
        }
        if coeffs[0] != 0.0 {
            return Err(Error::InvalidSeries(format!("c_0 = {} must be 0", coeffs[0])));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidSeries("coefficients must be finite".into()));
        }
        if *coeffs.last().unwrap() == 0.0 {
            return Err(Error::InvalidSeries("top coefficient must be nonzero".into()));
        }
        Ok(Self { coeffs })
    }

    /// The single-grade series X = c·Hₙ.
    pub fn single(n: usize, c: f64) -> Result<Self> {
        let mut v = vec![0.0; n + 1];
        v[n] = c;
        Self::new(v)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// E[X²] = Σ n! cₙ².
    pub fn variance(&self) -> f64 {
        let mut fact = 1.0;
        let mut v = 0.0;
        for (n, &c) in self.coeffs.iter().enumerate().skip(1) {
            fact *= n as f64;
            v += fact * c * c;
        }
        v
    }

    /// X as a polynomial in N.
    pub fn polynomial(&self) -> Polynomial {
        self.coeffs
            .iter()
            .enumerate()
            .fold(Polynomial::default(), |acc, (n, &c)| {
                if c == 0.0 {
                    acc
                } else {
                    acc.add(&hermite_polynomial(n).scale(c))
                }
            })
    }

    /// X(n) evaluated through the Hermite recurrence.
    pub fn eval(&self, n: f64) -> f64 {
        let (mut prev, mut cur) = (0.0, 1.0);
        let mut sum = 0.0;
        for (k, &c) in self.coeffs.iter().enumerate() {
            sum += c * cur;
            let next = n * cur - k as f64 * prev;
            prev = cur;
            cur = next;
        }
        sum
    }

    /// `count` draws of X(N), stream-blocked by `seed`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<f64> {
        rng::map_uniforms(count, seed, |u| {
            self.eval(normal_quantile(u).expect("uniform in (0,1)"))
        })
    }
}

/// G = ⟨DX, −DL⁻¹X⟩ = X′(N)·Σ cₘ H_{m−1}(N) in monomial form.
pub fn malliavin_g(series: &HermiteSeries) -> Polynomial {
    let dx = series.polynomial().derivative();
    let inner = series
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .fold(Polynomial::default(), |acc, (m, &c)| {
            acc.add(&hermite_polynomial(m - 1).scale(c))
        });
    dx.mul(&inner)
}

#[derive(Debug, Clone, Copy)]
struct Branch {
    lo: f64,
    hi: f64,
    increasing: bool,
    /// X(lo) and X(hi), with ±∞ at infinite ends.
    x_lo: f64,
    x_hi: f64,
}

/// The exact law of X = p(N) for a nonconstant polynomial p.
#[derive(Debug, Clone)]
pub struct PolynomialLaw {
    poly: Polynomial,
    deriv: Polynomial,
    branches: Vec<Branch>,
    inf: f64,
    sup: f64,
}

/// Density and tail evaluators of X.
pub fn law_of_polynomial(series: &HermiteSeries) -> PolynomialLaw {
    PolynomialLaw::new(series.polynomial())
}

// Gaussian mass of (l, u) computed on the side with less cancellation.
fn gauss_mass(l: f64, u: f64) -> f64 {
    if u <= l {
        0.0
    } else if l >= 0.0 {
        normal_tail(l) - normal_tail(u)
    } else if u <= 0.0 {
        normal_cdf(u) - normal_cdf(l)
    } else {
        1.0 - normal_cdf(l) - normal_tail(u)
    }
}

impl PolynomialLaw {
    pub fn new(poly: Polynomial) -> Self {
        assert!(poly.degree() >= 1, "X must be a nonconstant polynomial");
        let deriv = poly.derivative();
        let mut cuts = vec![f64::NEG_INFINITY];
        cuts.extend(deriv.real_roots());
        cuts.push(f64::INFINITY);
        let at = |n: f64| {
            if n.is_finite() {
                poly.eval(n)
            } else {
                // sign of the leading term at ±∞
                let odd = poly.degree() % 2 == 1;
                let s = poly.leading().signum() * if n < 0.0 && odd { -1.0 } else { 1.0 };
                s * f64::INFINITY
            }
        };
        let mut branches = Vec::new();
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let (x_lo, x_hi) = (at(lo), at(hi));
            if x_lo == x_hi {
                continue;
            }
            branches.push(Branch {
                lo,
                hi,
                increasing: x_hi > x_lo,
                x_lo,
                x_hi,
            });
        }
        let inf = branches
            .iter()
            .map(|b| b.x_lo.min(b.x_hi))
            .fold(f64::INFINITY, f64::min);
        let sup = branches
            .iter()
            .map(|b| b.x_lo.max(b.x_hi))
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            poly,
            deriv,
            branches,
            inf,
            sup,
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    /// (inf X, sup X).
    pub fn support(&self) -> (f64, f64) {
        (self.inf, self.sup)
    }

    /// Preimages n with X(n) = x, one per branch whose range contains x.
    pub fn preimages(&self, x: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for b in &self.branches {
            let (mn, mx) = (b.x_lo.min(b.x_hi), b.x_lo.max(b.x_hi));
            if !(x > mn && x < mx) {
                continue;
            }
            out.push(self.invert(b, x));
        }
        out
    }

    fn invert(&self, b: &Branch, x: f64) -> f64 {
        let shifted = self.poly.sub(&Polynomial::constant(x));
        let bound = shifted.root_bound();
        let lo = if b.lo.is_finite() { b.lo } else { -bound };
        let hi = if b.hi.is_finite() { b.hi } else { bound };
        self.poly.solve_monotone(lo, hi, x)
    }

    /// ρ_X(x) = Σ φ(nᵢ)/|X′(nᵢ)| over the preimages.
    pub fn density(&self, x: f64) -> f64 {
        self.preimages(x)
            .into_iter()
            .map(|n| normal_pdf(n) / self.deriv.eval(n).abs())
            .sum()
    }

    /// P[X > x] as the Gaussian mass of the preimage of (x, ∞).
    pub fn tail(&self, x: f64) -> f64 {
        self.preimage_intervals(x, true)
            .into_iter()
            .map(|(l, u)| gauss_mass(l, u))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// P[X ≤ x].
    pub fn cdf(&self, x: f64) -> f64 {
        self.preimage_intervals(x, false)
            .into_iter()
            .map(|(l, u)| gauss_mass(l, u))
            .sum::<f64>()
            .clamp(0.0, 1.0)
    }

    /// N-intervals on which X > x (above) or X ≤ x (below).
    pub fn preimage_intervals(&self, x: f64, above: bool) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        for b in &self.branches {
            let (mn, mx) = (b.x_lo.min(b.x_hi), b.x_lo.max(b.x_hi));
            if x >= mx {
                if !above {
                    out.push((b.lo, b.hi));
                }
            } else if x <= mn {
                if above {
                    out.push((b.lo, b.hi));
                }
            } else {
                let n = self.invert(b, x);
                let upper_part = b.increasing == above;
                out.push(if upper_part { (n, b.hi) } else { (b.lo, n) });
            }
        }
        out
    }

    /// E[f(N) ; X > x] (above) or E[f(N) ; X ≤ x] by adaptive quadrature in N.
    pub fn partial_expectation<F: Fn(f64) -> f64>(&self, f: F, x: f64, above: bool) -> Result<f64> {
        let opts = QuadOptions::default().with_tol(1e-15, 1e-12);
        let mut sum = 0.0;
        for (l, u) in self.preimage_intervals(x, above) {
            sum += quad::integrate(|n| f(n) * normal_pdf(n), l, u, opts).ok()?;
        }
        Ok(sum)
    }
}

/// g(x) = E[G | X = x] computed two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GValue {
    /// (1/ρ_X(x)) ∫_x^∞ y ρ_X(y) dy by quadrature.
    pub by_integral: f64,
    /// Σ G(nᵢ)wᵢ / Σ wᵢ with wᵢ = φ(nᵢ)/|X′(nᵢ)|.
    pub by_branches: f64,
}

impl GValue {
    pub fn discrepancy(&self) -> f64 {
        (self.by_integral - self.by_branches).abs() / self.by_branches.abs().max(1.0)
    }
}

/// g(x) for X at an interior point of its support.
pub fn g_function(series: &HermiteSeries, x: f64) -> Result<GValue> {
    let law = law_of_polynomial(series);
    g_function_with(&law, &malliavin_g(series), x)
}

/// As [`g_function`] with a prebuilt law and G.
pub fn g_function_with(law: &PolynomialLaw, g: &Polynomial, x: f64) -> Result<GValue> {
    let (lo, hi) = law.support();
    if !(x > lo && x < hi) {
        return Err(Error::OutsideSupport(x));
    }
    let pre = law.preimages(x);
    let mut num = 0.0;
    let mut den = 0.0;
    for &n in &pre {
        let w = normal_pdf(n) / law.deriv.eval(n).abs();
        if !w.is_finite() {
            return Err(Error::OutsideSupport(x));
        }
        num += w * g.eval(n);
        den += w;
    }
    // E[X; X > x] = −E[X; X ≤ x] since E[X] = 0; integrate the smaller side
    let p = &law.poly;
    let above = law.tail(x) <= 0.5;
    let part = law.partial_expectation(|n| p.eval(n), x, above)?;
    let mass = if above { part } else { -part };
    Ok(GValue {
        by_integral: mass / den,
        by_branches: num / den,
    })
}

/// Extremes of G(n) − g∗(X(n)) over the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceReport {
    pub min_margin: f64,
    pub argmin: f64,
    pub max_margin: f64,
    pub argmax: f64,
    /// Limit of the margin as n → −∞ and n → +∞ (0 when bounded).
    pub limit_neg: f64,
    pub limit_pos: f64,
    /// G ≥ g∗(X) a.s. up to rounding.
    pub lower_hypothesis: bool,
    /// G ≤ g∗(X) a.s. up to rounding.
    pub upper_hypothesis: bool,
    /// Minimum of G(n) − (αX²+βX+γ) with the quadratic extended past the
    /// support; differs from `min_margin` only where X leaves the support.
    pub quadratic_min_margin: f64,
}

/// 4001 uniform points on [−8, 8].
pub fn default_dominance_grid() -> Vec<f64> {
    (0..4001).map(|i| -8.0 + 16.0 * i as f64 / 4000.0).collect()
}

/// Margin G(n) − g∗(X(n)), with g∗ = 0 where X(n) leaves the reference
/// support. The extremes are taken over the grid, all real critical points
/// of each polynomial piece, and the preimages of the support ends; together
/// with the limits at ±∞ this covers the whole line.
pub fn dominance_margin(
    series: &HermiteSeries,
    coeffs: &PearsonCoefficients,
    n_grid: &[f64],
) -> Result<DominanceReport> {
    let law = PearsonLaw::new(coeffs)?;
    let x = series.polynomial();
    let g = malliavin_g(series);
    let gx = Polynomial::new(vec![coeffs.gamma, coeffs.beta, coeffs.alpha]).compose(&x);
    let inside_piece = g.sub(&gx);
    let (a, b) = law.support();
    let margin = |n: f64| {
        let xv = x.eval(n);
        g.eval(n) - law.g_star(xv)
    };
    // rounding scale of the margin at n
    let scale = |n: f64| g.abs_eval(n) + gx.abs_eval(n);

    let mut cands: Vec<f64> = n_grid.to_vec();
    cands.extend(g.derivative().real_roots());
    cands.extend(inside_piece.derivative().real_roots());
    for end in [a, b] {
        if end.is_finite() {
            let xl = PolynomialLaw::new(x.clone());
            for n in xl.preimages(end) {
                cands.extend([n, n.next_down(), n.next_up()]);
            }
            // an end equal to a critical value of X
            for n in x.derivative().real_roots() {
                if (x.eval(n) - end).abs() <= 64.0 * f64::EPSILON * x.abs_eval(n) {
                    cands.extend([n, n.next_down(), n.next_up()]);
                }
            }
        }
    }
    let mut rep = DominanceReport {
        min_margin: f64::INFINITY,
        argmin: f64::NAN,
        max_margin: f64::NEG_INFINITY,
        argmax: f64::NAN,
        limit_neg: 0.0,
        limit_pos: 0.0,
        lower_hypothesis: false,
        upper_hypothesis: false,
        quadratic_min_margin: f64::INFINITY,
    };
    let mut tol: f64 = 0.0;
    for &n in &cands {
        let m = margin(n);
        rep.quadratic_min_margin = rep.quadratic_min_margin.min(inside_piece.eval(n));
        tol = tol.max(64.0 * f64::EPSILON * scale(n));
        if m < rep.min_margin {
            rep.min_margin = m;
            rep.argmin = n;
        }
        if m > rep.max_margin {
            rep.max_margin = m;
            rep.argmax = n;
        }
    }
    // behaviour at ±∞ is that of the piece active there
    let limit = |sign: f64| {
        let xv = x.eval(sign * 1e8);
        let piece = if xv > a && xv < b { &inside_piece } else { &g };
        if piece.degree() == 0 {
            piece.eval(0.0)
        } else {
            let odd = piece.degree() % 2 == 1;
            let s = piece.leading().signum() * if sign < 0.0 && odd { -1.0 } else { 1.0 };
            s * f64::INFINITY
        }
    };
    rep.limit_neg = limit(-1.0);
    rep.limit_pos = limit(1.0);
    for l in [rep.limit_neg, rep.limit_pos] {
        if l < rep.min_margin {
            rep.min_margin = l;
        }
        if l > rep.max_margin {
            rep.max_margin = l;
        }
    }
    rep.lower_hypothesis = rep.min_margin >= -tol;
    rep.upper_hypothesis = rep.max_margin <= tol;
    if inside_piece.degree() == 0 {
        rep.quadratic_min_margin = rep.quadratic_min_margin.min(inside_piece.eval(0.0));
    } else if inside_piece.degree() % 2 == 1 || inside_piece.leading() < 0.0 {
        rep.quadratic_min_margin = f64::NEG_INFINITY;
    }
    Ok(rep)
}

/// E[X·m(X)] − E[m′(X)·G] by a Gauss–Hermite rule exact for the degree of
/// both integrands. Polynomial m goes beyond the bounded-m′ setting of the
/// integration-by-parts lemma.
pub fn ibp_check(series: &HermiteSeries, m: &Polynomial) -> f64 {
    let x = series.polynomial();
    let g = malliavin_g(series);
    let lhs_poly = x.mul(&m.compose(&x));
    let rhs_poly = m.derivative().compose(&x).mul(&g);
    let deg = lhs_poly.degree().max(rhs_poly.degree());
    let gh = GaussHermite::for_degree(deg);
    gh.expect(|n| lhs_poly.eval(n)) - gh.expect(|n| rhs_poly.eval(n))
}

/// E[G] by Gauss–Hermite; equals Var[X].
pub fn expected_g(series: &HermiteSeries) -> f64 {
    let g = malliavin_g(series);
    GaussHermite::for_degree(g.degree()).expect(|n| g.eval(n))
}
