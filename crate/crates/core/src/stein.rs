//! Bounded solutions of the Stein equation g∗(x)f′(x) − x f(x) = h(x) − E[h(Z)]
//! for indicator test functions h = 1{x ≤ z}, with certificates for the sign
//! and magnitude of f′.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::real_json;
use crate::pearson::PearsonLaw;
use crate::quad::{self, QuadOptions};

/// The solution for h = 1{x ≤ z}.
#[derive(Debug, Clone)]
pub struct IndicatorSteinSolution {
    law: PearsonLaw,
    z: f64,
    eh: f64,
    tail_z: f64,
}

/// Solution of the Stein equation for h = 1{x ≤ z}; requires 0 < z < b.
pub fn solve_indicator(law: &PearsonLaw, z: f64) -> Result<IndicatorSteinSolution> {
    IndicatorSteinSolution::new(law, z)
}

/// Side of a one-sided limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl IndicatorSteinSolution {
    pub fn new(law: &PearsonLaw, z: f64) -> Result<Self> {
        if !(z > 0.0 && z < law.b()) {
            return Err(Error::ThresholdOutOfRange { z, b: law.b() });
        }
        Ok(Self {
            law: law.clone(),
            z,
            eh: law.cdf(z),
            tail_z: law.tail(z),
        })
    }

    pub fn law(&self) -> &PearsonLaw {
        &self.law
    }
    pub fn z(&self) -> f64 {
        self.z
    }
    /// E[h(Z)] = P[Z ≤ z].
    pub fn eh(&self) -> f64 {
        self.eh
    }

    /// h(x) = 1{x ≤ z}.
    pub fn h(&self, x: f64) -> f64 {
        if x <= self.z {
            1.0
        } else {
            0.0
        }
    }

    /// f(x). Inside the support f = [F(min(x,z)) − F(z)F(x)]/(g∗ρ∗), formed in
    /// log-space; outside it f = −(h(x) − E h)/x, which is also the value at
    /// finite support ends.
    pub fn f(&self, x: f64) -> f64 {
        let (a, b) = self.law.support();
        if x <= a || x >= b {
            return -(self.h(x) - self.eh) / x;
        }
        let lgr = self.law.log_g_rho(x);
        if x <= self.z {
            (self.tail_z.ln() + self.law.log_cdf(x) - lgr).exp()
        } else {
            (self.eh.ln() + self.law.log_tail(x) - lgr).exp()
        }
    }

    /// f′(x) away from the kinks {z, a, b}.
    pub fn fprime(&self, x: f64) -> Result<f64> {
        let (a, b) = self.law.support();
        if x == self.z || x == a || x == b {
            return Err(Error::EvaluationAtKink(x));
        }
        Ok(self.fprime_branch(x, if x < self.z { Side::Left } else { Side::Right }))
    }

    /// One-sided limit of f′ at x, using the branch of the given side of z.
    pub fn fprime_limit(&self, x: f64, side: Side) -> f64 {
        self.fprime_branch(x, side)
    }

    fn fprime_branch(&self, x: f64, side: Side) -> f64 {
        let (a, b) = self.law.support();
        if x < a || (x == a && side == Side::Left) {
            return self.tail_z / (x * x);
        }
        if x > b || (x == b && side == Side::Right) {
            return -self.eh / (x * x);
        }
        let lgr = self.law.log_g_rho(x);
        let g = self.law.g_star(x);
        match side {
            // (1 − Eh)(x·F/(g∗ρ∗) + 1)/g∗
            Side::Left => self.tail_z * (x * (self.law.log_cdf(x) - lgr).exp() + 1.0) / g,
            // Eh(x·Φ∗/(g∗ρ∗) − 1)/g∗
            Side::Right => self.eh * (x * (self.law.log_tail(x) - lgr).exp() - 1.0) / g,
        }
    }

    // Bound on the rounding error of fprime at an interior x.
    fn fprime_rounding(&self, x: f64) -> f64 {
        let g = self.law.g_star(x);
        if g <= 0.0 {
            return 64.0 * f64::EPSILON * self.fprime_branch(x, Side::Left).abs();
        }
        let mag = (x * self.f(x)).abs() + (self.h(x) - self.eh).abs();
        64.0 * f64::EPSILON * mag / g
    }

    /// Upper bound on f′ for a < x ≤ z: z/(g∗(z)²ρ∗(z)) + 1/Q(0).
    pub fn left_bound(&self) -> f64 {
        let z = self.z;
        z / (self.law.g_star(z) * self.law.log_g_rho(z).exp()) + 1.0 / self.law.q(0.0)
    }

    /// Lower bound on f′ for x > z inside the support: −1/Q(z).
    pub fn right_bound(&self) -> f64 {
        -1.0 / self.law.q(self.z)
    }

    /// max over the grid of |g∗f′ − x f − (h − E h)|, skipping kinks.
    pub fn check_residual(&self, grid: &[f64]) -> f64 {
        let fp = |x: f64| self.fprime(x).unwrap_or(f64::NAN);
        check_residual_general(&self.law, |x| self.f(x), fp, |x| self.h(x), self.eh, grid)
    }

    /// Sign and bound certificate for f′ over the grid. Points within a
    /// relative 1e-9 of z, a or b are dropped.
    pub fn certify_fprime(&self, grid: &[f64]) -> Certificate {
        let (a, b) = self.law.support();
        let near = |x: f64, p: f64| p.is_finite() && (x - p).abs() <= 1e-9 * p.abs().max(1.0);
        let pts: Vec<f64> = grid
            .iter()
            .copied()
            .filter(|&x| !(near(x, self.z) || near(x, a) || near(x, b)))
            .collect();
        let left_bound = self.left_bound();
        let right_bound = self.right_bound();
        let uniform = left_bound;
        let mut c = Certificate {
            z: self.z,
            points: pts.len(),
            residual_max: self.check_residual(&pts),
            sign_violations: 0,
            min_left: f64::INFINITY,
            min_right: f64::INFINITY,
            min_uniform: f64::INFINITY,
            left_bound,
            right_bound,
            worst_left_x: f64::NAN,
            worst_right_x: f64::NAN,
            passed: false,
        };
        for &x in &pts {
            let d = match self.fprime(x) {
                Ok(d) => d,
                Err(_) => continue,
            };
            let tol = self.fprime_rounding(x);
            let inside = x > a && x < b;
            if x <= self.z {
                if d < -tol {
                    c.sign_violations += 1;
                }
                if inside {
                    let m = (left_bound - d).min(d + tol);
                    if m < c.min_left {
                        c.min_left = m;
                        c.worst_left_x = x;
                    }
                }
            } else {
                if d > tol {
                    c.sign_violations += 1;
                }
                if inside {
                    let m = (d - right_bound).min(tol - d);
                    if m < c.min_right {
                        c.min_right = m;
                        c.worst_right_x = x;
                    }
                }
            }
            if inside {
                c.min_uniform = c.min_uniform.min(uniform - d.abs());
            }
        }
        c.passed = c.sign_violations == 0
            && c.min_left >= 0.0
            && c.min_right >= 0.0
            && c.min_uniform >= 0.0
            && c.residual_max.is_finite();
        c
    }
}

/// Result of [`IndicatorSteinSolution::certify_fprime`]. Margins are the
/// distance to the violated side; ∞ when no grid point fell in that region.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub z: f64,
    pub points: usize,
    pub residual_max: f64,
    pub sign_violations: usize,
    /// min over interior x ≤ z of the margin in 0 ≤ f′ ≤ left_bound.
    pub min_left: f64,
    /// min over interior x > z of the margin in right_bound ≤ f′ ≤ 0.
    pub min_right: f64,
    /// min over interior x of left_bound − |f′|.
    pub min_uniform: f64,
    pub left_bound: f64,
    pub right_bound: f64,
    pub worst_left_x: f64,
    pub worst_right_x: f64,
    pub passed: bool,
}

impl Certificate {
    pub fn to_json(&self, law: &PearsonLaw, grid_spec: &str) -> Value {
        json!({
            "law": law.to_json(),
            "z": real_json(self.z),
            "grid_spec": grid_spec,
            "points": self.points,
            "residual_max": real_json(self.residual_max),
            "sign_violations": self.sign_violations,
            "bound_margins": {
                "min_left": real_json(self.min_left),
                "min_right": real_json(self.min_right),
                "min_uniform": real_json(self.min_uniform),
            },
            "left_bound": real_json(self.left_bound),
            "right_bound": real_json(self.right_bound),
            "passed": self.passed,
        })
    }
}

/// max over the grid of |g∗f′ − x f − (h − eh)| for any test function h with
/// known mean `eh`. Points where `fprime` is not finite are skipped.
pub fn check_residual_general<F, D, H>(law: &PearsonLaw, f: F, fprime: D, h: H, eh: f64, grid: &[f64]) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
    H: Fn(f64) -> f64,
{
    grid.iter()
        .filter_map(|&x| {
            let d = fprime(x);
            d.is_finite()
                .then(|| (law.g_star(x) * d - x * f(x) - (h(x) - eh)).abs())
        })
        .fold(0.0, f64::max)
}

/// E[g∗(Z)f′(Z) − Z f(Z)], which vanishes for every smooth bounded f.
pub fn stein_identity_defect<F, D>(law: &PearsonLaw, f: F, fprime: D) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    law.expect(|x| law.g_star(x) * fprime(x) - x * f(x))
}

/// ∫₀^{b−ε} x/g∗(x) dx, with b − ε read as 1/ε when b = ∞.
pub fn divergence_integral(law: &PearsonLaw, eps: f64) -> Result<f64> {
    let b = law.b();
    let upper = if b.is_finite() { b - eps } else { 1.0 / eps };
    if !(upper > 0.0) {
        return Err(Error::InsufficientRange(format!("upper limit {upper} is not positive")));
    }
    let opts = QuadOptions::default().with_tol(1e-12, 1e-10);
    let e = if b.is_finite() {
        // integrand ~ 1/(b − x): integrate in u = ln(b − x)
        quad::integrate_finite(
            |u: f64| {
                let d = u.exp();
                let x = b - d;
                x / law.g_star(x) * d
            },
            eps.ln(),
            b.ln(),
            opts,
        )
    } else {
        quad::integrate_finite(
            |u: f64| {
                let x = u.exp();
                x / law.g_star(x) * x
            },
            (1e-300f64).ln().max(-700.0),
            upper.ln(),
            opts,
        )
    };
    e.ok()
}
