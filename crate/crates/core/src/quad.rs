//! Adaptive Gauss–Kronrod (10/21) quadrature with interval maps for
//! half-infinite and doubly-infinite ranges, plus Gauss–Hermite rules for the
//! standard Gaussian weight.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_651_598,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances and limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
    /// Length scale of the t/(1-t) map on infinite ranges.
    pub scale: f64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 4000,
            scale: 1.0,
        }
    }
}

impl QuadOptions {
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_tol(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl Estimate {
    /// The value, or a [`Error::NonIntegrable`] if the tolerance was not met.
    pub fn ok(self) -> Result<f64> {
        if self.converged && self.value.is_finite() {
            Ok(self.value)
        } else {
            Err(Error::NonIntegrable(format!(
                "estimate {} with error {}",
                self.value, self.error
            )))
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    Panel {
        a,
        b,
        value,
        error: err,
    }
}

/// Globally adaptive GK21 on a finite interval.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadOptions) -> Estimate {
    if a == b {
        return Estimate {
            value: 0.0,
            error: 0.0,
            converged: true,
            evaluations: 0,
        };
    }
    let first = kronrod21(&f, a, b);
    let mut total = first.value;
    let mut err = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut evals = 21;
    while err > opts.abs_tol.max(opts.rel_tol * total.abs()) && heap.len() < opts.max_intervals {
        let worst = match heap.pop() {
            Some(p) => p,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // panel can no longer be split in floating point
            heap.push(worst);
            break;
        }
        let left = kronrod21(&f, worst.a, mid);
        let right = kronrod21(&f, mid, worst.b);
        evals += 42;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed drift from incremental updates
    let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    Estimate {
        value,
        error,
        converged: error <= opts.abs_tol.max(opts.rel_tol * value.abs()) && value.is_finite(),
        evaluations: evals,
    }
}

/// Integral of `f` over `[lo, hi]`, either end possibly infinite.
///
/// Half-infinite ranges use x = lo + scale·t/(1-t); the doubly-infinite range
/// is split at 0.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, opts: QuadOptions) -> Estimate {
    integrate_dyn(&f, lo, hi, opts)
}

fn integrate_dyn(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, opts: QuadOptions) -> Estimate {
    if lo > hi {
        let e = integrate_dyn(f, hi, lo, opts);
        return Estimate { value: -e.value, ..e };
    }
    let w = opts.scale;
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => integrate_finite(f, lo, hi, opts),
        (true, false) => integrate_finite(
            |t| {
                let om = 1.0 - t;
                let x = lo + w * t / om;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v * w / (om * om)
                }
            },
            0.0,
            1.0,
            opts,
        ),
        (false, true) => integrate_finite(
            |t| {
                let om = 1.0 - t;
                let x = hi - w * t / om;
                let v = f(x);
                if v == 0.0 {
                    0.0
                } else {
                    v * w / (om * om)
                }
            },
            0.0,
            1.0,
            opts,
        ),
        (false, false) => {
            let left = integrate_dyn(f, f64::NEG_INFINITY, 0.0, opts);
            let right = integrate_dyn(f, 0.0, f64::INFINITY, opts);
            Estimate {
                value: left.value + right.value,
                error: left.error + right.error,
                converged: left.converged && right.converged,
                evaluations: left.evaluations + right.evaluations,
            }
        }
    }
}

/// Integral over `[a, a + len]` of an integrand that behaves like
/// d^(power - 1) in the offset d = x - a, with 0 < power < 1. `f` receives the
/// offset d rather than x so the endpoint factor can be formed without
/// cancellation. Uses the map d = len·u^(1/power).
pub fn integrate_left_power<F: Fn(f64) -> f64>(f: F, len: f64, power: f64, opts: QuadOptions) -> Estimate {
    if !(power > 0.0 && power < 1.0) {
        return integrate_finite(f, 0.0, len, opts);
    }
    let p = 1.0 / power;
    integrate_finite(
        |u: f64| {
            let d = len * u.powf(p);
            if d <= 0.0 {
                return 0.0;
            }
            f(d) * len * p * u.powf(p - 1.0)
        },
        0.0,
        1.0,
        opts,
    )
}

/// Gauss–Hermite rule for the standard Gaussian probability weight:
/// Σ wᵢ p(xᵢ) = E[p(N)] exactly for polynomials of degree ≤ 2n - 1.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussHermite {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Hermite rule needs at least one node");
        // Jacobi matrix of the probabilists' Hermite recurrence.
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let v = (k as f64).sqrt();
            jac[(k - 1, k)] = v;
            jac[(k, k - 1)] = v;
        }
        let eig = SymmetricEigen::new(jac);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(f64::total_cmp);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            // Newton polish on the orthonormal polynomial h_n
            for _ in 0..3 {
                let (hn, hn1, _) = orthonormal_hermite(n, *x);
                let d = (n as f64).sqrt() * hn1;
                if d != 0.0 {
                    *x -= hn / d;
                }
            }
            let (_, _, christoffel) = orthonormal_hermite(n, *x);
            weights.push(1.0 / christoffel);
        }
        // symmetrize
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let x = 0.5 * (nodes[j] - nodes[i]);
            nodes[i] = -x;
            nodes[j] = x;
            let w = 0.5 * (weights[i] + weights[j]);
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Number of nodes exact for polynomials of the given degree.
    pub fn for_degree(degree: usize) -> Self {
        Self::new(degree / 2 + 1)
    }

    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// (h_n(x), h_{n-1}(x), Σ_{k<n} h_k(x)²) for the orthonormal Hermite family.
fn orthonormal_hermite(n: usize, x: f64) -> (f64, f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    let mut sum = 0.0;
    for k in 0..n {
        sum += cur * cur;
        let kf = k as f64;
        let next = (x * cur - kf.sqrt() * prev) / (kf + 1.0).sqrt();
        prev = cur;
        cur = next;
    }
    (cur, prev, sum)
}
