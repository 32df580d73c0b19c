//! One-dimensional quadrature rules: Gauss–Legendre node generation and a
//! globally adaptive 21-point Gauss–Kronrod integrator.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::sum::CompensatedSum;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    (
        x.iter().map(|t| mid + half * t).collect(),
        w.iter().map(|v| v * half).collect(),
    )
}

// Kronrod abscissae (positive half, descending) and weights; odd indices are
// the embedded 10-point Gauss nodes.
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
    0.123_491_976_262_065_851_077_600_525_355_911,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances for [`integrate`] and [`integrate_many`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            abs: 0.0,
            rel,
            max_intervals: 4000,
        }
    }
}

/// Value and error estimate of an adaptive integration.
#[derive(Debug, Clone, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Same, for a vector-valued integrand.
#[derive(Debug, Clone, PartialEq)]
pub struct VecIntegral {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    values: Vec<f64>,
    errors: Vec<f64>,
    priority: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            // ties broken by position so the refinement order is reproducible
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21<F>(f: &mut F, a: f64, b: f64, k: usize) -> Result<(Vec<f64>, Vec<f64>)>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kron = vec![0.0; k];
    let mut gauss = vec![0.0; k];
    let mut eval = |x: f64| -> Result<Vec<f64>> {
        let v = f(x)?;
        if v.len() != k {
            return Err(Error::Domain(format!(
                "integrand returned {} components, expected {k}",
                v.len()
            )));
        }
        if let Some(bad) = v.iter().find(|y| !y.is_finite()) {
            return Err(Error::Convergence(format!(
                "integrand is not finite ({bad}) at x = {x:e}"
            )));
        }
        Ok(v)
    };
    let fc = eval(center)?;
    for c in 0..k {
        kron[c] = fc[c] * WGK[10];
    }
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        for c in 0..k {
            let s = f1[c] + f2[c];
            kron[c] += WGK[j] * s;
            if j % 2 == 1 {
                gauss[c] += WG[j / 2] * s;
            }
        }
    }
    let values: Vec<f64> = kron.iter().map(|v| v * half).collect();
    let errors: Vec<f64> = kron
        .iter()
        .zip(&gauss)
        .map(|(kv, gv)| ((kv - gv) * half).abs())
        .collect();
    Ok((values, errors))
}

/// Adaptive Gauss–Kronrod integration of a vector-valued function over a
/// finite interval. Every component must meet
/// `error ≤ max(tol.abs, tol.rel·|value|)`.
pub fn integrate_many<F>(mut f: F, k: usize, a: f64, b: f64, tol: Tolerance) -> Result<VecIntegral>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(VecIntegral {
            values: vec![0.0; k],
            errors: vec![0.0; k],
            evaluations: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let (v, e) = gk21(&mut f, a, b, k)?;
    let mut evaluations = 21;
    heap.push(Segment {
        a,
        b,
        values: v,
        errors: e,
        priority: 0.0,
    });

    loop {
        // Totals in a fixed order (sorted by left endpoint) so the result does
        // not depend on heap internals.
        let mut segs: Vec<&Segment> = heap.iter().collect();
        segs.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut totals = vec![CompensatedSum::new(); k];
        let mut errs = vec![0.0; k];
        for s in &segs {
            for c in 0..k {
                totals[c].add(s.values[c]);
                errs[c] += s.errors[c];
            }
        }
        let values: Vec<f64> = totals.iter().map(|t| t.value()).collect();
        let targets: Vec<f64> = values
            .iter()
            .map(|v| tol.abs.max(tol.rel * v.abs()))
            .collect();
        let done = (0..k).all(|c| errs[c] <= targets[c]);
        if done {
            return Ok(VecIntegral {
                values,
                errors: errs,
                evaluations,
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(Error::Convergence(format!(
                "adaptive quadrature on [{a:e}, {b:e}] did not reach tolerance after {} intervals (error {:e})",
                heap.len(),
                errs.iter().cloned().fold(0.0, f64::max)
            )));
        }
        // Re-prioritise against the current targets, then bisect the worst.
        let mut all: Vec<Segment> = heap.drain().collect();
        for s in &mut all {
            s.priority = (0..k)
                .map(|c| {
                    let t = targets[c].max(f64::MIN_POSITIVE);
                    s.errors[c] / t
                })
                .fold(0.0, f64::max);
        }
        heap.extend(all);
        let worst = heap.pop().expect("heap is non-empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            return Err(Error::Convergence(format!(
                "interval around {:e} cannot be subdivided further",
                worst.a
            )));
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (v, e) = gk21(&mut f, lo, hi, k)?;
            evaluations += 21;
            heap.push(Segment {
                a: lo,
                b: hi,
                values: v,
                errors: e,
                priority: 0.0,
            });
        }
    }
}

/// Adaptive Gauss–Kronrod integration of a scalar function over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    let r = integrate_many(|x| Ok(vec![f(x)]), 1, a, b, tol)?;
    Ok(Integral {
        value: r.values[0],
        error: r.errors[0],
        evaluations: r.evaluations,
    })
}

/// Integral over `[a, ∞)` using the map `x = a + t/(1−t)`.
pub fn integrate_to_infinity<F>(mut f: F, a: f64, tol: Tolerance) -> Result<Integral>
where
    F: FnMut(f64) -> f64,
{
    integrate(
        |t| {
            let s = 1.0 - t;
            f(a + t / s) / (s * s)
        },
        0.0,
        1.0,
        tol,
    )
}

/// Periodic trapezoid nodes `2πk/n`, `k = 0..n`.
pub fn periodic_nodes(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}
