//! Special functions needed by the pair kernels and the closed forms.
//!
//! Both functions switch between a power series near the origin and a
//! continued fraction further out. The crossover points keep the series free
//! of cancellation and the continued fractions short.

use crate::error::{domain, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const SERIES_EPS: f64 = 1e-17;
const MAX_ITER: usize = 500;

/// Modified Bessel function of the second kind of order zero, `K₀(x)`.
pub fn bessel_k0(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!("bessel_k0 requires finite x > 0, got {x}")));
    }
    Ok(k0(x))
}

/// `K₀(x)` without argument checks; `x` must be finite and positive.
pub(crate) fn k0(x: f64) -> f64 {
    if x <= 2.0 {
        k0_series(x)
    } else {
        k0_scaled_cf(x) * (-x).exp()
    }
}

/// `K₀(x) = −(ln(x/2) + γ) I₀(x) + Σ_{k≥1} (x²/4)^k H_k / (k!)²`.
fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut harmonic = 0.0;
    let mut tail = 0.0;
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < SERIES_EPS * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

/// `eˣ K₀(x)` for `x > 2` by Steed's evaluation of Temme's continued fraction.
fn k0_scaled_cf(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON * 0.5 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() / s
}

/// Exponential integral `E₁(x) = Γ(0, x) = ∫ₓ^∞ e^{−t}/t dt`.
pub fn exp_integral_e1(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain(format!(
            "exp_integral_e1 requires finite x > 0, got {x}"
        )));
    }
    Ok(e1(x))
}

pub(crate) fn e1(x: f64) -> f64 {
    if x <= 1.0 {
        // −γ − ln x − Σ_{k≥1} (−x)^k / (k·k!)
        let mut term = 1.0;
        let mut acc = 0.0;
        for k in 1..MAX_ITER {
            let kf = k as f64;
            term *= -x / kf;
            let add = term / kf;
            acc += add;
            if add.abs() < SERIES_EPS * acc.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() - acc
    } else {
        // Modified Lentz on e^{−x}/(x+1− 1/(x+3− 4/(x+5− ...)))
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            let an = -fi * fi;
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < f64::EPSILON {
                break;
            }
        }
        h * (-x).exp()
    }
}
