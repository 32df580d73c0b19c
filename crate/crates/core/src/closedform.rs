//! Analytic results used as oracles for the quadrature engine.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::geometry::sphere_point_distance;
use crate::kernels::{proca_zeta, vector_h};
use crate::quadrature::{gauss_legendre, integrate_to_infinity, periodic_nodes, Tolerance};
use crate::special::{e1, EULER_GAMMA};
use crate::sum::CompensatedSum;
use crate::susceptibility::SusceptibilityModel;

/// Two sphere shells of radii `a`, `b` with centres `R` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePairGeometry {
    pub a: f64,
    pub b: f64,
    pub big_r: f64,
}

impl SpherePairGeometry {
    pub fn new(a: f64, b: f64, big_r: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0 && big_r.is_finite() && a.is_finite() && b.is_finite()) {
            return Err(domain(format!("radii must be finite and > 0, got a = {a}, b = {b}")));
        }
        if !(big_r > a + b) {
            return Err(Error::Overlap {
                separation: (big_r - a - b).max(0.0),
            });
        }
        Ok(Self { a, b, big_r })
    }

    pub fn a_hat(&self) -> f64 {
        self.a / self.big_r
    }

    pub fn b_hat(&self) -> f64 {
        self.b / self.big_r
    }
}

fn check_hats(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b > 0.0 && a + b < 1.0) {
        return Err(domain(format!("need â, b̂ > 0 and â + b̂ < 1, got {a}, {b}")));
    }
    Ok(())
}

/// `−T Σ_{l≥1} 2χ₁χ₂/ν_l · e^{−2ν_l r} sinh(2ν_l r′) sinh(2ν_l r″)`.
pub fn force_1d_finite_t(
    r: f64,
    rp: f64,
    rpp: f64,
    chi1: &SusceptibilityModel,
    chi2: &SusceptibilityModel,
    temperature: f64,
) -> Result<f64> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(domain(format!("temperature must be > 0, got {temperature}")));
    }
    if !(rp >= 0.0 && rpp >= 0.0) {
        return Err(domain("half-widths must be >= 0"));
    }
    let gap = r - rp - rpp;
    if !(gap > 0.0) {
        return Err(Error::Convergence(format!(
            "Matsubara sum diverges for overlapping intervals (r − r′ − r″ = {gap})"
        )));
    }
    let mut acc = CompensatedSum::new();
    for l in 1..10_000_000usize {
        let nu = 2.0 * PI * temperature * l as f64;
        let s1 = -(-4.0 * nu * rp).exp_m1() * 0.5;
        let s2 = -(-4.0 * nu * rpp).exp_m1() * 0.5;
        let term = 2.0 * chi1.at_imag(nu) * chi2.at_imag(nu) / nu * (-2.0 * nu * gap).exp() * s1 * s2;
        acc.add(term);
        // remaining terms are bounded by a geometric series in e^{−4πT·gap}
        let q = (-4.0 * PI * temperature * gap).exp();
        if term.abs() * q / (1.0 - q) <= 1e-17 * acc.value().abs() || term == 0.0 {
            return Ok(-temperature * acc.value());
        }
    }
    Err(Error::Convergence("1D force sum did not converge".into()))
}

fn check_order(a: f64, b: f64, c: f64, d: f64) -> Result<()> {
    if !(a < b && b < c && c < d) {
        return Err(domain(format!(
            "intervals must satisfy a < b < c < d, got {a}, {b}, {c}, {d}"
        )));
    }
    Ok(())
}

/// Zero-temperature 1D force for constant susceptibilities:
/// `−(χ₁χ₂/4π) ln[(c−a)(d−b) / ((c−b)(d−a))]`.
///
/// This is the `ν₀ → 0` limit of [`force_1d_above_cutoff`].
pub fn force_1d_zero_t(a: f64, b: f64, c: f64, d: f64, chi1: f64, chi2: f64) -> Result<f64> {
    check_order(a, b, c, d)?;
    let ratio = ((c - a) * (d - b)) / ((c - b) * (d - a));
    Ok(-chi1 * chi2 / (4.0 * PI) * ratio.ln())
}

/// Zero-temperature 1D force from frequencies above `ν₀` only:
/// `−(χ₁χ₂/4π)[Γ(0,2ν₀(c−b)) + Γ(0,2ν₀(d−a)) − Γ(0,2ν₀(c−a)) − Γ(0,2ν₀(d−b))]`.
pub fn force_1d_above_cutoff(a: f64, b: f64, c: f64, d: f64, chi1: f64, chi2: f64, nu0: f64) -> Result<f64> {
    check_order(a, b, c, d)?;
    if !(nu0 > 0.0) {
        return Err(domain(format!("cutoff must be > 0, got {nu0}")));
    }
    let g = |x: f64| e1(2.0 * nu0 * x);
    Ok(-chi1 * chi2 / (4.0 * PI) * (g(c - b) + g(d - a) - g(c - a) - g(d - b)))
}

/// The incomplete-gamma force expression with bare lengths as arguments,
/// `−(χ₁χ₂/2π)(Γ[0,d−a] + Γ[0,c−b] − Γ[0,d−b] − Γ[0,c−a])`.
/// Equals `2 ·` [`force_1d_above_cutoff`] at `ν₀ = 1/2`.
pub fn force_1d_zero_t_uncorrected(a: f64, b: f64, c: f64, d: f64, chi1: f64, chi2: f64) -> Result<f64> {
    check_order(a, b, c, d)?;
    Ok(-chi1 * chi2 / (2.0 * PI) * (e1(d - a) + e1(c - b) - e1(d - b) - e1(c - a)))
}

/// Two rings in the plane with the static 2D kernel:
/// `−χ₁χ₂ab/(8π) / √((R² − (a−b)²)(R² − (a+b)²))`.
pub fn energy_rings_2d(a: f64, b: f64, big_r: f64, chi1: f64, chi2: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain("ring radii must be > 0"));
    }
    let rad = (big_r * big_r - (a - b).powi(2)) * (big_r * big_r - (a + b).powi(2));
    if !(big_r > a + b) || !(rad > 0.0) {
        return Err(Error::Overlap {
            separation: (big_r - a - b).max(0.0),
        });
    }
    // grouped so that swapping (a, χ₁) with (b, χ₂) is exact
    Ok(-(chi1 * chi2) * (a * b) / (8.0 * PI) / rad.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogVariant {
    /// `ln[(1 − (a−b)²/R²)/(1 − (a+b)²/R²)]`
    #[default]
    Corrected,
    /// `ln[(1 − (a−b)²/R²)/(1 + (a+b)²/R²)]`
    Uncorrected,
}

/// Two scalar sphere shells at zero temperature:
/// `−χ₁χ₂ab/(16πR) · ln[…]` with the chosen denominator sign.
pub fn energy_spheres_3d_scalar(geom: &SpherePairGeometry, chi1: f64, chi2: f64, variant: LogVariant) -> f64 {
    let (a, b, r) = (geom.a, geom.b, geom.big_r);
    let num = 1.0 - (a - b).powi(2) / (r * r);
    let den = match variant {
        LogVariant::Corrected => 1.0 - (a + b).powi(2) / (r * r),
        LogVariant::Uncorrected => 1.0 + (a + b).powi(2) / (r * r),
    };
    -(chi1 * chi2) * (a * b) / (16.0 * PI * r) * (num / den).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThermalKernelVariant {
    /// `T coth(2πTr)/(32π² r²)`, the half-weighted Matsubara sum.
    #[default]
    Corrected,
    /// `T coth(2πTr)/(32π² r)`.
    Uncorrected,
}

/// Finite-temperature 3D scalar kernel for constant susceptibilities.
pub fn scalar_3d_thermal_kernel(temperature: f64, r: f64, variant: ThermalKernelVariant) -> f64 {
    let c = 1.0 / (2.0 * PI * temperature * r).tanh();
    let pow = match variant {
        ThermalKernelVariant::Corrected => r * r,
        ThermalKernelVariant::Uncorrected => r,
    };
    temperature * c / (32.0 * PI * PI * pow)
}

/// Partial sum of a series with a convergence flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub converged: bool,
}

/// Legendre-type series for `P_p(â, b̂)`:
/// `Σ_n 2/(2n+2)! · Γ(2n−p−1)/Γ(−p−1) · Q_n`,
/// `Q_n = ½ Σ_{m≤n} C(2n+2, 2m+1) â^{2(n−m)} b̂^{2m}`.
#[allow(non_snake_case)]
pub fn legendre_series_P(p: i32, a: f64, b: f64, n_terms: usize) -> Result<SeriesValue> {
    if p > -2 {
        return Err(domain(format!("series form needs p <= -2, got {p}")));
    }
    if !(a >= 0.0 && b >= 0.0 && a + b < 1.0) {
        return Err(domain(format!("need â, b̂ >= 0 and â + b̂ < 1, got {a}, {b}")));
    }
    let q = -(p as f64) - 1.0;
    let mut coef = 1.0; // 2/(2n+2)! · (q)_{2n} at n = 0
    let mut acc = CompensatedSum::new();
    let mut small_run = 0;
    let mut converged = false;
    let (a2, b2) = (a * a, b * b);
    for n in 0..=n_terms {
        if n > 0 {
            let nf = n as f64;
            coef *= (q + 2.0 * nf - 2.0) * (q + 2.0 * nf - 1.0) / ((2.0 * nf + 1.0) * (2.0 * nf + 2.0));
        }
        // Q_n with binomials built incrementally: C(2n+2, 2m+1)
        let big = 2 * n + 2;
        let mut binom = big as f64; // m = 0
        let mut qn = 0.0;
        let mut a_pow = a2.powi(n as i32);
        let mut b_pow = 1.0;
        for m in 0..=n {
            if m > 0 {
                let k = (2 * m) as f64; // C(N, k+1) from C(N, k-1)
                binom *= (big as f64 - k + 1.0) * (big as f64 - k) / (k * (k + 1.0));
                b_pow *= b2;
                a_pow = if a2 > 0.0 { a_pow / a2 } else { a2.powi((n - m) as i32) };
            }
            qn += binom * a_pow * b_pow;
        }
        let term = coef * 0.5 * qn;
        acc.add(term);
        if term.abs() <= 1e-17 * acc.value().abs() {
            small_run += 1;
            if small_run >= 3 {
                converged = true;
                break;
            }
        } else {
            small_run = 0;
        }
    }
    Ok(SeriesValue {
        value: acc.value(),
        converged,
    })
}

/// One term `coef · xᵏ · (ln x)^{log}` of a generating function.
#[derive(Debug, Clone, Copy, PartialEq)]
struct GenTerm {
    coef: f64,
    power: i32,
    log: bool,
}

/// `F_{p−1} = [(p+3)F_p − (x−1)F_p′]/(1+p)`, with terms that the double
/// difference in `x = 1 ± â ± b̂` annihilates (constants and `x`) dropped.
fn recursion_step(f: &[GenTerm], p: i32) -> Vec<GenTerm> {
    let mut out: Vec<GenTerm> = Vec::new();
    let mut push = |t: GenTerm| {
        if t.coef == 0.0 || (!t.log && (t.power == 0 || t.power == 1)) {
            return;
        }
        if let Some(e) = out.iter_mut().find(|e| e.power == t.power && e.log == t.log) {
            e.coef += t.coef;
        } else {
            out.push(t);
        }
    };
    let scale = 1.0 / (1.0 + p as f64);
    for t in f {
        push(GenTerm {
            coef: scale * (p as f64 + 3.0) * t.coef,
            ..*t
        });
        // derivative terms of coef·xᵏ (ln x)^log
        let mut deriv = vec![GenTerm {
            coef: t.coef * t.power as f64,
            power: t.power - 1,
            log: t.log,
        }];
        if t.log {
            deriv.push(GenTerm {
                coef: t.coef,
                power: t.power - 1,
                log: false,
            });
        }
        // −(x − 1)·F′ = −x·F′ + F′
        for d in deriv {
            push(GenTerm {
                coef: -scale * d.coef,
                power: d.power + 1,
                log: d.log,
            });
            push(GenTerm {
                coef: scale * d.coef,
                ..d
            });
        }
    }
    out.retain(|t| t.coef != 0.0);
    out
}

fn eval_generator(f: &[GenTerm], a: f64, b: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
        let x: f64 = 1.0 + s1 * a + s2 * b;
        for t in f {
            let mut v = t.coef * x.powi(t.power);
            if t.log {
                v *= x.ln();
            }
            acc.add(s1 * s2 * v);
        }
    }
    acc.value() / (4.0 * a * b)
}

const SMALL_SHELL_PRODUCT: f64 = 1e-6;

/// `P_p(â, b̂)` from the downward recursion
/// `P_{p−1} = R^{−p}/(1+p) ∂_R[R^{p+1} P_p]` at fixed `a`, `b`.
///
/// `P_p` is carried as a generating function `F_p(x)` with
/// `P_p = (1/4âb̂) Σ_{σ₁σ₂} σ₁σ₂ F_p(1 + σ₁â + σ₂b̂)`; in that form the
/// `R`-derivative becomes the step in [`recursion_step`]. The step from
/// `P₋₁` divides by `1 + p = 0`, so the descent starts from the limit
/// `F₋₂ = x ln x`.
#[allow(non_snake_case)]
pub fn recursion_P(p_target: i32, a: f64, b: f64) -> Result<f64> {
    if p_target > -1 {
        return Err(domain(format!("recursion covers p <= -1, got {p_target}")));
    }
    if !(a >= 0.0 && b >= 0.0 && a + b < 1.0) {
        return Err(domain(format!("need â, b̂ >= 0 and â + b̂ < 1, got {a}, {b}")));
    }
    if p_target == -1 {
        return Ok(1.0);
    }
    if a == 0.0 || b == 0.0 {
        // point limit of the shell average
        return Ok(pointlike_limit(p_target, a.max(b)));
    }
    if a * b < SMALL_SHELL_PRODUCT {
        // the double difference cancels to O(âb̂); the series is exact here
        return Ok(legendre_series_P(p_target, a, b, 200)?.value);
    }
    let mut f = vec![GenTerm {
        coef: 1.0,
        power: 1,
        log: true,
    }];
    let mut p = -2;
    while p > p_target {
        f = recursion_step(&f, p);
        p -= 1;
    }
    Ok(eval_generator(&f, a, b))
}

/// `P_p(â, 0)`: average of `|x − x′|^p/R^p` over one shell.
fn pointlike_limit(p: i32, a: f64) -> f64 {
    if a == 0.0 {
        return 1.0;
    }
    // (1/2)∫_{-1}^{1} (1 + a² − 2au)^{p/2} du
    let e = p as f64 / 2.0 + 1.0;
    let (hi, lo) = ((1.0 + a) * (1.0 + a), (1.0 - a) * (1.0 - a));
    if e == 0.0 {
        (hi / lo).ln() / (4.0 * a)
    } else {
        (hi.powf(e) - lo.powf(e)) / (4.0 * a * e)
    }
}

/// `(1/8π) ∫du ∫du′ ∫dψ |x − x′|^p / R^p` over two unit-normalised shells,
/// Gauss–Legendre in `cos θ`, `cos θ′` and trapezoid in `φ − φ′`.
pub fn angular_average_quadrature(p: i32, a: f64, b: f64, n: usize) -> Result<f64> {
    check_hats(a, b)?;
    if n == 0 {
        return Err(domain("quadrature order must be >= 1"));
    }
    let (u, w) = gauss_legendre(n);
    let psis = periodic_nodes(2 * n);
    let wpsi = 2.0 * PI / psis.len() as f64;
    let mut acc = CompensatedSum::new();
    for (ui, wi) in u.iter().zip(&w) {
        let ti = ui.acos();
        for (uj, wj) in u.iter().zip(&w) {
            let tj = uj.acos();
            let mut inner = CompensatedSum::new();
            for psi in &psis {
                let d = sphere_point_distance(1.0, a, b, ti, tj, *psi, 0.0)?;
                inner.add(d.powi(p));
            }
            acc.add(wi * wj * wpsi * inner.value());
        }
    }
    Ok(acc.value() / (8.0 * PI))
}

/// Uncorrected `P₋₇` with the `52(â²+b̂²−44)` grouping.
pub fn uncorrected_p_minus_7(a: f64, b: f64) -> f64 {
    uncorrected_p7(a, b, false)
}

/// `P₋₇` with the grouping read as `52(â²+b̂²) − 44`.
pub fn uncorrected_p_minus_7_regrouped(a: f64, b: f64) -> f64 {
    uncorrected_p7(a, b, true)
}

fn uncorrected_p7(a: f64, b: f64, regroup: bool) -> f64 {
    let (a2, b2) = (a * a, b * b);
    let s = a2 + b2;
    let dm = a2 - b2;
    let den = 10.0 * (a2 * a2 + (b2 - 1.0).powi(2) - 2.0 * a2 * (b2 + 1.0)).powi(4);
    let mid = if regroup { 52.0 * s - 44.0 } else { 52.0 * (s - 44.0) };
    let first = -2.0 * dm.powi(4) * (s - 5.0) + dm * dm * (mid - 24.0 * s * s);
    let second = 2.0 * (5.0 - 5.0 * s + 8.0 * s * s - 4.0 * s * s * s);
    (first + second) / den
}

/// Uncorrected `P₋₆`:
/// `(1/4âb̂)[1/(â−b̂−1)³ − 1/(â+b̂−1)³ − 1/(â−b̂+1)³ + 1/(â+b̂+1)³]`.
pub fn uncorrected_p_minus_6(a: f64, b: f64) -> f64 {
    let c = |x: f64| 1.0 / (x * x * x);
    (c(a - b - 1.0) - c(a + b - 1.0) - c(a - b + 1.0) + c(a + b + 1.0)) / (4.0 * a * b)
}

/// EM interaction of two sphere shells,
/// `−23χ₁χ₂a²b²/(4πR⁷)·P₋₇` plus, for `T > 0`, `−6Tχ₁χ₂a²b²/R⁶·P₋₆`.
/// Both `P` values come from [`recursion_P`].
pub fn energy_em_spheres(geom: &SpherePairGeometry, chi1: f64, chi2: f64, temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0 && temperature.is_finite()) {
        return Err(domain(format!("temperature must be finite and >= 0, got {temperature}")));
    }
    let (a, b, r) = (geom.a, geom.b, geom.big_r);
    let (ah, bh) = (geom.a_hat(), geom.b_hat());
    let pref = (chi1 * chi2) * ((a * a) * (b * b));
    let mut e = -23.0 * pref / (4.0 * PI * r.powi(7)) * recursion_P(-7, ah, bh)?;
    if temperature > 0.0 {
        e -= 6.0 * temperature * pref / r.powi(6) * recursion_P(-6, ah, bh)?;
    }
    Ok(e)
}

/// Zero-temperature form of [`energy_em_spheres`].
pub fn energy_em_spheres_zero_t(geom: &SpherePairGeometry, chi1: f64, chi2: f64) -> Result<f64> {
    energy_em_spheres(geom, chi1, chi2, 0.0)
}

/// Terms of the small-volume Proca expansion and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcaSeries {
    pub value: f64,
    /// Contributions of `m⁰ … m^{n−1}`, each including the overall prefactor.
    pub terms: Vec<f64>,
    /// False when some term is larger in magnitude than its predecessor.
    pub decreasing: bool,
}

/// Small-volume expansion of the Proca interaction in powers of `m`:
/// `−χ₁χ₂V₁V₂/π³ [23/(64R⁷) − m·3/(16R⁶) + m²·3/(64R⁵)(−3 + 2γ + 2 ln R)
/// + m³/(48R⁴) + m⁴·6/R³(−1 + 4γ + 4 ln R)]`.
pub fn proca_smallvolume_series(
    v1: f64,
    v2: f64,
    big_r: f64,
    chi1: f64,
    chi2: f64,
    mass: f64,
    n_terms: usize,
) -> Result<ProcaSeries> {
    if !(1..=5).contains(&n_terms) {
        return Err(domain(format!("n_terms must be in 1..=5, got {n_terms}")));
    }
    if !(big_r > 0.0 && mass >= 0.0 && v1 >= 0.0 && v2 >= 0.0) {
        return Err(domain("need R > 0, m >= 0 and non-negative volumes"));
    }
    let r = big_r;
    let g = EULER_GAMMA;
    let ln_r = r.ln();
    let bracket = [
        23.0 / (64.0 * r.powi(7)),
        -mass * 3.0 / (16.0 * r.powi(6)),
        mass.powi(2) * 3.0 / (64.0 * r.powi(5)) * (-3.0 + 2.0 * g + 2.0 * ln_r),
        mass.powi(3) / (48.0 * r.powi(4)),
        mass.powi(4) * 6.0 / r.powi(3) * (-1.0 + 4.0 * g + 4.0 * ln_r),
    ];
    let pref = -chi1 * chi2 * v1 * v2 / (PI * PI * PI);
    let terms: Vec<f64> = bracket[..n_terms].iter().map(|t| pref * t).collect();
    let decreasing = terms.windows(2).all(|w| w[1].abs() <= w[0].abs());
    Ok(ProcaSeries {
        value: terms.iter().sum(),
        terms,
        decreasing,
    })
}

/// Two point-like bodies in a Proca field at zero temperature by direct
/// frequency quadrature, `−χ₁χ₂V₁V₂ (1/2π)∫_m^∞ h(ζ, R) dν`.
pub fn proca_point_energy_quadrature(
    v1: f64,
    v2: f64,
    big_r: f64,
    chi1: f64,
    chi2: f64,
    mass: f64,
) -> Result<f64> {
    if !(big_r > 0.0 && mass >= 0.0) {
        return Err(domain("need R > 0 and m >= 0"));
    }
    let int = integrate_to_infinity(
        |nu| proca_zeta(nu, mass).map_or(0.0, |z| vector_h(z, big_r)),
        mass,
        Tolerance {
            abs: 0.0,
            rel: 1e-13,
            max_intervals: 4000,
        },
    )?;
    Ok(-chi1 * chi2 * v1 * v2 * int.value / (2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn ring_examples() {
        let e = energy_rings_2d(1.0, 1.0, 4.0, 1.0, 1.0).unwrap();
        assert!(rel(e, -1.0 / (8.0 * PI * 192f64.sqrt())) < 1e-15);
        let small = energy_rings_2d(1e-8, 1.0, 4.0, 1.0, 1.0).unwrap();
        let smaller = energy_rings_2d(5e-9, 1.0, 4.0, 1.0, 1.0).unwrap();
        assert!(rel(small, 2.0 * smaller) < 1e-7);
        assert!(energy_rings_2d(1.0, 1.0, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn ring_closed_form_matches_angular_quadrature() {
        // Periodic trapezoid in both angles converges geometrically.
        let (a, b, r) = (0.5, 0.7, 3.0);
        let n = 128;
        let th = periodic_nodes(n);
        let mut acc = CompensatedSum::new();
        for t in &th {
            for tp in &th {
                let den = r * r + a * a + b * b - 2.0 * a * r * t.cos() + 2.0 * b * r * tp.cos()
                    - 2.0 * a * b * (t - tp).cos();
                acc.add(1.0 / den);
            }
        }
        let w = (2.0 * PI / n as f64).powi(2);
        let e = -a * b / (32.0 * PI * PI * PI) * w * acc.value();
        assert!(rel(e, energy_rings_2d(a, b, r, 1.0, 1.0).unwrap()) < 1e-12);
    }

    #[test]
    fn sphere_log_variants_and_power_law() {
        let g = SpherePairGeometry::new(0.5, 0.5, 3.0).unwrap();
        let c = energy_spheres_3d_scalar(&g, 1.0, 1.0, LogVariant::Corrected);
        let p = energy_spheres_3d_scalar(&g, 1.0, 1.0, LogVariant::Uncorrected);
        assert!(c < 0.0);
        assert!(p > 0.0);
        // large-R slope −3
        let e = |r: f64| {
            energy_spheres_3d_scalar(&SpherePairGeometry::new(0.5, 0.3, r).unwrap(), 1.0, 1.0, LogVariant::Corrected)
        };
        let slope = (e(2000.0).abs().ln() - e(1000.0).abs().ln()) / 2f64.ln();
        assert!((slope + 3.0).abs() < 1e-5);
        let pt = -0.25 * 0.09 / (4.0 * PI * 1000f64.powi(3));
        assert!(rel(e(1000.0), pt) < 1e-5);
    }

    #[test]
    fn point_limit_of_p_is_one() {
        for p in -7..=-2 {
            let s = legendre_series_P(p, 0.0, 0.0, 10).unwrap();
            assert_eq!(s.value, 1.0);
            assert_eq!(recursion_P(p, 0.0, 0.0).unwrap(), 1.0);
        }
        assert_eq!(recursion_P(-1, 0.3, 0.2).unwrap(), 1.0);
    }

    #[test]
    fn recursion_seed_is_p_minus_two() {
        // P₋₂ from the seed against the direct limit formula.
        let (a, b) = (0.2, 0.3);
        let f = |x: f64| x * x.ln();
        let direct = (f(1.0 + a + b) - f(1.0 + a - b) - f(1.0 - a + b) + f(1.0 - a - b)) / (4.0 * a * b);
        assert!(rel(recursion_P(-2, a, b).unwrap(), direct) < 1e-14);
        // P₋₃ is the sign-corrected log form
        let p3 = ((1.0 - (a - b).powi(2)) / (1.0 - (a + b).powi(2))).ln() / (4.0 * a * b);
        assert!(rel(recursion_P(-3, a, b).unwrap(), p3) < 1e-13);
    }

    #[test]
    fn series_recursion_and_quadrature_agree() {
        for p in -7..=-2 {
            for (a, b) in [(0.05, 0.1), (0.2, 0.3), (0.3, 0.3)] {
                let s = legendre_series_P(p, a, b, 400).unwrap();
                assert!(s.converged);
                let r = recursion_P(p, a, b).unwrap();
                let q = angular_average_quadrature(p, a, b, 48).unwrap();
                assert!(rel(s.value, r) < 1e-12, "p={p} ({a},{b}): {} vs {r}", s.value);
                assert!(rel(q, r) < 1e-11, "p={p} ({a},{b}): {q} vs {r}");
            }
            // both sides of the small-shell switch
            for (a, b) in [(1e-3, 1.01e-3), (1e-3, 0.99e-3)] {
                let s = legendre_series_P(p, a, b, 400).unwrap().value;
                assert!(rel(recursion_P(p, a, b).unwrap(), s) < 1e-9);
            }
        }
    }

    #[test]
    fn uncorrected_forms_against_recursion() {
        let (a, b) = (0.2, 0.3);
        let p7 = recursion_P(-7, a, b).unwrap();
        assert!(rel(uncorrected_p_minus_7_regrouped(a, b), p7) < 1e-13);
        assert!(rel(uncorrected_p_minus_7(a, b), p7) > 1e-2);
        let p6 = recursion_P(-6, a, b).unwrap();
        assert!(rel(uncorrected_p_minus_6(a, b), 12.0 * p6) < 1e-12);
    }

    #[test]
    fn em_sphere_limits() {
        let g = SpherePairGeometry::new(1e-4, 1e-4, 1.0).unwrap();
        let e = energy_em_spheres(&g, 1.0, 1.0, 0.0).unwrap();
        // P₋₇ = 1 + 3.5·2(â² + b̂²) + …
        assert!(rel(e, -23.0 * 1e-16 / (4.0 * PI) * (1.0 + 1.4e-7)) < 1e-12);
        assert_eq!(energy_em_spheres(&g, 0.0, 1.0, 0.3).unwrap(), 0.0);
        let g = SpherePairGeometry::new(0.2, 0.3, 1.5).unwrap();
        assert!(energy_em_spheres(&g, 1.0, 1.0, 0.5).unwrap() < energy_em_spheres(&g, 1.0, 1.0, 0.0).unwrap());
    }

    #[test]
    fn relabeling_symmetry() {
        let g = SpherePairGeometry::new(0.2, 0.35, 1.7).unwrap();
        let h = SpherePairGeometry::new(0.35, 0.2, 1.7).unwrap();
        assert_eq!(
            energy_spheres_3d_scalar(&g, 0.3, 0.7, LogVariant::Corrected),
            energy_spheres_3d_scalar(&h, 0.7, 0.3, LogVariant::Corrected)
        );
        assert!(rel(energy_em_spheres(&g, 0.3, 0.7, 0.2).unwrap(), energy_em_spheres(&h, 0.7, 0.3, 0.2).unwrap()) < 1e-13);
        assert_eq!(energy_rings_2d(0.2, 0.5, 2.0, 1.0, 2.0).unwrap(), energy_rings_2d(0.5, 0.2, 2.0, 2.0, 1.0).unwrap());
    }

    #[test]
    fn one_d_zero_t_forms() {
        let (a, b, c, d) = (0.0, 1.0, 2.0, 4.0);
        assert!(force_1d_zero_t(a, a + 1e-12, c, d, 1.0, 1.0).unwrap().abs() < 1e-12);
        let uncorrected = force_1d_zero_t_uncorrected(a, b, c, d, 1.0, 1.0).unwrap();
        let half = force_1d_above_cutoff(a, b, c, d, 1.0, 1.0, 0.5).unwrap();
        assert!(rel(uncorrected, 2.0 * half) < 1e-14);
        let tiny = force_1d_above_cutoff(a, b, c, d, 1.0, 1.0, 1e-9).unwrap();
        assert!(rel(tiny, force_1d_zero_t(a, b, c, d, 1.0, 1.0).unwrap()) < 1e-7);
    }

    #[test]
    fn one_d_finite_t_force() {
        let c = SusceptibilityModel::constant(1.0).unwrap();
        assert_eq!(force_1d_finite_t(2.0, 0.5, 0.0, &c, &c, 1.0).unwrap(), 0.0);
        assert!(force_1d_finite_t(2.0, 0.5, 0.5, &c, &c, 1.0).unwrap() < 0.0);
        assert!(force_1d_finite_t(1.0, 0.5, 0.5, &c, &c, 1.0).is_err());
    }

    #[test]
    fn proca_series_structure() {
        let s = proca_smallvolume_series(1.0, 1.0, 2.0, 1.0, 1.0, 0.0, 5).unwrap();
        assert!(rel(s.value, -23.0 / (64.0 * PI * PI * PI * 2f64.powi(7))) < 1e-15);
        let s = proca_smallvolume_series(1.0, 1.0, 2.0, 1.0, 1.0, 0.05, 2).unwrap();
        assert!(s.terms[1] > 0.0);
        let q = proca_point_energy_quadrature(1.0, 1.0, 2.0, 1.0, 1.0, 0.0).unwrap();
        assert!(rel(q, -23.0 / (64.0 * PI * PI * PI * 2f64.powi(7))) < 1e-12);
        assert!(proca_smallvolume_series(1.0, 1.0, 2.0, 1.0, 1.0, 0.1, 6).is_err());
    }
}
