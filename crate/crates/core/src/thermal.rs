//! Matsubara sums and their zero-temperature integral counterpart.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_many, Tolerance};
use crate::sum::CompensatedSum;

/// Weight given to the static (`l = 0`) Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ZeroMode {
    Full,
    Half,
    Skip,
}

impl ZeroMode {
    pub fn weight(self) -> f64 {
        match self {
            Self::Full => 1.0,
            Self::Half => 0.5,
            Self::Skip => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThermalSpec {
    /// `(1/2π)∫_{nu_min}^∞ f(ν) dν`.
    ZeroT { nu_min: f64, rel_tol: f64 },
    /// `T Σ′_l f(2πlT)`.
    FiniteT {
        temperature: f64,
        zero_mode: ZeroMode,
        rel_tol: f64,
        l_max_cap: usize,
    },
}

pub const DEFAULT_REL_TOL: f64 = 1e-12;
pub const DEFAULT_L_MAX_CAP: usize = 200_000;

impl ThermalSpec {
    pub fn zero_t() -> Self {
        Self::ZeroT {
            nu_min: 0.0,
            rel_tol: DEFAULT_REL_TOL,
        }
    }

    pub fn finite_t(temperature: f64, zero_mode: ZeroMode) -> Self {
        Self::FiniteT {
            temperature,
            zero_mode,
            rel_tol: DEFAULT_REL_TOL,
            l_max_cap: DEFAULT_L_MAX_CAP,
        }
    }

    pub fn with_rel_tol(self, tol: f64) -> Self {
        match self {
            Self::ZeroT { nu_min, .. } => Self::ZeroT {
                nu_min,
                rel_tol: tol,
            },
            Self::FiniteT {
                temperature,
                zero_mode,
                l_max_cap,
                ..
            } => Self::FiniteT {
                temperature,
                zero_mode,
                rel_tol: tol,
                l_max_cap,
            },
        }
    }

    pub fn rel_tol(&self) -> f64 {
        match *self {
            Self::ZeroT { rel_tol, .. } | Self::FiniteT { rel_tol, .. } => rel_tol,
        }
    }

    /// Temperature, zero for the `ZeroT` plan.
    pub fn temperature(&self) -> f64 {
        match *self {
            Self::ZeroT { .. } => 0.0,
            Self::FiniteT { temperature, .. } => temperature,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = self.rel_tol();
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(domain(format!("rel_tol must be > 0, got {tol}")));
        }
        match *self {
            Self::ZeroT { nu_min, .. } => {
                if !(nu_min >= 0.0 && nu_min.is_finite()) {
                    return Err(domain(format!("nu_min must be finite and >= 0, got {nu_min}")));
                }
            }
            Self::FiniteT {
                temperature,
                l_max_cap,
                ..
            } => {
                if !(temperature > 0.0 && temperature.is_finite()) {
                    return Err(domain(format!(
                        "temperature must be finite and > 0, got {temperature}"
                    )));
                }
                if l_max_cap < 1 {
                    return Err(domain("l_max_cap must be >= 1"));
                }
            }
        }
        Ok(())
    }
}

/// `ν_l = 2πlT`.
pub fn matsubara_frequency(temperature: f64, l: usize) -> f64 {
    2.0 * PI * l as f64 * temperature
}

/// Outcome of [`thermal_reduce`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSum {
    pub value: f64,
    pub tail_bound: f64,
    /// Matsubara terms or integrand evaluations used.
    pub terms: usize,
    /// True when `l_max_cap` stopped the sum before the tolerance was met.
    pub capped: bool,
}

/// Component-wise version of [`ThermalSum`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSums {
    pub values: Vec<f64>,
    pub tail_bounds: Vec<f64>,
    pub terms: usize,
    pub capped: bool,
}

/// Reduces `f` over frequency according to `spec`.
///
/// `decay_scale` is the length `s` for which `f(ν) ~ e^{−νs}`; for pair
/// kernels it is twice the minimal separation.
pub fn thermal_reduce<F>(mut f: F, spec: &ThermalSpec, decay_scale: f64) -> Result<ThermalSum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let r = thermal_reduce_many(|nu| Ok(vec![f(nu)?]), 1, spec, decay_scale, 0.0)?;
    Ok(ThermalSum {
        value: r.values[0],
        tail_bound: r.tail_bounds[0],
        terms: r.terms,
        capped: r.capped,
    })
}

/// Reduces a `k`-component `f`. Frequencies below `nu_floor` are excluded
/// (used for the Proca mass gap).
pub fn thermal_reduce_many<F>(
    mut f: F,
    k: usize,
    spec: &ThermalSpec,
    decay_scale: f64,
    nu_floor: f64,
) -> Result<ThermalSums>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    spec.validate()?;
    if !(decay_scale > 0.0 && decay_scale.is_finite()) {
        return Err(domain(format!("decay_scale must be finite and > 0, got {decay_scale}")));
    }
    if !(nu_floor >= 0.0 && nu_floor.is_finite()) {
        return Err(domain(format!("nu_floor must be finite and >= 0, got {nu_floor}")));
    }
    let mut eval = |nu: f64| -> Result<Vec<f64>> {
        let v = f(nu)?;
        if v.len() != k {
            return Err(domain(format!(
                "summand returned {} components, expected {k}",
                v.len()
            )));
        }
        Ok(v)
    };
    match *spec {
        ThermalSpec::ZeroT { nu_min, rel_tol } => {
            zero_t(&mut eval, k, nu_min.max(nu_floor), rel_tol, decay_scale)
        }
        ThermalSpec::FiniteT {
            temperature,
            zero_mode,
            rel_tol,
            l_max_cap,
        } => finite_t(
            &mut eval,
            k,
            temperature,
            zero_mode,
            rel_tol,
            l_max_cap,
            decay_scale,
            nu_floor,
        ),
    }
}

fn zero_t<F>(f: &mut F, k: usize, lo: f64, rel_tol: f64, s: f64) -> Result<ThermalSums>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    // u = e^{−νs} maps [lo, ∞) onto (0, e^{−lo·s}] and turns the
    // exponential decay into a bounded integrand near u = 0.
    let u_max = (-lo * s).exp();
    let tol = Tolerance {
        abs: 1e-300,
        rel: rel_tol.max(1e-14),
        max_intervals: 4000,
    };
    let r = integrate_many(
        |u| {
            let nu = -u.ln() / s;
            let jac = 1.0 / (2.0 * PI * u * s);
            Ok(f(nu)?.into_iter().map(|v| v * jac).collect())
        },
        k,
        0.0,
        u_max,
        tol,
    )?;
    Ok(ThermalSums {
        values: r.values,
        tail_bounds: r.errors,
        terms: r.evaluations,
        capped: false,
    })
}

#[allow(clippy::too_many_arguments)]
fn finite_t<F>(
    f: &mut F,
    k: usize,
    temperature: f64,
    zero_mode: ZeroMode,
    rel_tol: f64,
    l_max_cap: usize,
    s: f64,
    nu_floor: f64,
) -> Result<ThermalSums>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let q_nom = (-2.0 * PI * temperature * s).exp();
    let mut sums = vec![CompensatedSum::new(); k];
    let mut terms = 0;

    if zero_mode != ZeroMode::Skip && nu_floor <= 0.0 {
        let v = f(0.0)?;
        if let Some(bad) = v.iter().find(|x| !x.is_finite()) {
            return Err(Error::Convergence(format!(
                "static Matsubara term is not finite ({bad}); use zero_mode = skip"
            )));
        }
        for (acc, x) in sums.iter_mut().zip(&v) {
            acc.add(zero_mode.weight() * x);
        }
        terms += 1;
    }

    let mut prev: Option<Vec<f64>> = None;
    let mut tails = vec![f64::INFINITY; k];
    let mut capped = true;
    for l in 1..=l_max_cap {
        let nu = matsubara_frequency(temperature, l);
        if nu < nu_floor {
            continue;
        }
        let t = f(nu)?;
        if let Some(bad) = t.iter().find(|x| !x.is_finite()) {
            return Err(Error::Convergence(format!(
                "Matsubara term l = {l} is not finite ({bad})"
            )));
        }
        terms += 1;
        for (acc, x) in sums.iter_mut().zip(&t) {
            acc.add(*x);
        }
        let mut done = prev.is_some();
        for c in 0..k {
            let cur = t[c].abs();
            let q = match &prev {
                Some(p) if p[c] != 0.0 => q_nom.max(cur / p[c].abs()),
                Some(_) if cur == 0.0 => q_nom,
                _ => 1.0,
            };
            tails[c] = if cur == 0.0 {
                0.0
            } else if q < 1.0 {
                // Terms decaying slower than the nominal rate may follow a
                // power law, whose tail the ratio test underestimates.
                let safety = if q > q_nom { 2.0 } else { 1.0 };
                safety * cur * q / (1.0 - q)
            } else {
                f64::INFINITY
            };
            if tails[c] > rel_tol * sums[c].value().abs() {
                done = false;
            }
        }
        prev = Some(t);
        if done {
            capped = false;
            break;
        }
    }
    if let Some(c) = tails.iter().position(|t| !t.is_finite()) {
        return Err(Error::Convergence(format!(
            "Matsubara terms of component {c} do not decay within l_max_cap = {l_max_cap}"
        )));
    }
    Ok(ThermalSums {
        values: sums.iter().map(|s| temperature * s.value()).collect(),
        tail_bounds: tails.iter().map(|t| temperature * t).collect(),
        terms,
        capped,
    })
}
