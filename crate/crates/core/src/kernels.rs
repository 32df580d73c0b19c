//! Free Green's functions on the imaginary frequency axis and the pair
//! kernels built from them.
//!
//! A pair kernel `K(ν, r)` is the per-frequency integrand whose double
//! integral over two bodies, weighted by `χ₁(iν)χ₂(iν)`, gives the
//! first-order interaction energy
//!
//! ```text
//! E = −T Σ′_l ∫∫ χ₁ χ₂ K(ν_l, |x − x′|) dμ₁ dμ₂
//! ```
//!
//! For every field kind `K` is the contraction `Σ_ij G_ij G_ji` of two free
//! propagators (`G²` for scalars). The second-order term of the trace-log
//! expansion contains each cross pair twice with weight `−1/2`, so this is
//! the normalisation it produces.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::special;
use crate::susceptibility::SusceptibilityModel;
use crate::thermal::ZeroMode;

pub use crate::special::{bessel_k0, exp_integral_e1};

/// Which fluctuating field mediates the interaction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldKind {
    /// Massless scalar in 1, 2 or 3 spatial dimensions.
    Scalar { dim: u8 },
    /// Transverse electromagnetic field (3D).
    Em,
    /// Massive vector field (3D), mass in inverse-length units.
    Proca { mass: f64 },
}

impl FieldKind {
    pub fn scalar(dim: u8) -> Result<Self> {
        let k = Self::Scalar { dim };
        k.validate()?;
        Ok(k)
    }

    pub fn proca(mass: f64) -> Result<Self> {
        let k = Self::Proca { mass };
        k.validate()?;
        Ok(k)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Scalar { dim } if !(1..=3).contains(&dim) => {
                Err(domain(format!("scalar field dimension must be 1, 2 or 3, got {dim}")))
            }
            Self::Proca { mass } if !(mass >= 0.0 && mass.is_finite()) => {
                Err(domain(format!("Proca mass must be finite and >= 0, got {mass}")))
            }
            _ => Ok(()),
        }
    }

    /// Number of spatial dimensions the bodies must live in.
    pub fn spatial_dim(&self) -> usize {
        match *self {
            Self::Scalar { dim } => dim as usize,
            Self::Em | Self::Proca { .. } => 3,
        }
    }

    /// Components of the propagator: 1 for scalars, 3 for vector fields.
    pub fn components(&self) -> usize {
        match self {
            Self::Scalar { .. } => 1,
            _ => 3,
        }
    }

    /// Lowest frequency at which the kernel is defined.
    pub fn mass_gap(&self) -> f64 {
        match *self {
            Self::Proca { mass } => mass,
            _ => 0.0,
        }
    }

    /// Default weight of the static Matsubara term.
    ///
    /// The 1D and 2D scalar kernels diverge at `ν = 0`, so their zero mode is
    /// skipped; every other kind uses the half-weighted `Σ′`.
    pub fn default_zero_mode(&self) -> ZeroMode {
        match *self {
            Self::Scalar { dim: 1 } | Self::Scalar { dim: 2 } => ZeroMode::Skip,
            _ => ZeroMode::Half,
        }
    }

    /// Whether the kernel has a finite `ν → 0` limit.
    pub fn finite_at_zero_frequency(&self) -> bool {
        match *self {
            Self::Scalar { dim } => dim == 3,
            Self::Em => true,
            Self::Proca { mass } => mass == 0.0,
        }
    }
}

/// Whether a kernel value was computed or lies below the Proca mass gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelDomain {
    Ok,
    BelowMassGap,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairKernelValue {
    /// Zero when `domain` is `BelowMassGap`.
    pub value: f64,
    pub domain: KernelDomain,
}

/// 3×3 dyadic, row major.
pub type Dyadic = [[f64; 3]; 3];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DyadicValue {
    pub tensor: Dyadic,
    pub domain: KernelDomain,
}

fn check_nu_r(nu: f64, r: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(domain(format!("frequency must be finite and >= 0, got {nu}")));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Singularity(format!(
            "separation must be finite and > 0, got {r}"
        )));
    }
    Ok(())
}

/// Free scalar propagator on the imaginary axis.
///
/// `dim = 1`: `e^{−νr}/(2ν)`; `dim = 2`: `K₀(νr)/(2π)`; `dim = 3`:
/// `e^{−νr}/(4πr)`. The 3D propagator is also accepted at `ν = 0`.
pub fn green_scalar(dim: u8, nu: f64, r: f64) -> Result<f64> {
    check_nu_r(nu, r)?;
    if nu == 0.0 && dim != 3 {
        return Err(domain(format!(
            "the {dim}D scalar propagator diverges at zero frequency"
        )));
    }
    match dim {
        1 | 2 | 3 => Ok(scalar_propagator(dim, nu, r)),
        _ => Err(domain(format!("scalar dimension must be 1, 2 or 3, got {dim}"))),
    }
}

#[inline]
pub(crate) fn scalar_propagator(dim: u8, nu: f64, r: f64) -> f64 {
    match dim {
        1 => (-nu * r).exp() / (2.0 * nu),
        2 => special::k0(nu * r) / (2.0 * PI),
        _ => (-nu * r).exp() / (4.0 * PI * r),
    }
}

/// Propagator of a homogeneous medium in reciprocal space,
/// `1/(k² + ν²(1 + χ(iν)))`.
pub fn dressed_propagator_k(nu: f64, k: f64, model: &SusceptibilityModel) -> Result<f64> {
    if !(nu >= 0.0) {
        return Err(domain(format!("frequency must be >= 0, got {nu}")));
    }
    let denom = k * k + nu * nu * (1.0 + model.at_imag(nu));
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Singularity(format!(
            "dressed propagator denominator vanishes at k = {k}, nu = {nu}"
        )));
    }
    Ok(1.0 / denom)
}

/// `h(ν, r)` of the transverse vector propagator:
/// `e^{−2νr}/(8π²)·[ν⁴/r² + 2ν³/r³ + 5ν²/r⁴ + 6ν/r⁵ + 3/r⁶]`.
#[inline]
pub(crate) fn vector_h(nu: f64, r: f64) -> f64 {
    let x = nu * r;
    let poly = 3.0 + x * (6.0 + x * (5.0 + x * (2.0 + x)));
    let r2 = r * r;
    (-2.0 * x).exp() * poly / (8.0 * PI * PI * r2 * r2 * r2)
}

/// `ζ = √(ν² − m²)`, or `None` below the mass gap.
#[inline]
pub(crate) fn proca_zeta(nu: f64, mass: f64) -> Option<f64> {
    if nu < mass {
        None
    } else {
        Some(((nu - mass) * (nu + mass)).sqrt())
    }
}

/// Kernel value without argument checks. `None` below the Proca mass gap.
#[inline]
pub(crate) fn kernel_unchecked(kind: &FieldKind, nu: f64, r: f64) -> Option<f64> {
    match *kind {
        FieldKind::Scalar { dim: 1 } => {
            let t = 2.0 * nu;
            Some((-t * r).exp() / (t * t))
        }
        FieldKind::Scalar { dim: 2 } => {
            let k = special::k0(nu * r);
            Some(k * k / (4.0 * PI * PI))
        }
        FieldKind::Scalar { .. } => Some((-2.0 * nu * r).exp() / (16.0 * PI * PI * r * r)),
        FieldKind::Em => Some(vector_h(nu, r)),
        FieldKind::Proca { mass } => proca_zeta(nu, mass).map(|z| vector_h(z, r)),
    }
}

/// Pair kernel `K(ν, r)` for the given field.
///
/// Scalar 1D: `e^{−2νr}/(2ν)²`; 2D: `K₀(νr)²/(4π²)`; 3D:
/// `e^{−2νr}/(16π²r²)`; EM: `h(ν, r)`; Proca: `h(ζ, r)`.
pub fn pair_kernel(kind: &FieldKind, nu: f64, r: f64) -> Result<PairKernelValue> {
    kind.validate()?;
    check_nu_r(nu, r)?;
    if nu == 0.0 && !kind.finite_at_zero_frequency() {
        if let FieldKind::Proca { .. } = kind {
            return Ok(PairKernelValue {
                value: 0.0,
                domain: KernelDomain::BelowMassGap,
            });
        }
        return Err(domain(format!(
            "the {kind:?} pair kernel diverges at zero frequency"
        )));
    }
    Ok(match kernel_unchecked(kind, nu, r) {
        Some(value) => PairKernelValue {
            value,
            domain: KernelDomain::Ok,
        },
        None => PairKernelValue {
            value: 0.0,
            domain: KernelDomain::BelowMassGap,
        },
    })
}

/// Transverse dyadic propagator
/// `G_ij = e^{−κr}/(4πr³)·[δ_ij(κ²r² + κr + 1) − r̂_i r̂_j(κ²r² + 3κr + 3)]`
/// with `κ = ν` (EM) or `κ = ζ` (Proca).
///
/// The contact term `δ_ij δ³(r)/3` only contributes at `r = 0`, which is
/// rejected, so `exclude_contact` does not change the value off contact.
pub fn green_dyadic(
    kind: &FieldKind,
    nu: f64,
    r_vec: [f64; 3],
    exclude_contact: bool,
) -> Result<DyadicValue> {
    let _ = exclude_contact;
    kind.validate()?;
    let r = norm(r_vec);
    check_nu_r(nu, r)?;
    let kappa = match *kind {
        FieldKind::Em => nu,
        FieldKind::Proca { mass } => match proca_zeta(nu, mass) {
            Some(z) => z,
            None => {
                return Ok(DyadicValue {
                    tensor: [[0.0; 3]; 3],
                    domain: KernelDomain::BelowMassGap,
                })
            }
        },
        FieldKind::Scalar { .. } => {
            return Err(domain("dyadic propagator requires a vector field"));
        }
    };
    Ok(DyadicValue {
        tensor: dyadic_unchecked(kappa, r_vec, r),
        domain: KernelDomain::Ok,
    })
}

#[inline]
pub(crate) fn dyadic_unchecked(kappa: f64, r_vec: [f64; 3], r: f64) -> Dyadic {
    let x = kappa * r;
    let pref = (-x).exp() / (4.0 * PI * r * r * r);
    let diag = x * x + x + 1.0;
    let radial = x * x + 3.0 * x + 3.0;
    let u = [r_vec[0] / r, r_vec[1] / r, r_vec[2] / r];
    let mut g = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let d = if i == j { diag } else { 0.0 };
            g[i][j] = pref * (d - u[i] * u[j] * radial);
        }
    }
    g
}

pub(crate) fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}
