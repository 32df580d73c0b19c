//! Medium susceptibilities on the imaginary frequency axis.
//!
//! Units throughout the crate are natural: `ħ = c = k_B = ε₀ = 1`, so
//! frequencies, temperatures and masses are all inverse lengths.

use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Susceptibility `χ` of a homogeneous medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SusceptibilityModel {
    /// Frequency-independent, lossless.
    Constant { chi0: f64 },
    /// Single damped oscillator `χ(ω) = χ₀ω₀² / (ω₀² − ω² − iγω)`.
    Lorentz { chi0: f64, omega0: f64, gamma: f64 },
}

impl SusceptibilityModel {
    pub fn constant(chi0: f64) -> Result<Self> {
        let m = Self::Constant { chi0 };
        m.validate()?;
        Ok(m)
    }

    pub fn lorentz(chi0: f64, omega0: f64, gamma: f64) -> Result<Self> {
        let m = Self::Lorentz {
            chi0,
            omega0,
            gamma,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Constant { chi0 } => {
                if !(chi0 >= 0.0 && chi0.is_finite()) {
                    return Err(domain(format!("chi0 must be finite and >= 0, got {chi0}")));
                }
            }
            Self::Lorentz {
                chi0,
                omega0,
                gamma,
            } => {
                if !(chi0 >= 0.0 && chi0.is_finite()) {
                    return Err(domain(format!("chi0 must be finite and >= 0, got {chi0}")));
                }
                if !(omega0 > 0.0 && omega0.is_finite()) {
                    return Err(domain(format!("omega0 must be finite and > 0, got {omega0}")));
                }
                if !(gamma >= 0.0 && gamma.is_finite()) {
                    return Err(domain(format!("gamma must be finite and >= 0, got {gamma}")));
                }
            }
        }
        Ok(())
    }

    /// Static value `χ(0)`.
    pub fn chi0(&self) -> f64 {
        match *self {
            Self::Constant { chi0 } | Self::Lorentz { chi0, .. } => chi0,
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Self::Constant { .. })
    }

    /// True when the model vanishes at every frequency.
    pub fn is_zero(&self) -> bool {
        self.chi0() == 0.0
    }

    /// Copy with `χ₀` multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        match *self {
            Self::Constant { chi0 } => Self::Constant {
                chi0: chi0 * factor,
            },
            Self::Lorentz {
                chi0,
                omega0,
                gamma,
            } => Self::Lorentz {
                chi0: chi0 * factor,
                omega0,
                gamma,
            },
        }
    }

    /// `χ(iν)` with no argument check; `ν ≥ 0` is the caller's job.
    pub(crate) fn at_imag(&self, nu: f64) -> f64 {
        match *self {
            Self::Constant { chi0 } => chi0,
            Self::Lorentz {
                chi0,
                omega0,
                gamma,
            } => {
                let w2 = omega0 * omega0;
                chi0 * w2 / (w2 + gamma * nu + nu * nu)
            }
        }
    }
}

/// `χ(iν)`, real and non-negative on the imaginary axis.
pub fn eval_chi_imag(model: &SusceptibilityModel, nu: f64) -> Result<f64> {
    if !(nu >= 0.0) || nu.is_infinite() {
        return Err(domain(format!("imaginary frequency must be finite and >= 0, got {nu}")));
    }
    Ok(model.at_imag(nu))
}

/// `ε(iν)/ε₀ = 1 + χ(iν)`.
pub fn dielectric_imag(model: &SusceptibilityModel, nu: f64) -> Result<f64> {
    Ok(1.0 + eval_chi_imag(model, nu)?)
}

/// Squared field–medium coupling `f²(ω) = (ω/π)·Im χ(ω)` at real `ω > 0`.
pub fn coupling_squared(model: &SusceptibilityModel, omega: f64) -> Result<f64> {
    if !(omega > 0.0) || omega.is_infinite() {
        return Err(domain(format!("real frequency must be finite and > 0, got {omega}")));
    }
    let im = match *model {
        SusceptibilityModel::Constant { .. } => 0.0,
        SusceptibilityModel::Lorentz {
            chi0,
            omega0,
            gamma,
        } => {
            let w2 = omega0 * omega0;
            let det = (w2 - omega * omega).powi(2) + gamma * gamma * omega * omega;
            chi0 * w2 * gamma * omega / det
        }
    };
    Ok(omega / PI * im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_model_is_frequency_independent() {
        let m = SusceptibilityModel::constant(2.0).unwrap();
        assert_eq!(eval_chi_imag(&m, 17.3).unwrap(), 2.0);
    }

    #[test]
    fn lorentz_static_and_unit_frequency() {
        let m = SusceptibilityModel::lorentz(1.0, 1.0, 0.0).unwrap();
        assert_eq!(eval_chi_imag(&m, 0.0).unwrap(), 1.0);
        assert_eq!(eval_chi_imag(&m, 1.0).unwrap(), 0.5);
        assert_eq!(dielectric_imag(&m, 1.0).unwrap(), 1.5);
    }

    #[test]
    fn dielectric_examples() {
        let vac = SusceptibilityModel::constant(0.0).unwrap();
        assert_eq!(dielectric_imag(&vac, 3.0).unwrap(), 1.0);
        let c = SusceptibilityModel::constant(0.3).unwrap();
        assert_eq!(dielectric_imag(&c, 5.0).unwrap(), 1.3);
    }

    #[test]
    fn coupling_examples() {
        let c = SusceptibilityModel::constant(5.0).unwrap();
        assert_eq!(coupling_squared(&c, 2.0).unwrap(), 0.0);
        let undamped = SusceptibilityModel::lorentz(1.0, 1.0, 0.0).unwrap();
        assert_eq!(coupling_squared(&undamped, 2.0).unwrap(), 0.0);
        let resonant = SusceptibilityModel::lorentz(1.0, 1.0, 0.1).unwrap();
        let got = coupling_squared(&resonant, 1.0).unwrap();
        assert!((got - 10.0 / PI).abs() < 1e-12 * 10.0 / PI);
    }

    #[test]
    fn domain_errors() {
        let m = SusceptibilityModel::constant(1.0).unwrap();
        assert!(eval_chi_imag(&m, -1.0).is_err());
        assert!(dielectric_imag(&m, -1e-9).is_err());
        assert!(coupling_squared(&m, 0.0).is_err());
        assert!(SusceptibilityModel::constant(-0.1).is_err());
        assert!(SusceptibilityModel::lorentz(1.0, 0.0, 0.1).is_err());
        assert!(SusceptibilityModel::lorentz(1.0, 1.0, -0.1).is_err());
    }

    fn any_model() -> impl Strategy<Value = SusceptibilityModel> {
        prop_oneof![
            (0.0..10.0f64).prop_map(|c| SusceptibilityModel::Constant { chi0: c }),
            (0.0..10.0f64, 0.01..10.0f64, 0.0..10.0f64).prop_map(|(c, w, g)| {
                SusceptibilityModel::Lorentz {
                    chi0: c,
                    omega0: w,
                    gamma: g,
                }
            }),
        ]
    }

    proptest! {
        #[test]
        fn chi_is_nonnegative_and_nonincreasing(m in any_model(), nus in prop::collection::vec(0.0..100.0f64, 2..20)) {
            let mut nus = nus;
            nus.sort_by(f64::total_cmp);
            let vals: Vec<f64> = nus.iter().map(|&n| eval_chi_imag(&m, n).unwrap()).collect();
            prop_assert!(vals.iter().all(|v| *v >= 0.0));
            prop_assert!(vals.windows(2).all(|p| p[1] <= p[0]));
        }

        #[test]
        fn dielectric_minus_chi_is_one(m in any_model(), nu in 0.0..100.0f64) {
            let d = dielectric_imag(&m, nu).unwrap() - eval_chi_imag(&m, nu).unwrap();
            prop_assert!((d - 1.0).abs() <= f64::EPSILON * 16.0);
        }

        #[test]
        fn coupling_is_nonnegative(m in any_model(), w in 1e-3..100.0f64) {
            prop_assert!(coupling_squared(&m, w).unwrap() >= 0.0);
        }
    }
}
