//! Perturbative Casimir energies and forces between weakly coupled bodies.
//!
//! Natural units are used throughout: `ħ = c = k_B = ε₀ = 1`.

pub mod closedform;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod perturbation;
pub mod quadrature;
pub mod special;
pub mod sum;
pub mod susceptibility;
pub mod thermal;
pub mod validation;

pub use error::{Error, Result};
pub use geometry::{min_separation, quadrature_nodes, sphere_point_distance, Body, NodeSet, QuadratureSpec, Shape};
pub use kernels::{
    dressed_propagator_k, green_dyadic, green_scalar, pair_kernel, DyadicValue, FieldKind, KernelDomain,
    PairKernelValue,
};
pub use special::{bessel_k0, exp_integral_e1, EULER_GAMMA};
pub use susceptibility::{coupling_squared, dielectric_imag, eval_chi_imag, SusceptibilityModel};
pub use thermal::{matsubara_frequency, thermal_reduce, ThermalSpec, ThermalSum, ZeroMode};
pub use perturbation::{
    energy_1d_intervals, force, force_1d_intervals, logdet_energy, pair_energy, pair_energy_with, series_energy,
    EnergyResult, ForceMethod, ForceResult, PairOptions, PairScene, Scalar2dBranch,
};
pub use closedform::{
    angular_average_quadrature, energy_em_spheres, energy_rings_2d, energy_spheres_3d_scalar, force_1d_above_cutoff,
    force_1d_finite_t, force_1d_zero_t, legendre_series_P, proca_smallvolume_series, recursion_P, LogVariant,
    SpherePairGeometry,
};
pub use validation::{validate_all, validate_with, Check, Report, Status, ValidationConfig};
