//! Shared fixtures for the benchmarks.

use casimir_core::{Body, FieldKind, PairOptions, PairScene, QuadratureSpec, SusceptibilityModel, ThermalSpec, ZeroMode};

pub fn chi(x: f64) -> SusceptibilityModel {
    SusceptibilityModel::constant(x).expect("non-negative")
}

/// Two equal sphere shells a centre distance `big_r` apart.
pub fn sphere_pair(kind: FieldKind, radius: f64, big_r: f64, quad: QuadratureSpec, thermal: ThermalSpec) -> PairScene {
    PairScene {
        a: Body::sphere_shell(radius, [0.0; 3], chi(1.0)).expect("valid"),
        b: Body::sphere_shell(radius, [big_r, 0.0, 0.0], chi(1.0)).expect("valid"),
        kind,
        thermal,
        quad,
        options: PairOptions::default(),
    }
}

pub fn em_spheres(order: usize) -> PairScene {
    sphere_pair(FieldKind::Em, 0.25, 2.0, QuadratureSpec::new(order, order * 2 / 3), ThermalSpec::zero_t())
}

pub fn scalar3_thermal(order: usize, temperature: f64) -> PairScene {
    sphere_pair(
        FieldKind::Scalar { dim: 3 },
        0.5,
        3.0,
        QuadratureSpec::new(order, order * 2 / 3),
        ThermalSpec::finite_t(temperature, ZeroMode::Half),
    )
}

/// Two small dilute shells for the multiple-scattering routines.
pub fn dilute_shells(angular: usize, radial: usize) -> (Vec<Body>, QuadratureSpec) {
    let bodies = vec![
        Body::sphere_shell(0.1, [0.0; 3], chi(0.05)).expect("valid"),
        Body::sphere_shell(0.1, [0.8, 0.0, 0.0], chi(0.05)).expect("valid"),
    ];
    (bodies, QuadratureSpec::new(angular, radial))
}

/// Log-spaced `(ν, r)` sample points.
pub fn kernel_grid(n: usize) -> Vec<(f64, f64)> {
    let mut pts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let nu = 1e-2 * 1e4f64.powf(i as f64 / (n - 1) as f64);
            let r = 1e-1 * 1e2f64.powf(j as f64 / (n - 1) as f64);
            pts.push((nu, r));
        }
    }
    pts
}
