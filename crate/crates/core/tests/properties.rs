use std::f64::consts::PI;

use casimir_core::closedform::{
    energy_em_spheres, energy_rings_2d, energy_spheres_3d_scalar, force_1d_zero_t, legendre_series_P, recursion_P,
    LogVariant, SpherePairGeometry,
};
use casimir_core::{
    thermal_reduce, Body, FieldKind, PairOptions, PairScene, QuadratureSpec, SusceptibilityModel,
    ThermalSpec, ZeroMode,
};
use proptest::prelude::*;

fn chi(x: f64) -> SusceptibilityModel {
    SusceptibilityModel::constant(x).unwrap()
}

fn scene(kind: FieldKind, size: f64, big_r: f64, chi1: f64, chi2: f64) -> PairScene {
    let (a, b, thermal) = match kind {
        FieldKind::Scalar { dim: 1 } => (
            Body::interval(-size, size, chi(chi1)).unwrap(),
            Body::interval(big_r - size, big_r + size, chi(chi2)).unwrap(),
            ThermalSpec::finite_t(0.3, ZeroMode::Skip),
        ),
        FieldKind::Scalar { dim: 2 } => (
            Body::ring(size, [0.0, 0.0], chi(chi1)).unwrap(),
            Body::ring(size, [big_r, 0.0], chi(chi2)).unwrap(),
            ThermalSpec::zero_t(),
        ),
        _ => (
            Body::sphere_shell(size, [0.0; 3], chi(chi1)).unwrap(),
            Body::sphere_shell(size, [big_r, 0.0, 0.0], chi(chi2)).unwrap(),
            ThermalSpec::zero_t(),
        ),
    };
    PairScene {
        a,
        b,
        kind,
        thermal,
        quad: QuadratureSpec::new(8, 6),
        options: PairOptions::default(),
    }
}

fn kinds() -> Vec<FieldKind> {
    vec![
        FieldKind::Scalar { dim: 1 },
        FieldKind::Scalar { dim: 2 },
        FieldKind::Scalar { dim: 3 },
        FieldKind::Em,
        FieldKind::proca(0.5).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn attraction_decays_with_distance(size in 0.1..0.4f64, r0 in 1.0..2.0f64, c1 in 0.1..2.0f64, c2 in 0.1..2.0f64) {
        for kind in kinds() {
            let s = scene(kind, size, r0, c1, c2);
            let mut last = f64::NEG_INFINITY;
            for k in 0..4 {
                let e = s.at_separation(r0 * 1.4f64.powi(k)).energy().unwrap().energy;
                prop_assert!(e < 0.0, "{kind:?}: E = {e}");
                prop_assert!(e > last, "{kind:?}: |E| not decreasing");
                last = e;
            }
        }
    }

    #[test]
    fn energy_is_bilinear(size in 0.1..0.4f64, big_r in 1.0..3.0f64, c1 in 0.1..2.0f64, c2 in 0.1..2.0f64) {
        for kind in kinds() {
            let base = scene(kind, size, big_r, c1, c2).energy().unwrap().energy;
            let doubled = scene(kind, size, big_r, 2.0 * c1, c2).energy().unwrap().energy;
            prop_assert!(((doubled - 2.0 * base) / base).abs() < 1e-13, "{kind:?}");
        }
    }

    #[test]
    fn finer_angular_rule_stays_within_error_estimate(size in 0.2..0.5f64, big_r in 1.5..3.0f64) {
        let mut s = scene(FieldKind::Scalar { dim: 3 }, size, big_r, 1.0, 1.0);
        s.quad = QuadratureSpec::new(12, 8);
        let coarse = s.energy().unwrap();
        s.quad = QuadratureSpec::new(24, 16);
        let fine = s.energy().unwrap();
        prop_assert!((fine.energy - coarse.energy).abs() <= coarse.quad_error.max(1e-15 * coarse.energy.abs()));
    }

    #[test]
    fn half_weight_geometric_sum(t in 0.01..1.0f64, r in 0.2..5.0f64) {
        let s = thermal_reduce(
            |nu| Ok((-2.0 * nu * r).exp()),
            &ThermalSpec::finite_t(t, ZeroMode::Half).with_rel_tol(1e-15),
            2.0 * r,
        ).unwrap();
        let closed = 0.5 / (2.0 * PI * t * r).tanh() * t;
        prop_assert!(((s.value - closed) / closed).abs() < 1e-12);
    }

    #[test]
    fn tail_bound_is_conservative(t in 0.01..0.5f64, r in 0.2..3.0f64, tol in 1e-10..1e-4f64) {
        let f = |nu: f64| Ok((-2.0 * nu * r).exp() * (1.0 + nu * r));
        let coarse = thermal_reduce(f, &ThermalSpec::finite_t(t, ZeroMode::Half).with_rel_tol(tol), 2.0 * r).unwrap();
        let fine = thermal_reduce(f, &ThermalSpec::finite_t(t, ZeroMode::Half).with_rel_tol(tol / 10.0), 2.0 * r).unwrap();
        prop_assert!((fine.value - coarse.value).abs() <= coarse.tail_bound);
    }

    #[test]
    fn closed_forms_are_relabeling_symmetric_and_negative(
        a in 0.05..1.0f64, b in 0.05..1.0f64, gap in 0.05..3.0f64, c1 in 0.1..2.0f64, c2 in 0.1..2.0f64, t in 0.0..0.5f64,
    ) {
        let big_r = a + b + gap;
        let g = SpherePairGeometry::new(a, b, big_r).unwrap();
        let h = SpherePairGeometry::new(b, a, big_r).unwrap();
        let s1 = energy_spheres_3d_scalar(&g, c1, c2, LogVariant::Corrected);
        prop_assert_eq!(s1, energy_spheres_3d_scalar(&h, c2, c1, LogVariant::Corrected));
        prop_assert!(s1 < 0.0);
        let r1 = energy_rings_2d(a, b, big_r, c1, c2).unwrap();
        prop_assert_eq!(r1, energy_rings_2d(b, a, big_r, c2, c1).unwrap());
        prop_assert!(r1 < 0.0);
        let e1 = energy_em_spheres(&g, c1, c2, t).unwrap();
        let e2 = energy_em_spheres(&h, c2, c1, t).unwrap();
        // the recursion is evaluated in (â, b̂) order, so equality is up to rounding
        prop_assert!(((e1 - e2) / e1).abs() < 1e-12);
        prop_assert!(e1 < 0.0);
        let f = force_1d_zero_t(0.0, a, a + gap, a + gap + b, c1, c2).unwrap();
        prop_assert!(f < 0.0);
    }

    #[test]
    fn series_matches_recursion(p in -7i32..=-2, a in 0.01..0.35f64, b in 0.01..0.35f64) {
        let s = legendre_series_P(p, a, b, 400).unwrap();
        prop_assert!(s.converged);
        let r = recursion_P(p, a, b).unwrap();
        prop_assert!(((s.value - r) / r).abs() < 1e-10, "p={} a={} b={}: {} vs {}", p, a, b, s.value, r);
    }
}

#[test]
fn scalar3_large_r_slope_follows_log_form() {
    let (a, b) = (0.25, 0.25);
    let exact = |r: f64| energy_spheres_3d_scalar(&SpherePairGeometry::new(a, b, r).unwrap(), 1.0, 1.0, LogVariant::Corrected);
    let rs = [8.0 * (a + b), 16.0 * (a + b), 32.0 * (a + b)];
    let engine: Vec<f64> = rs
        .iter()
        .map(|&r| scene(FieldKind::Scalar { dim: 3 }, a, r, 1.0, 1.0).energy().unwrap().energy)
        .collect();
    for (i, &r) in rs.iter().enumerate() {
        assert!(((engine[i] - exact(r)) / exact(r)).abs() < 1e-8, "R = {r}");
    }
    let slope = |e0: f64, e1: f64| (e1.abs().ln() - e0.abs().ln()) / 2f64.ln();
    for i in 0..2 {
        let s_engine = slope(engine[i], engine[i + 1]);
        let s_exact = slope(exact(rs[i]), exact(rs[i + 1]));
        assert!((s_engine - s_exact).abs() < 1e-7);
        assert!((s_exact + 3.0).abs() < 0.02);
    }
}
