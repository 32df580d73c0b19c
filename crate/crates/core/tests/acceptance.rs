//! Acceptance checks 1–11. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use casimir_core::closedform::{
    angular_average_quadrature, energy_em_spheres, force_1d_finite_t, legendre_series_P, uncorrected_p_minus_6,
    uncorrected_p_minus_7, proca_smallvolume_series, recursion_P, SpherePairGeometry,
};
use casimir_core::perturbation::interval_parameters;
use casimir_core::quadrature::{integrate_to_infinity, Tolerance};
use casimir_core::{
    energy_1d_intervals, force, logdet_energy, pair_energy, pair_kernel, series_energy, thermal_reduce, validate_all,
    Body, FieldKind, ForceMethod, PairOptions, PairScene, QuadratureSpec, SusceptibilityModel, ThermalSpec, ZeroMode,
};

const TOL_RINGS: f64 = 1e-8;
const TOL_SPHERES: f64 = 1e-6;
const TOL_EM_SPHERES: f64 = 1e-4;
const TOL_P_PAIRWISE: f64 = 1e-8;
const TOL_EM_INTEGRAL: f64 = 1e-10;
const TOL_FORCE_FD: f64 = 1e-6;
const TOL_FORCE_ZERO_T: f64 = 1e-4;
const TOL_COTH: f64 = 1e-10;
const TOL_SERIES_LOGDET: f64 = 1e-6;
const TOL_SLOPE_ENERGY: f64 = 0.01;
const TOL_SLOPE_FORCE: f64 = 0.02;
const TOL_PROCA_KERNEL: f64 = 1e-12;

type Outcome = Result<(bool, String), String>;

fn rel(x: f64, y: f64) -> f64 {
    if x == y {
        0.0
    } else {
        ((x - y) / y).abs()
    }
}

fn chi(x: f64) -> SusceptibilityModel {
    SusceptibilityModel::constant(x).unwrap()
}

fn shells(a: f64, b: f64, big_r: f64, c: f64) -> (Body, Body) {
    (
        Body::sphere_shell(a, [0.0; 3], chi(c)).unwrap(),
        Body::sphere_shell(b, [0.0, 0.0, big_r], chi(c)).unwrap(),
    )
}

fn rings(a: f64, b: f64, big_r: f64) -> (Body, Body) {
    (
        Body::ring(a, [0.0, 0.0], chi(1.0)).unwrap(),
        Body::ring(b, [big_r, 0.0], chi(1.0)).unwrap(),
    )
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1_rings() -> Outcome {
    let mut worst = 0.0f64;
    for (a, b, big_r) in [(0.5, 0.7, 3.0), (1.0, 1.0, 4.0), (0.2, 1.5, 5.0)] {
        let (ra, rb) = rings(a, b, big_r);
        let e = pair_energy(&ra, &rb, &FieldKind::Scalar { dim: 2 }, &ThermalSpec::zero_t(), &QuadratureSpec::new(256, 1))
            .map_err(err)?;
        let exact = -a * b / (8.0 * PI) / ((big_r * big_r - (a - b).powi(2)) * (big_r * big_r - (a + b).powi(2))).sqrt();
        worst = worst.max(rel(e.energy, exact));
    }
    Ok((worst <= TOL_RINGS, format!("max rel dev {worst:.2e} (tol {TOL_RINGS:e})")))
}

fn c2_spheres() -> Outcome {
    let mut worst = 0.0f64;
    let mut uncorrected_dev = Vec::new();
    for (a, b, big_r) in [(0.5, 0.5, 3.0), (0.3, 0.8, 4.0)] {
        let (sa, sb) = shells(a, b, big_r, 1.0);
        let e = pair_energy(&sa, &sb, &FieldKind::Scalar { dim: 3 }, &ThermalSpec::zero_t(), &QuadratureSpec::default())
            .map_err(err)?;
        let r2 = big_r * big_r;
        let pre = -a * b / (16.0 * PI * big_r);
        let corrected = pre * ((1.0 - (a - b).powi(2) / r2) / (1.0 - (a + b).powi(2) / r2)).ln();
        let uncorrected = pre * ((1.0 - (a - b).powi(2) / r2) / (1.0 + (a + b).powi(2) / r2)).ln();
        worst = worst.max(rel(e.energy, corrected));
        uncorrected_dev.push(format!("{:.3}", rel(uncorrected, e.energy)));
    }
    Ok((
        worst <= TOL_SPHERES,
        format!(
            "max rel dev {worst:.2e} (tol {TOL_SPHERES:e}); uncorrected '1+' variant dev [{}]",
            uncorrected_dev.join(", ")
        ),
    ))
}

fn c3_em_spheres() -> Outcome {
    let (a, b, big_r) = (0.25, 0.25, 2.0);
    let (sa, sb) = shells(a, b, big_r, 1.0);
    let e = pair_energy(&sa, &sb, &FieldKind::Em, &ThermalSpec::zero_t(), &QuadratureSpec::default()).map_err(err)?;
    let p7 = recursion_P(-7, a / big_r, b / big_r).map_err(err)?;
    let exact = -23.0 * a * a * b * b / (4.0 * PI * big_r.powi(7)) * p7;
    let lib = energy_em_spheres(&SpherePairGeometry::new(a, b, big_r).map_err(err)?, 1.0, 1.0, 0.0).map_err(err)?;
    let d = rel(e.energy, exact);
    Ok((
        d <= TOL_EM_SPHERES && rel(lib, exact) < 1e-14,
        format!("rel dev {d:.2e} (tol {TOL_EM_SPHERES:e})"),
    ))
}

fn c4_p_three_way() -> Outcome {
    let grid = [0.05, 0.1, 0.2, 0.3];
    let mut worst = 0.0f64;
    for p in -7..=-2 {
        for &a in &grid {
            for &b in &grid {
                let s = legendre_series_P(p, a, b, 400).map_err(err)?;
                if !s.converged {
                    return Ok((false, format!("series not converged at p={p} a={a} b={b}")));
                }
                let r = recursion_P(p, a, b).map_err(err)?;
                let q = angular_average_quadrature(p, a, b, 48).map_err(err)?;
                worst = worst.max(rel(s.value, r)).max(rel(q, r)).max(rel(s.value, q));
            }
        }
    }
    let (a, b) = (0.2, 0.3);
    let p7 = recursion_P(-7, a, b).map_err(err)?;
    let p6 = recursion_P(-6, a, b).map_err(err)?;
    Ok((
        worst <= TOL_P_PAIRWISE,
        format!(
            "max pairwise rel dev {worst:.2e} (tol {TOL_P_PAIRWISE:e}); uncorrected P_-7 dev {:.3e}, uncorrected P_-6 ratio {:.6}",
            rel(uncorrected_p_minus_7(a, b), p7),
            uncorrected_p_minus_6(a, b) / p6
        ),
    ))
}

fn c5_em_integral() -> Outcome {
    let mut worst = 0.0f64;
    for r in [0.5, 1.0, 2.0] {
        let int = integrate_to_infinity(
            |nu| pair_kernel(&FieldKind::Em, nu, r).map_or(f64::NAN, |k| k.value),
            0.0,
            Tolerance { abs: 0.0, rel: 1e-14, max_intervals: 4000 },
        )
        .map_err(err)?;
        worst = worst.max(rel(int.value / (2.0 * PI), 23.0 / (64.0 * PI.powi(3) * r.powi(7))));
    }
    Ok((worst <= TOL_EM_INTEGRAL, format!("max rel dev {worst:.2e} (tol {TOL_EM_INTEGRAL:e})")))
}

fn c6_force_1d() -> Outcome {
    let c1 = SusceptibilityModel::lorentz(0.8, 3.0, 0.5).map_err(err)?;
    let c2 = SusceptibilityModel::lorentz(0.6, 2.0, 0.2).map_err(err)?;
    let t = 0.7;
    let spec = ThermalSpec::finite_t(t, ZeroMode::Skip).with_rel_tol(1e-15);
    let (a, b, c, d) = (0.0, 0.6, 1.5, 2.5);
    let (r, rp, rpp) = interval_parameters(a, b, c, d).map_err(err)?;
    let h = 1e-4 * r;
    let ep = energy_1d_intervals(a, b, c + h, d + h, &c1, &c2, &spec).map_err(err)?.energy;
    let em = energy_1d_intervals(a, b, c - h, d - h, &c1, &c2, &spec).map_err(err)?.energy;
    let analytic = force_1d_finite_t(r, rp, rpp, &c1, &c2, t).map_err(err)?;
    let d_fd = rel(analytic, (ep - em) / (2.0 * h));

    let (a, b, c, d) = (0.0, 1.0, 2.0, 4.0);
    let (r, rp, rpp) = interval_parameters(a, b, c, d).map_err(err)?;
    let one = chi(1.0);
    let f = |t: f64| force_1d_finite_t(r, rp, rpp, &one, &one, t);
    let (f1, f2, f4) = (f(0.02).map_err(err)?, f(0.01).map_err(err)?, f(0.005).map_err(err)?);
    let extrap = (64.0 * f4 - 20.0 * f2 + f1) / 45.0;
    let log_form = -1.0 / (4.0 * PI) * (((c - a) * (d - b)) / ((c - b) * (d - a))).ln();
    let d_zero = rel(extrap, log_form);
    Ok((
        d_fd <= TOL_FORCE_FD && d_zero <= TOL_FORCE_ZERO_T,
        format!("FD rel dev {d_fd:.2e} (tol {TOL_FORCE_FD:e}); T->0 vs log form {d_zero:.2e} (tol {TOL_FORCE_ZERO_T:e})"),
    ))
}

fn c7_thermal() -> Outcome {
    let (sa, sb) = shells(0.5, 0.5, 3.0, 1.0);
    let kind = FieldKind::Scalar { dim: 3 };
    let quad = QuadratureSpec::new(16, 12);
    let zero = pair_energy(&sa, &sb, &kind, &ThermalSpec::zero_t(), &quad).map_err(err)?;
    let mut e = Vec::new();
    for t in [0.1, 0.05, 0.025] {
        e.push(pair_energy(&sa, &sb, &kind, &ThermalSpec::finite_t(t, ZeroMode::Half), &quad).map_err(err)?);
    }
    let three = (64.0 * e[2].energy - 20.0 * e[1].energy + e[0].energy) / 45.0;
    let two = (4.0 * e[2].energy - e[1].energy) / 3.0;
    let tails = (e[0].thermal_tail + 20.0 * e[1].thermal_tail + 64.0 * e[2].thermal_tail) / 45.0;
    let bound = (three - two).abs() + tails + zero.thermal_tail + 4.0 * f64::EPSILON * zero.energy.abs();
    let dev = (three - zero.energy).abs();
    let extrap_ok = dev <= bound;

    let mut worst = 0.0f64;
    for t in [0.02, 0.1, 0.5] {
        for r in [0.5, 1.0, 3.0] {
            let s = thermal_reduce(
                |nu| Ok((-2.0 * nu * r).exp() / (16.0 * PI * PI * r * r)),
                &ThermalSpec::finite_t(t, ZeroMode::Half).with_rel_tol(1e-15),
                2.0 * r,
            )
            .map_err(err)?;
            let q = (-4.0 * PI * t * r).exp();
            // T(1/2 + q/(1−q)) summed in closed form
            let closed = t * (0.5 + q / (1.0 - q)) / (16.0 * PI * PI * r * r);
            worst = worst.max(rel(s.value, closed));
        }
    }
    Ok((
        extrap_ok && worst <= TOL_COTH,
        format!(
            "extrapolation |dE| {dev:.2e} vs bound {bound:.2e}; coth form max rel dev {worst:.2e} (tol {TOL_COTH:e})"
        ),
    ))
}

fn c8_series_logdet() -> Outcome {
    let (a, b) = (0.1, 0.1);
    let (sa, sb) = shells(a, b, 4.0 * (a + b), 0.05);
    let bodies = [sa, sb];
    let kind = FieldKind::Scalar { dim: 3 };
    let quad = QuadratureSpec::new(5, 4);
    let terms = series_energy(&bodies, 4, &kind, &ThermalSpec::zero_t(), &quad).map_err(err)?;
    let ld = logdet_energy(&bodies, &kind, &ThermalSpec::zero_t(), &quad).map_err(err)?;
    let nodes = terms[0].diagnostic("nodes").unwrap_or(0.0);
    let sum: f64 = terms.iter().map(|t| t.energy).sum();
    let d = rel(sum, ld.energy);
    let mags: Vec<f64> = terms.iter().skip(1).map(|t| t.energy.abs()).collect();
    let ratios: Vec<f64> = mags.windows(2).map(|w| w[1] / w[0]).collect();
    let geometric = ratios.iter().all(|&q| q < 1.0);
    Ok((
        d <= TOL_SERIES_LOGDET && geometric && nodes == 40.0,
        format!("rel dev {d:.2e} (tol {TOL_SERIES_LOGDET:e}); order ratios [{}]; {nodes} nodes", ratios.iter().map(|q| format!("{q:.2e}")).collect::<Vec<_>>().join(", ")),
    ))
}

fn c9_power_laws() -> Outcome {
    let (a, b) = (0.25, 0.25);
    let rs: Vec<f64> = (0..5).map(|i| 8.0 * (a + b) * 4f64.powf(i as f64 / 4.0)).collect();
    let (sa, sb) = shells(a, b, rs[0], 1.0);
    let scene = PairScene {
        a: sa,
        b: sb,
        kind: FieldKind::Em,
        thermal: ThermalSpec::zero_t(),
        quad: QuadratureSpec::new(12, 8),
        options: PairOptions::default(),
    };
    let mut e = Vec::new();
    let mut f = Vec::new();
    let mut e2 = Vec::new();
    for &r in &rs {
        e.push(scene.at_separation(r).energy().map_err(err)?.energy);
        f.push(force(&scene, r, 1e-3 * r, ForceMethod::Richardson).map_err(err)?.force);
        let (ra, rb) = rings(a, b, r);
        e2.push(
            pair_energy(&ra, &rb, &FieldKind::Scalar { dim: 2 }, &ThermalSpec::zero_t(), &QuadratureSpec::new(64, 1))
                .map_err(err)?
                .energy,
        );
    }
    let (se, sf, s2) = (slope(&rs, &e), slope(&rs, &f), slope(&rs, &e2));
    let ok = (se + 7.0).abs() <= TOL_SLOPE_ENERGY && (sf + 8.0).abs() <= TOL_SLOPE_FORCE && (s2 + 2.0).abs() <= TOL_SLOPE_ENERGY;
    Ok((
        ok,
        format!("EM energy slope {se:.4} (-7 +- {TOL_SLOPE_ENERGY}), EM force slope {sf:.4} (-8 +- {TOL_SLOPE_FORCE}), 2D slope {s2:.4} (-2 +- {TOL_SLOPE_ENERGY})"),
    ))
}

fn c10_proca() -> Outcome {
    let proca = FieldKind::proca(0.0).map_err(err)?;
    let mut worst = 0.0f64;
    let mut worst_h = 0.0f64;
    for nu in [0.1f64, 0.5, 1.0, 2.0, 5.0] {
        for r in [0.3f64, 1.0, 2.5] {
            let x = nu * r;
            let h = (-2.0 * x).exp() / (8.0 * PI * PI)
                * (nu.powi(4) / r.powi(2) + 2.0 * nu.powi(3) / r.powi(3) + 5.0 * nu * nu / r.powi(4) + 6.0 * nu / r.powi(5) + 3.0 / r.powi(6));
            let p = pair_kernel(&proca, nu, r).map_err(err)?.value;
            let em = pair_kernel(&FieldKind::Em, nu, r).map_err(err)?.value;
            worst = worst.max(rel(p, em));
            worst_h = worst_h.max(rel(em, h));
        }
    }
    let (v1, v2, big_r) = (0.01, 0.02, 2.0);
    let m0 = proca_smallvolume_series(v1, v2, big_r, 1.0, 1.0, 0.0, 1).map_err(err)?.value;
    let dipole = -v1 * v2 * 23.0 / (64.0 * PI.powi(3) * big_r.powi(7));
    let d0 = rel(m0, dipole);
    let first = proca_smallvolume_series(v1, v2, big_r, 1.0, 1.0, 0.05, 2).map_err(err)?.terms[1];
    Ok((
        worst <= TOL_PROCA_KERNEL && worst_h <= 1e-13 && d0 <= 4.0 * f64::EPSILON && first > 0.0,
        format!("kernel max rel dev {worst:.2e} (tol {TOL_PROCA_KERNEL:e}), EM vs h {worst_h:.1e}; m=0 term dev {d0:.1e}; first correction {first:.3e}"),
    ))
}

fn c11_determinism() -> Outcome {
    let first = validate_all().to_csv();
    let second = validate_all().to_csv();
    Ok((
        first == second,
        format!("{} report bytes, identical: {}", first.len(), first == second),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("2D rings quadrature vs closed form", c1_rings),
        ("3D scalar spheres vs log form", c2_spheres),
        ("EM spheres at zero temperature", c3_em_spheres),
        ("P_p series, recursion and quadrature", c4_p_three_way),
        ("EM frequency integral", c5_em_integral),
        ("1D force", c6_force_1d),
        ("Matsubara and zero-T consistency", c7_thermal),
        ("series vs log-det", c8_series_logdet),
        ("large-R power laws", c9_power_laws),
        ("Proca limits", c10_proca),
        ("validation report determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(v) => v,
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1?}]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
