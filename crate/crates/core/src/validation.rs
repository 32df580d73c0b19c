//! Engine-against-oracle checks with a deterministic CSV report.
//!
//! Gated checks carry a tolerance and pass or fail. Informational checks
//! record measured discrepancies between alternative closed forms.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::closedform::{
    angular_average_quadrature, energy_em_spheres, energy_rings_2d, energy_spheres_3d_scalar,
    force_1d_above_cutoff, force_1d_finite_t, force_1d_zero_t, force_1d_zero_t_uncorrected, legendre_series_P,
    uncorrected_p_minus_6, uncorrected_p_minus_7, uncorrected_p_minus_7_regrouped, proca_point_energy_quadrature,
    proca_smallvolume_series, recursion_P, scalar_3d_thermal_kernel, LogVariant, SpherePairGeometry,
    ThermalKernelVariant,
};
use crate::error::Result;
use crate::geometry::{Body, QuadratureSpec};
use crate::kernels::{pair_kernel, FieldKind};
use crate::perturbation::{
    energy_1d_intervals, force, interval_parameters, logdet_energy, pair_energy, pair_energy_with, series_energy,
    ForceMethod, PairOptions, PairScene, Scalar2dBranch,
};
use crate::quadrature::{integrate_to_infinity, Tolerance};
use crate::susceptibility::SusceptibilityModel;
use crate::thermal::{thermal_reduce, ThermalSpec, ZeroMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Measured value only, no tolerance.
    Info,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    /// Acceptance criterion the check belongs to (1–10).
    pub criterion: u8,
    pub name: String,
    pub measured: f64,
    pub reference: f64,
    /// Relative deviation unless `note` says otherwise.
    pub deviation: f64,
    pub tolerance: f64,
    pub status: Status,
    pub note: String,
}

impl Check {
    fn gate(criterion: u8, name: impl Into<String>, measured: f64, reference: f64, deviation: f64, tol: f64) -> Self {
        let status = if deviation <= tol { Status::Pass } else { Status::Fail };
        Self {
            criterion,
            name: name.into(),
            measured,
            reference,
            deviation,
            tolerance: tol,
            status,
            note: String::new(),
        }
    }

    fn relative(criterion: u8, name: impl Into<String>, measured: f64, reference: f64, tol: f64) -> Self {
        Self::gate(criterion, name, measured, reference, rel_dev(measured, reference), tol)
    }

    fn info(criterion: u8, name: impl Into<String>, measured: f64, reference: f64) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured,
            reference,
            deviation: rel_dev(measured, reference),
            tolerance: f64::NAN,
            status: Status::Info,
            note: String::new(),
        }
    }

    fn failed(criterion: u8, name: impl Into<String>, err: impl ToString) -> Self {
        Self {
            criterion,
            name: name.into(),
            measured: f64::NAN,
            reference: f64::NAN,
            deviation: f64::NAN,
            tolerance: f64::NAN,
            status: Status::Fail,
            note: err.to_string(),
        }
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

fn rel_dev(x: f64, reference: f64) -> f64 {
    if x == reference {
        0.0
    } else {
        ((x - reference) / reference).abs()
    }
}

/// Options for [`validate_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationConfig {
    /// Multiplies every gate tolerance.
    pub tolerance_scale: f64,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { tolerance_scale: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    /// True when no gated check failed.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// Per-criterion verdict: PASS iff every gate of that criterion passed.
    pub fn criterion_status(&self, criterion: u8) -> Option<Status> {
        let gates: Vec<_> = self
            .checks
            .iter()
            .filter(|c| c.criterion == criterion && c.status != Status::Info)
            .collect();
        if gates.is_empty() {
            return None;
        }
        Some(if gates.iter().all(|c| c.status == Status::Pass) {
            Status::Pass
        } else {
            Status::Fail
        })
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("criterion,check,measured,reference,deviation,tolerance,status,note\n");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                c.criterion,
                csv_field(&c.name),
                fmt_num(c.measured),
                fmt_num(c.reference),
                fmt_num(c.deviation),
                fmt_num(c.tolerance),
                c.status.label(),
                csv_field(&c.note)
            );
        }
        s
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<4} [{:>2}] {:<48} dev {:>10} tol {:>10}{}",
                c.status.label(),
                c.criterion,
                c.name,
                short(c.deviation),
                short(c.tolerance),
                if c.note.is_empty() { String::new() } else { format!("  ({})", c.note) }
            );
        }
        let gates = self.checks.iter().filter(|c| c.status != Status::Info).count();
        let passed = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        let _ = writeln!(s, "{passed}/{gates} gated checks passed");
        s
    }
}

/// Scientific notation with 17 significant digits; empty for NaN.
pub fn fmt_num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:.16e}")
    }
}

fn short(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else {
        format!("{x:.2e}")
    }
}

pub(crate) fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Runs every check with default tolerances.
pub fn validate_all() -> Report {
    validate_with(&ValidationConfig::default())
}

pub fn validate_with(cfg: &ValidationConfig) -> Report {
    let mut checks = Vec::new();
    for n in 1..=10 {
        checks.extend(criterion_checks(n, cfg));
    }
    Report { checks }
}

/// Checks of one acceptance criterion (1–10).
pub fn criterion_checks(n: u8, cfg: &ValidationConfig) -> Vec<Check> {
    let s = cfg.tolerance_scale;
    match n {
        1 => rings_2d(s),
        2 => spheres_3d(s),
        3 => em_spheres(s),
        4 => p_three_way(s),
        5 => em_frequency_integral(s),
        6 => one_d_force(s),
        7 => thermal_consistency(s),
        8 => series_vs_logdet(s),
        9 => power_laws(s),
        10 => proca(s),
        _ => Vec::new(),
    }
}

fn constant(chi: f64) -> SusceptibilityModel {
    SusceptibilityModel::constant(chi).expect("valid constant susceptibility")
}

fn spheres(a: f64, b: f64, big_r: f64, chi: f64) -> Result<(Body, Body)> {
    Ok((
        Body::sphere_shell(a, [0.0; 3], constant(chi))?,
        Body::sphere_shell(b, [0.0, 0.0, big_r], constant(chi))?,
    ))
}

fn rings(a: f64, b: f64, big_r: f64) -> Result<(Body, Body)> {
    Ok((
        Body::ring(a, [0.0, 0.0], constant(1.0))?,
        Body::ring(b, [big_r, 0.0], constant(1.0))?,
    ))
}

fn push(out: &mut Vec<Check>, criterion: u8, name: &str, r: Result<Vec<Check>>) {
    match r {
        Ok(c) => out.extend(c),
        Err(e) => out.push(Check::failed(criterion, name, e)),
    }
}

fn rings_2d(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for (a, b, big_r) in [(0.5, 0.7, 3.0), (1.0, 1.0, 4.0), (0.2, 1.5, 5.0)] {
        let name = format!("rings a={a} b={b} R={big_r}");
        push(&mut out, 1, &name, (|| {
            let (ra, rb) = rings(a, b, big_r)?;
            let e = pair_energy(&ra, &rb, &FieldKind::Scalar { dim: 2 }, &ThermalSpec::zero_t(), &QuadratureSpec::new(256, 1))?;
            let exact = energy_rings_2d(a, b, big_r, 1.0, 1.0)?;
            Ok(vec![Check::relative(1, name.clone(), e.energy, exact, 1e-8 * s)])
        })());
    }
    push(&mut out, 1, "2D Bessel/static zero-T ratio", (|| {
        let (ra, rb) = rings(0.5, 0.7, 3.0)?;
        let quad = QuadratureSpec::new(64, 1);
        let kind = FieldKind::Scalar { dim: 2 };
        let run = |branch| {
            pair_energy_with(&ra, &rb, &kind, &ThermalSpec::zero_t(), &quad, &PairOptions { scalar2d_branch: branch })
        };
        let bessel = run(Scalar2dBranch::Bessel)?.energy;
        let stat = run(Scalar2dBranch::Static)?.energy;
        Ok(vec![Check::info(1, "2D Bessel/static zero-T ratio", bessel / stat, 1.0)
            .with_note("ratio of the K0^2 frequency integral to the static 1/(32 pi^3 r^2) kernel")])
    })());
    out
}

fn spheres_3d(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for (a, b, big_r) in [(0.5, 0.5, 3.0), (0.3, 0.8, 4.0)] {
        let name = format!("scalar spheres a={a} b={b} R={big_r}");
        push(&mut out, 2, &name, (|| {
            let (sa, sb) = spheres(a, b, big_r, 1.0)?;
            let e = pair_energy(&sa, &sb, &FieldKind::Scalar { dim: 3 }, &ThermalSpec::zero_t(), &QuadratureSpec::default())?;
            let g = SpherePairGeometry::new(a, b, big_r)?;
            let corrected = energy_spheres_3d_scalar(&g, 1.0, 1.0, LogVariant::Corrected);
            let uncorrected = energy_spheres_3d_scalar(&g, 1.0, 1.0, LogVariant::Uncorrected);
            Ok(vec![
                Check::relative(2, name.clone(), e.energy, corrected, 1e-6 * s),
                Check::info(2, format!("{name} uncorrected log variant"), uncorrected, e.energy)
                    .with_note("denominator 1+(a+b)^2/R^2 against shell quadrature"),
            ])
        })());
    }
    out
}

fn em_spheres(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    push(&mut out, 3, "EM spheres zero T", (|| {
        let (a, b, big_r) = (0.25, 0.25, 2.0);
        let (sa, sb) = spheres(a, b, big_r, 1.0)?;
        let e = pair_energy(&sa, &sb, &FieldKind::Em, &ThermalSpec::zero_t(), &QuadratureSpec::default())?;
        let exact = energy_em_spheres(&SpherePairGeometry::new(a, b, big_r)?, 1.0, 1.0, 0.0)?;
        Ok(vec![Check::relative(3, "EM spheres a=0.25 b=0.25 R=2", e.energy, exact, 1e-4 * s)])
    })());
    push(&mut out, 3, "EM finite-T linear coefficient", (|| {
        // Coefficient c of the T-linear term −c·Tχ₁χ₂a²b²P₋₆/R⁶; the closed form uses 6.
        let (a, b, big_r, t) = (0.25, 0.25, 2.0, 0.01);
        let (sa, sb) = spheres(a, b, big_r, 1.0)?;
        let quad = QuadratureSpec::new(12, 8);
        let e0 = pair_energy(&sa, &sb, &FieldKind::Em, &ThermalSpec::zero_t(), &quad)?.energy;
        let unit = t * a * a * b * b * recursion_P(-6, a / big_r, b / big_r)? / big_r.powi(6);
        let mut v = Vec::new();
        for (mode, label) in [(ZeroMode::Full, "full"), (ZeroMode::Half, "half")] {
            let e = pair_energy(&sa, &sb, &FieldKind::Em, &ThermalSpec::finite_t(t, mode), &quad)?.energy;
            v.push(
                Check::info(3, format!("EM T-linear coefficient, {label} zero mode"), -(e - e0) / unit, 6.0)
                    .with_note("reference is the closed-form coefficient 6"),
            );
        }
        Ok(v)
    })());
    out
}

fn p_three_way(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let grid = [0.05, 0.1, 0.2, 0.3];
    for p in (-7..=-2).rev() {
        let name = format!("P_{p} series/recursion/quadrature");
        push(&mut out, 4, &name, (|| {
            let mut worst = 0.0f64;
            let mut at = (0.0, 0.0, 0.0, 0.0);
            for &a in &grid {
                for &b in &grid {
                    let series = legendre_series_P(p, a, b, 400)?;
                    let rec = recursion_P(p, a, b)?;
                    let quad = angular_average_quadrature(p, a, b, 48)?;
                    let d = rel_dev(series.value, rec).max(rel_dev(quad, rec)).max(rel_dev(series.value, quad));
                    if !series.converged {
                        worst = f64::INFINITY;
                    }
                    if d > worst {
                        worst = d;
                        at = (a, b, series.value, rec);
                    }
                }
            }
            Ok(vec![Check::gate(4, name.clone(), at.2, at.3, worst, 1e-8 * s)
                .with_note(format!("largest pairwise deviation at a={} b={}", at.0, at.1))])
        })());
    }
    push(&mut out, 4, "uncorrected P closed forms", (|| {
        let (a, b) = (0.2, 0.3);
        let p7 = recursion_P(-7, a, b)?;
        let p6 = recursion_P(-6, a, b)?;
        Ok(vec![
            Check::info(4, "uncorrected P_-7 at (0.2, 0.3)", uncorrected_p_minus_7(a, b), p7),
            Check::info(4, "P_-7 with 52(a^2+b^2)-44 at (0.2, 0.3)", uncorrected_p_minus_7_regrouped(a, b), p7),
            Check::info(4, "uncorrected P_-6 / P_-6 at (0.2, 0.3)", uncorrected_p_minus_6(a, b) / p6, 1.0)
                .with_note("measured is the ratio"),
        ])
    })());
    out
}

fn em_frequency_integral(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    for r in [0.5, 1.0, 2.0] {
        let name = format!("integral of h/(2 pi) at r={r}");
        push(&mut out, 5, &name, (|| {
            let int = integrate_to_infinity(
                |nu| pair_kernel(&FieldKind::Em, nu, r).map_or(f64::NAN, |k| k.value),
                0.0,
                Tolerance { abs: 0.0, rel: 1e-14, max_intervals: 4000 },
            )?;
            let exact = 23.0 / (64.0 * PI.powi(3) * r.powi(7));
            Ok(vec![Check::relative(5, name.clone(), int.value / (2.0 * PI), exact, 1e-10 * s)])
        })());
    }
    out
}

/// Richardson extrapolation to zero of `f(h)` sampled at `h, h/2, h/4`,
/// assuming an expansion in `h²`. Returns the three-point value and the
/// difference to the two-point value from the finest pair.
pub fn richardson_t2(f_h: f64, f_h2: f64, f_h4: f64) -> (f64, f64) {
    let two = (4.0 * f_h4 - f_h2) / 3.0;
    let three = (64.0 * f_h4 - 20.0 * f_h2 + f_h) / 45.0;
    (three, (three - two).abs())
}

fn one_d_force(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    push(&mut out, 6, "1D analytic force vs central difference", (|| {
        let c1 = SusceptibilityModel::lorentz(0.8, 3.0, 0.5)?;
        let c2 = SusceptibilityModel::lorentz(0.6, 2.0, 0.2)?;
        let t = 0.7;
        let spec = ThermalSpec::finite_t(t, ZeroMode::Skip).with_rel_tol(1e-15);
        let (a, b, c, d) = (0.0, 0.6, 1.5, 2.5);
        let (r, rp, rpp) = interval_parameters(a, b, c, d)?;
        let h = 1e-4 * r;
        let ep = energy_1d_intervals(a, b, c + h, d + h, &c1, &c2, &spec)?.energy;
        let em = energy_1d_intervals(a, b, c - h, d - h, &c1, &c2, &spec)?.energy;
        let fd = (ep - em) / (2.0 * h);
        let analytic = force_1d_finite_t(r, rp, rpp, &c1, &c2, t)?;
        let scene = PairScene {
            a: Body::interval(a, b, c2)?,
            b: Body::interval(c, d, c1)?,
            kind: FieldKind::Scalar { dim: 1 },
            thermal: spec,
            quad: QuadratureSpec::default(),
            options: PairOptions::default(),
        };
        let engine = force(&scene, r, h, ForceMethod::Auto)?.force;
        Ok(vec![
            Check::relative(6, "1D force vs central difference", analytic, fd, 1e-6 * s)
                .with_note("step 1e-4 r"),
            Check::relative(6, "1D engine force vs analytic", engine, analytic, 1e-6 * s),
        ])
    })());
    push(&mut out, 6, "1D zero-T force", (|| {
        let (a, b, c, d) = (0.0, 1.0, 2.0, 4.0);
        let (r, rp, rpp) = interval_parameters(a, b, c, d)?;
        let one = constant(1.0);
        let f = |t: f64| force_1d_finite_t(r, rp, rpp, &one, &one, t);
        let t0 = 0.02;
        let (extrap, _) = richardson_t2(f(t0)?, f(t0 / 2.0)?, f(t0 / 4.0)?);
        let log_form = force_1d_zero_t(a, b, c, d, 1.0, 1.0)?;
        // direct frequency quadrature of the summand
        let gap = c - b;
        let int = integrate_to_infinity(
            |nu| {
                if nu == 0.0 {
                    return 0.0;
                }
                let s1 = -(-4.0 * nu * rp).exp_m1() * 0.5;
                let s2 = -(-4.0 * nu * rpp).exp_m1() * 0.5;
                2.0 / nu * (-2.0 * nu * gap).exp() * s1 * s2
            },
            0.0,
            Tolerance { abs: 0.0, rel: 1e-13, max_intervals: 4000 },
        )?;
        let quad = -int.value / (2.0 * PI);
        let uncorrected = force_1d_zero_t_uncorrected(a, b, c, d, 1.0, 1.0)?;
        let half_cut = force_1d_above_cutoff(a, b, c, d, 1.0, 1.0, 0.5)?;
        Ok(vec![
            Check::relative(6, "1D T->0 extrapolation vs zero-T log form", extrap, log_form, 1e-4 * s)
                .with_note("Richardson in T^2 from T = 0.02, 0.01, 0.005"),
            Check::relative(6, "1D zero-T frequency quadrature vs log form", quad, log_form, 1e-8 * s),
            Check::info(6, "bare-length incomplete-gamma form vs quadrature", uncorrected, quad),
            Check::info(6, "bare-length form / above-cutoff form at nu0 = 1/2", uncorrected / half_cut, 2.0)
                .with_note("measured is the ratio"),
        ])
    })());
    out
}

fn thermal_consistency(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    push(&mut out, 7, "3D scalar T -> 0 extrapolation", (|| {
        let (sa, sb) = spheres(0.5, 0.5, 3.0, 1.0)?;
        let kind = FieldKind::Scalar { dim: 3 };
        let quad = QuadratureSpec::new(16, 12);
        let zero = pair_energy(&sa, &sb, &kind, &ThermalSpec::zero_t(), &quad)?;
        let temps = [0.1, 0.05, 0.025];
        let mut e = Vec::new();
        for t in temps {
            e.push(pair_energy(&sa, &sb, &kind, &ThermalSpec::finite_t(t, ZeroMode::Half), &quad)?);
        }
        let (extrap, rich_err) = richardson_t2(e[0].energy, e[1].energy, e[2].energy);
        // Tails enter with the absolute Richardson weights 1/45, 20/45, 64/45.
        let tails = (e[0].thermal_tail + 20.0 * e[1].thermal_tail + 64.0 * e[2].thermal_tail) / 45.0;
        let bound = rich_err + tails + zero.thermal_tail + 4.0 * f64::EPSILON * zero.energy.abs();
        let dev = (extrap - zero.energy).abs();
        Ok(vec![Check::gate(7, "Richardson T^2 extrapolation vs zero T", extrap, zero.energy, dev / zero.energy.abs(), bound / zero.energy.abs() * s)
            .with_note("deviation and tolerance relative to |E0|; tolerance is the combined reported bound")])
    })());
    push(&mut out, 7, "half-weight sum vs coth form", (|| {
        let mut worst = 0.0f64;
        let mut at = (0.0, 0.0);
        for t in [0.02, 0.1, 0.5] {
            for r in [0.5, 1.0, 3.0] {
                let sum = thermal_reduce(
                    |nu| Ok((-2.0 * nu * r).exp() / (16.0 * PI * PI * r * r)),
                    &ThermalSpec::finite_t(t, ZeroMode::Half).with_rel_tol(1e-15),
                    2.0 * r,
                )?;
                let closed = scalar_3d_thermal_kernel(t, r, ThermalKernelVariant::Corrected);
                let d = rel_dev(sum.value, closed);
                if d > worst {
                    worst = d;
                    at = (sum.value, closed);
                }
            }
        }
        let uncorrected = scalar_3d_thermal_kernel(0.1, 3.0, ThermalKernelVariant::Uncorrected);
        let corrected = scalar_3d_thermal_kernel(0.1, 3.0, ThermalKernelVariant::Corrected);
        Ok(vec![
            Check::gate(7, "half-weight Matsubara sum vs coth/r^2 form", at.0, at.1, worst, 1e-10 * s),
            Check::info(7, "coth/r form / coth/r^2 form at r = 3", uncorrected / corrected, 1.0)
                .with_note("measured is the ratio"),
        ])
    })());
    out
}

fn series_vs_logdet(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    push(&mut out, 8, "series vs log-det", (|| {
        let (a, b, chi) = (0.1, 0.1, 0.05);
        let (sa, sb) = spheres(a, b, 4.0 * (a + b), chi)?;
        let bodies = [sa, sb];
        let kind = FieldKind::Scalar { dim: 3 };
        let quad = QuadratureSpec::new(5, 4);
        let thermal = ThermalSpec::zero_t();
        let terms = series_energy(&bodies, 4, &kind, &thermal, &quad)?;
        let ld = logdet_energy(&bodies, &kind, &thermal, &quad)?;
        let sum: f64 = terms.iter().map(|t| t.energy).sum();
        // order 1 has no interaction part; ratios start at order 2
        let mags: Vec<f64> = terms.iter().skip(1).map(|t| t.energy.abs()).collect();
        let ratios: Vec<f64> = mags.windows(2).map(|w| w[1] / w[0]).collect();
        let worst = ratios.iter().cloned().fold(0.0, f64::max);
        let geometric = ratios.iter().all(|&q| q < 1.0);
        let mut checks = vec![Check::relative(8, "series n<=4 vs log-det", sum, ld.energy, 1e-6 * s)
            .with_note(format!("{} nodes per body", terms[0].diagnostic("nodes").unwrap_or(0.0) / 2.0))];
        let mut g = Check::gate(8, "largest ratio of successive orders", worst, 1.0, worst, 1.0);
        if !geometric {
            g.status = Status::Fail;
        }
        checks.push(g.with_note("deviation is the ratio; gate ratio < 1"));
        Ok(checks)
    })());
    out
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
        .collect()
}

fn power_laws(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    push(&mut out, 9, "EM power laws", (|| {
        let (a, b) = (0.25, 0.25);
        let rs = log_grid(8.0 * (a + b), 32.0 * (a + b), 5);
        let (sa, sb) = spheres(a, b, rs[0], 1.0)?;
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
        for &r in &rs {
            e.push(scene.at_separation(r).energy()?.energy);
            f.push(force(&scene, r, 1e-3 * r, ForceMethod::Richardson)?.force);
        }
        let se = loglog_slope(&rs, &e);
        let sf = loglog_slope(&rs, &f);
        Ok(vec![
            Check::gate(9, "EM energy slope", se, -7.0, (se + 7.0).abs(), 0.01 * s).with_note("absolute deviation"),
            Check::gate(9, "EM force slope", sf, -8.0, (sf + 8.0).abs(), 0.02 * s).with_note("absolute deviation"),
        ])
    })());
    push(&mut out, 9, "2D scalar power law", (|| {
        let (a, b) = (0.25, 0.25);
        let rs = log_grid(8.0 * (a + b), 32.0 * (a + b), 5);
        let mut e = Vec::new();
        for &r in &rs {
            let (ra, rb) = rings(a, b, r)?;
            e.push(pair_energy(&ra, &rb, &FieldKind::Scalar { dim: 2 }, &ThermalSpec::zero_t(), &QuadratureSpec::new(64, 1))?.energy);
        }
        let se = loglog_slope(&rs, &e);
        Ok(vec![Check::gate(9, "2D scalar energy slope", se, -2.0, (se + 2.0).abs(), 0.01 * s)
            .with_note("absolute deviation")])
    })());
    out
}

fn proca(s: f64) -> Vec<Check> {
    let mut out = Vec::new();
    push(&mut out, 10, "Proca massless kernel", (|| {
        let mut worst = 0.0f64;
        for mass in [0.0, 1e-9] {
            let proca = FieldKind::proca(mass)?;
            for nu in [0.1, 0.5, 1.0, 2.0, 5.0] {
                for r in [0.3, 1.0, 2.5] {
                    let p = pair_kernel(&proca, nu, r)?.value;
                    let e = pair_kernel(&FieldKind::Em, nu, r)?.value;
                    worst = worst.max(rel_dev(p, e));
                }
            }
        }
        Ok(vec![Check::gate(10, "Proca m->0 kernel vs EM kernel", worst, 0.0, worst, 1e-12 * s)
            .with_note("largest relative deviation on the grid")])
    })());
    push(&mut out, 10, "Proca small-volume series", (|| {
        let (v1, v2, big_r) = (0.01, 0.02, 2.0);
        let m0 = proca_smallvolume_series(v1, v2, big_r, 1.0, 1.0, 0.0, 1)?;
        let dipole = -v1 * v2 * 23.0 / (64.0 * PI.powi(3) * big_r.powi(7));
        let mut positive = true;
        let mut smallest = f64::INFINITY;
        for m in [0.01, 0.05, 0.1] {
            for r in [1.0, 2.0, 4.0] {
                let t = proca_smallvolume_series(v1, v2, r, 1.0, 1.0, m, 2)?.terms[1];
                positive &= t > 0.0;
                smallest = smallest.min(t);
            }
        }
        let m = 0.05;
        let series = proca_smallvolume_series(v1, v2, big_r, 1.0, 1.0, m, 5)?;
        let quad = proca_point_energy_quadrature(v1, v2, big_r, 1.0, 1.0, m)?;
        let mut sign = Check::gate(10, "first mass correction positive", smallest, 0.0, 0.0, 0.0);
        if !positive {
            sign.status = Status::Fail;
        }
        Ok(vec![
            Check::relative(10, "series m=0 term vs point dipole", m0.value, dipole, 4.0 * f64::EPSILON * s),
            sign.with_note("measured is the smallest correction on the grid"),
            Check::info(10, "Proca series vs frequency quadrature at mR = 0.1", series.value, quad)
                .with_note("integration over nu in [m, inf)"),
        ])
    })());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_numbers() {
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"x\""), "\"say \"\"x\"\"\"");
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_num(f64::NAN), "");
    }

    #[test]
    fn richardson_removes_t2_and_t4() {
        let f = |t: f64| 2.0 + 3.0 * t * t - 5.0 * t.powi(4);
        let (v, _) = richardson_t2(f(0.1), f(0.05), f(0.025));
        assert!((v - 2.0).abs() < 1e-14);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = log_grid(1.0, 10.0, 4);
        let ys: Vec<f64> = xs.iter().map(|x| -3.0 * x.powf(-2.5)).collect();
        assert!((loglog_slope(&xs, &ys) + 2.5).abs() < 1e-12);
    }

    #[test]
    fn criterion_status_aggregates_gates() {
        let r = Report {
            checks: vec![
                Check::relative(1, "a", 1.0, 1.0, 1e-9),
                Check::info(1, "b", 2.0, 1.0),
                Check::relative(2, "c", 1.1, 1.0, 1e-9),
            ],
        };
        assert_eq!(r.criterion_status(1), Some(Status::Pass));
        assert_eq!(r.criterion_status(2), Some(Status::Fail));
        assert_eq!(r.criterion_status(3), None);
        assert!(!r.all_passed());
        assert_eq!(r.to_csv().lines().count(), 4);
    }
}
