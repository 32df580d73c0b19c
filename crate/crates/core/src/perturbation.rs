//! First-order pair energies, higher orders of the trace-log series on node
//! grids, the log-determinant resummation, and forces.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::geometry::{distance, min_separation, quadrature_nodes, Body, NodeSet, Point, QuadratureSpec, Shape};
use crate::kernels::{dyadic_unchecked, kernel_unchecked, proca_zeta, scalar_propagator, FieldKind};
use crate::sum::CompensatedSum;
use crate::susceptibility::SusceptibilityModel;
use crate::thermal::{thermal_reduce_many, ThermalSpec};

/// Largest node count for dense scalar systems.
pub const MAX_SCALAR_NODES: usize = 2000;
/// Largest node count for dense dyadic (3N × 3N) systems.
pub const MAX_DYADIC_NODES: usize = 600;
/// Smallest relative tolerance used for log-determinant frequency sums.
/// LU pivots of `I + X` carry absolute rounding errors near `1e-16`, which
/// limits the interaction part to roughly eight significant digits.
pub const LOGDET_REL_TOL_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyResult {
    pub energy: f64,
    /// Change of the result when both quadrature orders are halved.
    pub quad_error: f64,
    pub thermal_tail: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

impl EnergyResult {
    fn exact_zero(diagnostics: BTreeMap<String, f64>) -> Self {
        Self {
            energy: 0.0,
            quad_error: 0.0,
            thermal_tail: 0.0,
            diagnostics,
        }
    }

    pub fn diagnostic(&self, key: &str) -> Option<f64> {
        self.diagnostics.get(key).copied()
    }
}

/// Zero-temperature kernel used for 2D scalar bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scalar2dBranch {
    /// Static kernel `1/(32π³r²)` when both susceptibilities are constant
    /// and the temperature is zero, `K₀²` otherwise.
    #[default]
    Auto,
    Static,
    Bessel,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairOptions {
    pub scalar2d_branch: Scalar2dBranch,
}

fn check_body_dims(bodies: &[&Body], kind: &FieldKind) -> Result<()> {
    kind.validate()?;
    let d = kind.spatial_dim();
    for (i, b) in bodies.iter().enumerate() {
        b.validate()?;
        if b.dim() != d {
            return Err(domain(format!(
                "body {i} is {}-dimensional but the {kind:?} field needs {d}",
                b.dim()
            )));
        }
    }
    Ok(())
}

/// Node pairs of two bodies as `(wᵢwⱼ, rᵢⱼ)`, one row per node of the first.
struct PairGrid {
    rows: Vec<Vec<(f64, f64)>>,
}

impl PairGrid {
    fn new(a: &NodeSet, b: &NodeSet) -> Result<Self> {
        let rows: Vec<Vec<(f64, f64)>> = a
            .points
            .par_iter()
            .zip(a.weights.par_iter())
            .map(|(p, wa)| {
                b.points
                    .iter()
                    .zip(&b.weights)
                    .map(|(q, wb)| (wa * wb, distance(p, q)))
                    .collect()
            })
            .collect();
        if rows.iter().flatten().any(|(_, r)| !(*r > 0.0)) {
            return Err(Error::Singularity("nodes of different bodies coincide".into()));
        }
        Ok(Self { rows })
    }

    fn pairs(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// `Σᵢⱼ wᵢwⱼ k(rᵢⱼ)`; rows in parallel, reduction in row order.
    fn sum<K: Fn(f64) -> f64 + Sync>(&self, k: K) -> f64 {
        let partial: Vec<f64> = self
            .rows
            .par_iter()
            .map(|row| {
                let mut acc = CompensatedSum::new();
                for (ww, r) in row {
                    acc.add(ww * k(*r));
                }
                acc.value()
            })
            .collect();
        let mut total = CompensatedSum::new();
        partial.into_iter().for_each(|p| total.add(p));
        total.value()
    }
}

struct FirstOrder {
    energy: f64,
    tail: f64,
    terms: usize,
    capped: bool,
    pairs: usize,
}

fn resolve_branch(
    kind: &FieldKind,
    thermal: &ThermalSpec,
    a: &SusceptibilityModel,
    b: &SusceptibilityModel,
    requested: Scalar2dBranch,
) -> Result<bool> {
    let static_ok = *kind == FieldKind::Scalar { dim: 2 }
        && matches!(thermal, ThermalSpec::ZeroT { nu_min, .. } if *nu_min == 0.0)
        && a.is_constant()
        && b.is_constant();
    match requested {
        Scalar2dBranch::Auto => Ok(static_ok),
        Scalar2dBranch::Bessel => Ok(false),
        Scalar2dBranch::Static if static_ok => Ok(true),
        Scalar2dBranch::Static => Err(domain(
            "the static 2D kernel needs a 2D scalar field, zero temperature from nu = 0, and constant susceptibilities",
        )),
    }
}

fn first_order(
    a: &Body,
    b: &Body,
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
    sep: f64,
    use_static: bool,
) -> Result<FirstOrder> {
    let na = quadrature_nodes(a, quad)?;
    let nb = quadrature_nodes(b, quad)?;
    let grid = PairGrid::new(&na, &nb)?;
    if use_static {
        let s = grid.sum(|r| 1.0 / (32.0 * PI * PI * PI * r * r));
        return Ok(FirstOrder {
            energy: -a.chi.chi0() * b.chi.chi0() * s,
            tail: 0.0,
            terms: 0,
            capped: false,
            pairs: grid.pairs(),
        });
    }
    let kind = *kind;
    let reduced = thermal_reduce_many(
        |nu| {
            let c = a.chi.at_imag(nu) * b.chi.at_imag(nu);
            if c == 0.0 {
                return Ok(vec![0.0]);
            }
            Ok(vec![c * grid.sum(|r| kernel_unchecked(&kind, nu, r).unwrap_or(0.0))])
        },
        1,
        thermal,
        2.0 * sep,
        kind.mass_gap(),
    )?;
    Ok(FirstOrder {
        energy: -reduced.values[0],
        tail: reduced.tail_bounds[0],
        terms: reduced.terms,
        capped: reduced.capped,
        pairs: grid.pairs(),
    })
}

fn is_cloud(b: &Body) -> bool {
    matches!(b.shape, Shape::PointCloud { .. })
}

/// First-order interaction energy with default options.
pub fn pair_energy(
    a: &Body,
    b: &Body,
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    pair_energy_with(a, b, kind, thermal, quad, &PairOptions::default())
}

/// First-order interaction energy
/// `E = −Σ′_ν Σᵢⱼ wᵢwⱼ χ_A(iν)χ_B(iν) K(ν, |xᵢ − xⱼ|)`.
///
/// Only the cross term is included. Proca frequencies below the mass gap
/// are left out; `diagnostics["below_gap_excluded"]` is 1 when that band is
/// non-empty.
pub fn pair_energy_with(
    a: &Body,
    b: &Body,
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
    options: &PairOptions,
) -> Result<EnergyResult> {
    check_body_dims(&[a, b], kind)?;
    thermal.validate()?;
    quad.validate()?;
    let sep = min_separation(a, b)?;
    let mut diag = BTreeMap::new();
    diag.insert("min_separation".to_string(), sep);
    if a.chi.is_zero() || b.chi.is_zero() {
        return Ok(EnergyResult::exact_zero(diag));
    }
    let use_static = resolve_branch(kind, thermal, &a.chi, &b.chi, options.scalar2d_branch)?;
    let fine = first_order(a, b, kind, thermal, quad, sep, use_static)?;
    let quad_error = if is_cloud(a) && is_cloud(b) {
        0.0
    } else {
        let coarse = first_order(a, b, kind, thermal, &quad.coarsened(), sep, use_static)?;
        (fine.energy - coarse.energy).abs()
    };
    diag.insert("node_pairs".into(), fine.pairs as f64);
    diag.insert("thermal_terms".into(), fine.terms as f64);
    diag.insert("capped".into(), f64::from(u8::from(fine.capped)));
    diag.insert("static_2d_kernel".into(), f64::from(u8::from(use_static)));
    if let FieldKind::Proca { mass } = kind {
        diag.insert("mass_gap".into(), *mass);
        diag.insert("below_gap_excluded".into(), f64::from(u8::from(*mass > 0.0)));
    }
    Ok(EnergyResult {
        energy: fine.energy,
        quad_error,
        thermal_tail: fine.tail,
        diagnostics: diag,
    })
}

/// `(r, r′, r″)` of two intervals: centre distance and half-widths of the
/// right and left interval.
pub fn interval_parameters(a: f64, b: f64, c: f64, d: f64) -> Result<(f64, f64, f64)> {
    if !(a < b && b < c && c < d) || ![a, b, c, d].iter().all(|x| x.is_finite()) {
        return Err(domain(format!(
            "intervals must satisfy a < b < c < d, got {a}, {b}, {c}, {d}"
        )));
    }
    Ok((0.5 * (c + d) - 0.5 * (a + b), 0.5 * (d - c), 0.5 * (b - a)))
}

/// `e^{−2νr} sinh(2νr′) sinh(2νr″)` without overflow; `gap = r − r′ − r″`.
pub(crate) fn exp_sinh_sinh(nu: f64, gap: f64, rp: f64, rpp: f64) -> f64 {
    let s1 = -(-4.0 * nu * rp).exp_m1() * 0.5;
    let s2 = -(-4.0 * nu * rpp).exp_m1() * 0.5;
    (-2.0 * nu * gap).exp() * s1 * s2
}

/// Interval energy with both self-energy terms and the cross term, each in
/// the closed interval form.
///
/// The components are also reported separately in `diagnostics` as
/// `self_1`, `self_2` and `cross`. At finite temperature with the zero
/// mode skipped, the first-order cross energy from the double integral of
/// the 1D kernel is added as `cross_kernel`; it differs from `cross` by the
/// factor `−1/(4ν²)` per term.
/// Self-energy sums of frequency-independent susceptibilities grow without
/// bound; they stop at `l_max_cap` and set `capped`.
pub fn energy_1d_intervals(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    chi1: &SusceptibilityModel,
    chi2: &SusceptibilityModel,
    thermal: &ThermalSpec,
) -> Result<EnergyResult> {
    let (r, rp, rpp) = interval_parameters(a, b, c, d)?;
    chi1.validate()?;
    chi2.validate()?;
    let (l1, l2) = (b - a, d - c);
    let gap = c - b;
    let self_term = |chi: f64, len: f64, nu: f64| {
        // χ²/(2ν)·(−2L + (1 − e^{−2νL})/ν), written to avoid cancellation
        let x = 2.0 * nu * len;
        let bracket = if x < 1e-3 {
            // (1 − e^{−x})/x − 1 = −x/2 + x²/6 − x³/24
            len * 2.0 * (-x / 2.0 + x * x / 6.0 - x * x * x / 24.0)
        } else {
            -2.0 * len - (-x).exp_m1() / nu
        };
        if nu == 0.0 {
            // limit of the bracket over 2ν
            return -chi * chi * len * len;
        }
        chi * chi / (2.0 * nu) * bracket
    };
    // the 1D kernel diverges at ν = 0, so its double integral needs l ≥ 1
    let finite_t = matches!(
        thermal,
        ThermalSpec::FiniteT {
            zero_mode: crate::thermal::ZeroMode::Skip,
            ..
        }
    );
    let k = if finite_t { 4 } else { 3 };
    let reduced = thermal_reduce_many(
        |nu| {
            let c1 = chi1.at_imag(nu);
            let c2 = chi2.at_imag(nu);
            let ess = if nu == 0.0 {
                4.0 * rp * rpp
            } else {
                exp_sinh_sinh(nu, gap, rp, rpp) / (nu * nu)
            };
            let mut v = vec![self_term(c1, l1, nu), self_term(c2, l2, nu), -c1 * c2 * ess];
            if finite_t {
                v.push(c1 * c2 * ess / (4.0 * nu * nu));
            }
            Ok(v)
        },
        k,
        thermal,
        2.0 * gap,
        0.0,
    )?;
    let comps: Vec<f64> = reduced.values.iter().map(|v| -v).collect();
    let energy = comps[0] + comps[1] + comps[2];
    let mut diag = BTreeMap::new();
    diag.insert("self_1".into(), comps[0]);
    diag.insert("self_2".into(), comps[1]);
    diag.insert("cross".into(), comps[2]);
    if finite_t {
        diag.insert("cross_kernel".into(), comps[3]);
    }
    diag.insert("r".into(), r);
    diag.insert("r_prime".into(), rp);
    diag.insert("r_double_prime".into(), rpp);
    diag.insert("thermal_terms".into(), reduced.terms as f64);
    diag.insert("capped".into(), f64::from(u8::from(reduced.capped)));
    Ok(EnergyResult {
        energy,
        quad_error: 0.0,
        thermal_tail: reduced.tail_bounds[..3].iter().sum(),
        diagnostics: diag,
    })
}

/// `∂E/∂r` of two intervals from the closed interval energy:
/// `−Σ′_ν 2χ₁χ₂/ν · e^{−2νr} sinh(2νr′) sinh(2νr″)`.
pub fn force_1d_intervals(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    chi1: &SusceptibilityModel,
    chi2: &SusceptibilityModel,
    thermal: &ThermalSpec,
) -> Result<EnergyResult> {
    let (r, rp, rpp) = interval_parameters(a, b, c, d)?;
    let gap = c - b;
    let reduced = thermal_reduce_many(
        |nu| {
            if nu == 0.0 {
                return Ok(vec![0.0]);
            }
            let cc = chi1.at_imag(nu) * chi2.at_imag(nu);
            Ok(vec![2.0 * cc / nu * exp_sinh_sinh(nu, gap, rp, rpp)])
        },
        1,
        thermal,
        2.0 * gap,
        0.0,
    )?;
    let mut diag = BTreeMap::new();
    diag.insert("r".into(), r);
    diag.insert("thermal_terms".into(), reduced.terms as f64);
    diag.insert("capped".into(), f64::from(u8::from(reduced.capped)));
    Ok(EnergyResult {
        energy: -reduced.values[0],
        quad_error: 0.0,
        thermal_tail: reduced.tail_bounds[0],
        diagnostics: diag,
    })
}

/// All bodies discretised and concatenated in canonical order.
struct Cloud {
    points: Vec<Point>,
    weights: Vec<f64>,
    chis: Vec<SusceptibilityModel>,
    /// Node index ranges of the bodies.
    ranges: Vec<std::ops::Range<usize>>,
    min_node_distance: f64,
    min_body_separation: f64,
}

/// Orders bodies by their debug representation so that any permutation of
/// the same bodies yields identical matrices.
fn canonical(bodies: &[Body]) -> Vec<&Body> {
    let mut v: Vec<(&Body, String)> = bodies.iter().map(|b| (b, format!("{b:?}"))).collect();
    v.sort_by(|x, y| x.1.cmp(&y.1));
    v.into_iter().map(|(b, _)| b).collect()
}

fn build_cloud(bodies: &[Body], kind: &FieldKind, quad: &QuadratureSpec) -> Result<Cloud> {
    if bodies.is_empty() {
        return Err(domain("at least one body is required"));
    }
    let refs: Vec<&Body> = bodies.iter().collect();
    check_body_dims(&refs, kind)?;
    quad.validate()?;
    let mut min_sep = f64::INFINITY;
    for i in 0..bodies.len() {
        for j in i + 1..bodies.len() {
            min_sep = min_sep.min(min_separation(&bodies[i], &bodies[j])?);
        }
    }
    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut chis = Vec::new();
    let mut ranges = Vec::new();
    for b in canonical(bodies) {
        let ns = quadrature_nodes(b, quad)?;
        let start = points.len();
        points.extend(ns.points);
        weights.extend(ns.weights);
        ranges.push(start..points.len());
        chis.extend(std::iter::repeat(b.chi).take(points.len() - start));
    }
    let (cap, label) = match kind {
        FieldKind::Scalar { .. } => (MAX_SCALAR_NODES, "scalar"),
        _ => (MAX_DYADIC_NODES, "dyadic"),
    };
    if points.len() > cap {
        return Err(Error::TooLarge(format!(
            "{} nodes exceed the {label} limit of {cap}",
            points.len()
        )));
    }
    let mut dmin = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            dmin = dmin.min(distance(&points[i], &points[j]));
        }
    }
    if dmin == 0.0 {
        return Err(Error::Singularity("two quadrature nodes coincide".into()));
    }
    Ok(Cloud {
        points,
        weights,
        chis,
        ranges,
        min_node_distance: dmin,
        min_body_separation: min_sep,
    })
}

impl Cloud {
    /// Frequency decay length of the slowest matrix entry products.
    fn decay_scale(&self) -> f64 {
        let d = if self.points.len() > 1 {
            self.min_node_distance
        } else {
            self.min_body_separation
        };
        2.0 * d.min(self.min_body_separation)
    }

    /// `G⁰X` at frequency `nu` with the diagonal (self-point) blocks zeroed.
    fn matrix(&self, kind: &FieldKind, nu: f64) -> DMatrix<f64> {
        let n = self.points.len();
        let c = kind.components();
        let chis: Vec<f64> = self.chis.iter().map(|m| m.at_imag(nu)).collect();
        let kappa = match *kind {
            FieldKind::Em => nu,
            FieldKind::Proca { mass } => proca_zeta(nu, mass).unwrap_or(f64::NAN),
            FieldKind::Scalar { .. } => nu,
        };
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0.0; c * c * n];
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let s = chis[j] * self.weights[j];
                    let p = &self.points[i];
                    let q = &self.points[j];
                    let rv = [p[0] - q[0], p[1] - q[1], p[2] - q[2]];
                    let r = distance(p, q);
                    match *kind {
                        FieldKind::Scalar { dim } => {
                            row[j] = s * scalar_propagator(dim, nu, r);
                        }
                        _ => {
                            let g = dyadic_unchecked(kappa, rv, r);
                            for a in 0..3 {
                                for b in 0..3 {
                                    row[a * 3 * n + 3 * j + b] = s * g[a][b];
                                }
                            }
                        }
                    }
                }
                row
            })
            .collect();
        let dim = c * n;
        let mut m = DMatrix::zeros(dim, dim);
        for (i, row) in rows.iter().enumerate() {
            for a in 0..c {
                for col in 0..dim {
                    m[(c * i + a, col)] = row[a * dim + col];
                }
            }
        }
        m
    }

    /// Splits `m` into its block-diagonal (single-body) part and the rest.
    fn split(&self, m: &DMatrix<f64>, c: usize) -> (DMatrix<f64>, DMatrix<f64>) {
        let mut d = DMatrix::zeros(m.nrows(), m.ncols());
        for r in &self.ranges {
            let (lo, len) = (c * r.start, c * r.len());
            d.view_mut((lo, lo), (len, len)).copy_from(&m.view((lo, lo), (len, len)));
        }
        let o = m - &d;
        (d, o)
    }
}

/// `tr Mⁿ` and its part from walks touching more than one body,
/// `tr(Mⁿ − Dⁿ)`, for `n = 1..=n_max`. The latter uses
/// `Mⁿ − Dⁿ = M(Mⁿ⁻¹ − Dⁿ⁻¹) + O Dⁿ⁻¹`, which never subtracts the large
/// single-body traces.
fn series_traces(m: &DMatrix<f64>, d: &DMatrix<f64>, o: &DMatrix<f64>, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut total = Vec::with_capacity(n_max);
    let mut inter = Vec::with_capacity(n_max);
    let mut p = m.clone();
    let mut dp = DMatrix::identity(m.nrows(), m.ncols());
    let mut delta = o.clone();
    for n in 1..=n_max {
        total.push(p.trace());
        inter.push(delta.trace());
        if n < n_max {
            p = &p * m;
            dp = &dp * d;
            delta = m * &delta + o * &dp;
        }
    }
    (total, inter)
}

/// `ln det A` for `A` close to the identity, failing when the determinant
/// is not positive or a pivot is negligibly small.
fn ln_det_near_identity(a: DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    let lu = a.lu();
    let u = lu.u();
    let mut sign = lu.p().determinant::<f64>();
    let mut acc = CompensatedSum::new();
    for i in 0..n {
        let p = u[(i, i)];
        if !(p.abs() > 1e-13) || !p.is_finite() {
            return Err(Error::Conditioning(format!("pivot {i} of I + G0X is {p:e}")));
        }
        if p < 0.0 {
            sign = -sign;
        }
        acc.add((p.abs() - 1.0).ln_1p());
    }
    if sign <= 0.0 {
        return Err(Error::Conditioning("det(I + G0X) is not positive".into()));
    }
    Ok(acc.value())
}

/// `ln det(I + M) − Σ_b ln det(I + M_bb) = ln det(I + (I + D)⁻¹ O)`.
fn ln_det_interaction(d: &DMatrix<f64>, o: &DMatrix<f64>) -> Result<f64> {
    let n = d.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let lu = (&id + d).lu();
    // (I + D) must itself have a positive determinant
    ln_det_near_identity(&id + d)?;
    let x = lu
        .solve(o)
        .ok_or_else(|| Error::Conditioning("I + G0X of a single body is singular".into()))?;
    ln_det_near_identity(id + x)
}

fn check_supported(kind: &FieldKind, thermal: &ThermalSpec) -> Result<()> {
    if let (FieldKind::Scalar { dim: 1 | 2 }, ThermalSpec::FiniteT { zero_mode, .. }) = (kind, thermal) {
        if *zero_mode != crate::thermal::ZeroMode::Skip {
            return Err(domain(
                "the 1D and 2D scalar propagators diverge at zero frequency; use zero_mode = skip",
            ));
        }
    }
    Ok(())
}

/// Terms `n = 1..=n_max` of the trace-log series on the node grid.
///
/// Entry `n − 1` holds the interaction part of order `n` in `energy` and the
/// full term, self parts included, in `diagnostics["total"]`.
pub fn series_energy(
    bodies: &[Body],
    n_max: usize,
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
) -> Result<Vec<EnergyResult>> {
    if n_max == 0 {
        return Err(domain("n_max must be >= 1"));
    }
    thermal.validate()?;
    check_supported(kind, thermal)?;
    let fine = series_on(bodies, n_max, kind, thermal, quad)?;
    let clouds = bodies.iter().all(is_cloud);
    let coarse = if clouds {
        None
    } else {
        Some(series_on(bodies, n_max, kind, thermal, &quad.coarsened())?)
    };
    Ok(fine
        .into_iter()
        .enumerate()
        .map(|(i, mut term)| {
            if let Some(c) = &coarse {
                term.quad_error = (term.energy - c[i].energy).abs();
            }
            term
        })
        .collect())
}

fn series_on(
    bodies: &[Body],
    n_max: usize,
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
) -> Result<Vec<EnergyResult>> {
    let cloud = build_cloud(bodies, kind, quad)?;
    let c = kind.components();
    let reduced = thermal_reduce_many(
        |nu| {
            let m = cloud.matrix(kind, nu);
            let (d, o) = cloud.split(&m, c);
            let (total, inter) = series_traces(&m, &d, &o, n_max);
            let mut v = Vec::with_capacity(2 * n_max);
            for n in 1..=n_max {
                let coef = if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
                v.push(coef * inter[n - 1]);
            }
            for n in 1..=n_max {
                let coef = if n % 2 == 1 { 1.0 } else { -1.0 } / n as f64;
                v.push(coef * total[n - 1]);
            }
            Ok(v)
        },
        2 * n_max,
        thermal,
        cloud.decay_scale(),
        kind.mass_gap(),
    )?;
    Ok((0..n_max)
        .map(|i| {
            let mut diag = BTreeMap::new();
            diag.insert("order".into(), (i + 1) as f64);
            diag.insert("total".into(), reduced.values[n_max + i]);
            diag.insert("nodes".into(), cloud.points.len() as f64);
            diag.insert("thermal_terms".into(), reduced.terms as f64);
            diag.insert("capped".into(), f64::from(u8::from(reduced.capped)));
            EnergyResult {
                energy: reduced.values[i],
                quad_error: 0.0,
                thermal_tail: reduced.tail_bounds[i],
                diagnostics: diag,
            }
        })
        .collect())
}

/// Interaction energy from the resummed series:
/// `Σ′_ν [ln det(I + G⁰X) − Σ_bodies ln det(I + G⁰X)_body]`.
pub fn logdet_energy(
    bodies: &[Body],
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    thermal.validate()?;
    check_supported(kind, thermal)?;
    let thermal = &thermal.with_rel_tol(thermal.rel_tol().max(LOGDET_REL_TOL_FLOOR));
    let fine = logdet_on(bodies, kind, thermal, quad)?;
    if bodies.iter().all(is_cloud) {
        return Ok(fine);
    }
    let coarse = logdet_on(bodies, kind, thermal, &quad.coarsened())?;
    Ok(EnergyResult {
        quad_error: (fine.energy - coarse.energy).abs(),
        ..fine
    })
}

fn logdet_on(
    bodies: &[Body],
    kind: &FieldKind,
    thermal: &ThermalSpec,
    quad: &QuadratureSpec,
) -> Result<EnergyResult> {
    let cloud = build_cloud(bodies, kind, quad)?;
    let c = kind.components();
    let reduced = thermal_reduce_many(
        |nu| {
            let m = cloud.matrix(kind, nu);
            let (d, o) = cloud.split(&m, c);
            Ok(vec![ln_det_interaction(&d, &o)?])
        },
        1,
        thermal,
        cloud.decay_scale(),
        kind.mass_gap(),
    )?;
    let mut diag = BTreeMap::new();
    diag.insert("nodes".into(), cloud.points.len() as f64);
    diag.insert("thermal_terms".into(), reduced.terms as f64);
    diag.insert("capped".into(), f64::from(u8::from(reduced.capped)));
    Ok(EnergyResult {
        energy: reduced.values[0],
        quad_error: 0.0,
        thermal_tail: reduced.tail_bounds[0],
        diagnostics: diag,
    })
}

/// Two bodies in a field, as used for forces and sweeps.
#[derive(Debug, Clone, PartialEq)]
pub struct PairScene {
    pub a: Body,
    pub b: Body,
    pub kind: FieldKind,
    pub thermal: ThermalSpec,
    pub quad: QuadratureSpec,
    pub options: PairOptions,
}

impl PairScene {
    /// Unit vector from the centre of `a` towards the centre of `b`
    /// (`x̂` when the centres coincide).
    pub fn axis(&self) -> Point {
        let ca = self.a.center();
        let cb = self.b.center();
        let d = [cb[0] - ca[0], cb[1] - ca[1], cb[2] - ca[2]];
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if n == 0.0 {
            [1.0, 0.0, 0.0]
        } else {
            d.map(|x| x / n)
        }
    }

    /// Copy with `b` moved along the axis so the centres are `big_r` apart.
    pub fn at_separation(&self, big_r: f64) -> Self {
        let ca = self.a.center();
        let cb = self.b.center();
        let axis = self.axis();
        let target = [ca[0] + big_r * axis[0], ca[1] + big_r * axis[1], ca[2] + big_r * axis[2]];
        let delta = [target[0] - cb[0], target[1] - cb[1], target[2] - cb[2]];
        Self {
            b: self.b.translated(delta),
            ..self.clone()
        }
    }

    pub fn energy(&self) -> Result<EnergyResult> {
        pair_energy_with(&self.a, &self.b, &self.kind, &self.thermal, &self.quad, &self.options)
    }

    /// Interval endpoints `(a, b, c, d)` ordered left to right, when both
    /// bodies are intervals.
    fn intervals(&self) -> Option<(f64, f64, f64, f64, SusceptibilityModel, SusceptibilityModel)> {
        match (&self.a.shape, &self.b.shape) {
            (Shape::Interval { a, b }, Shape::Interval { a: c, b: d }) => {
                if a < c {
                    Some((*a, *b, *c, *d, self.a.chi, self.b.chi))
                } else {
                    Some((*c, *d, *a, *b, self.b.chi, self.a.chi))
                }
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ForceMethod {
    /// Analytic frequency sum for two intervals, Richardson otherwise.
    #[default]
    Auto,
    Central,
    Richardson,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForceResult {
    /// `∂E/∂R`; negative values pull the bodies together.
    pub force: f64,
    /// Finite-difference error estimate plus the quadrature error of the
    /// energies it was built from.
    pub error: f64,
    pub thermal_tail: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

/// `∂E/∂R` at centre distance `big_r`.
pub fn force(scene: &PairScene, big_r: f64, dr: f64, method: ForceMethod) -> Result<ForceResult> {
    if !(dr > 0.0 && dr.is_finite()) {
        return Err(domain(format!("dR must be finite and > 0, got {dr}")));
    }
    if !(big_r > 0.0 && big_r.is_finite()) {
        return Err(domain(format!("R must be finite and > 0, got {big_r}")));
    }
    let mut diag = BTreeMap::new();
    diag.insert("R".into(), big_r);
    if method == ForceMethod::Auto && scene.kind == (FieldKind::Scalar { dim: 1 }) {
        if let Some((a, b, c, d, c1, c2)) = scene.at_separation(big_r).intervals() {
            if !(a < b && b < c && c < d) {
                let sep = (c - b).max(0.0);
                return Err(Error::Overlap { separation: sep });
            }
            let f = force_1d_intervals(a, b, c, d, &c1, &c2, &scene.thermal)?;
            diag.insert("analytic".into(), 1.0);
            return Ok(ForceResult {
                force: f.energy,
                error: 0.0,
                thermal_tail: f.thermal_tail,
                diagnostics: diag,
            });
        }
    }
    let energy_at = |x: f64| scene.at_separation(x).energy();
    let central = |h: f64| -> Result<(f64, f64, f64)> {
        let ep = energy_at(big_r + h)?;
        let em = energy_at(big_r - h)?;
        Ok((
            (ep.energy - em.energy) / (2.0 * h),
            (ep.quad_error + em.quad_error) / (2.0 * h),
            (ep.thermal_tail + em.thermal_tail) / (2.0 * h),
        ))
    };
    let (f1, q1, t1) = central(dr)?;
    diag.insert("analytic".into(), 0.0);
    match method {
        ForceMethod::Central => Ok(ForceResult {
            force: f1,
            error: q1,
            thermal_tail: t1,
            diagnostics: diag,
        }),
        _ => {
            let (f2, q2, t2) = central(0.5 * dr)?;
            let f = (4.0 * f2 - f1) / 3.0;
            diag.insert("richardson_step".into(), (f - f2).abs());
            Ok(ForceResult {
                force: f,
                error: (f - f2).abs() + q1.max(q2),
                thermal_tail: t1.max(t2),
                diagnostics: diag,
            })
        }
    }
}
