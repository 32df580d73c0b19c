//! Task execution: a validated scene in, CSV text out.

use std::fmt::Write as _;

use casimir_core::closedform::energy_em_spheres_zero_t;
use casimir_core::validation::fmt_num;
use casimir_core::{
    energy_rings_2d, energy_spheres_3d_scalar, force, force_1d_finite_t, force_1d_zero_t, logdet_energy,
    series_energy, validate_with, Error as CoreError, FieldKind, LogVariant, PairScene, Scalar2dBranch,
    Shape, SpherePairGeometry, ThermalSpec, ValidationConfig,
};

use crate::config::{ConfigErrors, SceneConfig, SweepParameter, Task};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_CONVERGENCE: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Core(CoreError::Convergence(_) | CoreError::Conditioning(_)) => EXIT_NO_CONVERGENCE,
            Self::Core(_) | Self::Io(_) => EXIT_FAILURE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub csv: String,
    /// Human-readable lines for stderr.
    pub summary: String,
    pub exit_code: i32,
}

/// Runs `task`. `cfg` may be absent only for `validate`.
pub fn run(task: Task, cfg: Option<&SceneConfig>) -> Result<Outcome, RunError> {
    if task == Task::Validate {
        let scale = cfg.map_or(1.0, |c| c.tolerance_scale);
        return Ok(run_validate(scale));
    }
    let cfg = cfg.ok_or_else(|| RunError::Io(format!("the {} task needs --config", task.name())))?;
    cfg.check_task(task)?;
    match task {
        Task::Energy => run_energy(cfg),
        Task::Force => run_force(cfg),
        Task::Sweep => run_sweep(cfg),
        Task::Series => run_series(cfg),
        Task::Validate => unreachable!(),
    }
}

fn scene(cfg: &SceneConfig) -> PairScene {
    PairScene {
        a: cfg.bodies[0].clone(),
        b: cfg.bodies[1].clone(),
        kind: cfg.kind,
        thermal: cfg.thermal,
        quad: cfg.quad,
        options: cfg.options,
    }
}

fn rel_deviation(value: f64, oracle: Option<f64>) -> f64 {
    match oracle {
        Some(o) if o != 0.0 => ((value - o) / o).abs(),
        Some(_) if value == 0.0 => 0.0,
        _ => f64::NAN,
    }
}

fn row(csv: &mut String, param: f64, value: f64, err: f64, tail: f64, oracle: Option<f64>) {
    let _ = writeln!(
        csv,
        "{},{},{},{},{},{}",
        fmt_num(param),
        fmt_num(value),
        fmt_num(err),
        fmt_num(tail),
        fmt_num(oracle.unwrap_or(f64::NAN)),
        fmt_num(rel_deviation(value, oracle)),
    );
}

fn header(param: &str, value: &str) -> String {
    format!("{param},{value},quad_error,thermal_tail,oracle,rel_deviation\n")
}

fn constant_chis(s: &PairScene) -> Option<(f64, f64)> {
    (s.a.chi.is_constant() && s.b.chi.is_constant()).then(|| (s.a.chi.chi0(), s.b.chi.chi0()))
}

fn zero_t(s: &PairScene) -> bool {
    matches!(s.thermal, ThermalSpec::ZeroT { nu_min, .. } if nu_min == 0.0)
}

fn separation(s: &PairScene) -> f64 {
    let a = s.a.center();
    let b = s.b.center();
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Closed-form energy when one exists for this scene.
pub fn energy_oracle(s: &PairScene) -> Option<f64> {
    let (c1, c2) = constant_chis(s)?;
    if !zero_t(s) {
        return None;
    }
    let big_r = separation(s);
    match (&s.kind, &s.a.shape, &s.b.shape) {
        (FieldKind::Scalar { dim: 3 }, Shape::SphereShell { radius: a, .. }, Shape::SphereShell { radius: b, .. }) => {
            let g = SpherePairGeometry::new(*a, *b, big_r).ok()?;
            Some(energy_spheres_3d_scalar(&g, c1, c2, LogVariant::Corrected))
        }
        (FieldKind::Em, Shape::SphereShell { radius: a, .. }, Shape::SphereShell { radius: b, .. }) => {
            let g = SpherePairGeometry::new(*a, *b, big_r).ok()?;
            energy_em_spheres_zero_t(&g, c1, c2).ok()
        }
        (FieldKind::Scalar { dim: 2 }, Shape::RingShell { radius: a, .. }, Shape::RingShell { radius: b, .. })
            if s.options.scalar2d_branch != Scalar2dBranch::Bessel =>
        {
            energy_rings_2d(*a, *b, big_r, c1, c2).ok()
        }
        _ => None,
    }
}

/// Closed-form `∂E/∂R` when one exists.
pub fn force_oracle(s: &PairScene, dr: f64) -> Option<f64> {
    if let (FieldKind::Scalar { dim: 1 }, Shape::Interval { a, b }, Shape::Interval { a: c, b: d }) =
        (&s.kind, &s.a.shape, &s.b.shape)
    {
        let ((a, b, chi_l), (c, d, chi_r)) = if a < c {
            ((*a, *b, s.a.chi), (*c, *d, s.b.chi))
        } else {
            ((*c, *d, s.b.chi), (*a, *b, s.a.chi))
        };
        return match s.thermal {
            ThermalSpec::FiniteT { temperature, .. } => {
                let r = 0.5 * (c + d) - 0.5 * (a + b);
                force_1d_finite_t(r, 0.5 * (b - a), 0.5 * (d - c), &chi_l, &chi_r, temperature).ok()
            }
            ThermalSpec::ZeroT { nu_min, .. } if nu_min == 0.0 && chi_l.is_constant() && chi_r.is_constant() => {
                force_1d_zero_t(a, b, c, d, chi_l.chi0(), chi_r.chi0()).ok()
            }
            _ => None,
        };
    }
    // Richardson derivative of the closed-form energy
    let big_r = separation(s);
    let e = |h: f64| -> Option<f64> {
        let plus = energy_oracle(&s.at_separation(big_r + h))?;
        let minus = energy_oracle(&s.at_separation(big_r - h))?;
        Some((plus - minus) / (2.0 * h))
    };
    let d1 = e(dr)?;
    let d2 = e(0.5 * dr)?;
    Some((4.0 * d2 - d1) / 3.0)
}

fn run_energy(cfg: &SceneConfig) -> Result<Outcome, RunError> {
    let s = scene(cfg);
    let big_r = separation(&s);
    let e = s.energy()?;
    let oracle = energy_oracle(&s);
    let mut csv = header("R", "energy");
    row(&mut csv, big_r, e.energy, e.quad_error, e.thermal_tail, oracle);
    let mut summary = format!(
        "energy at R = {big_r}: {:.10e} (quadrature error {:.2e}, thermal tail {:.2e})\n",
        e.energy, e.quad_error, e.thermal_tail
    );
    if let Some(o) = oracle {
        let _ = writeln!(summary, "closed form: {o:.10e}, relative deviation {:.2e}", rel_deviation(e.energy, oracle));
    }
    Ok(Outcome {
        csv,
        summary,
        exit_code: EXIT_OK,
    })
}

fn run_force(cfg: &SceneConfig) -> Result<Outcome, RunError> {
    let base = scene(cfg);
    let big_r = cfg.force.separation.unwrap_or_else(|| separation(&base));
    let s = base.at_separation(big_r);
    let dr = cfg.force.step.unwrap_or(1e-3 * big_r);
    let f = force(&s, big_r, dr, cfg.force.method)?;
    let oracle = force_oracle(&s, dr);
    let mut csv = header("R", "force");
    row(&mut csv, big_r, f.force, f.error, f.thermal_tail, oracle);
    let mut summary = format!("force at R = {big_r}: {:.10e} (error {:.2e})\n", f.force, f.error);
    if let Some(o) = oracle {
        let _ = writeln!(summary, "closed form: {o:.10e}, relative deviation {:.2e}", rel_deviation(f.force, oracle));
    }
    Ok(Outcome {
        csv,
        summary,
        exit_code: EXIT_OK,
    })
}

fn thermal_at(cfg: &SceneConfig, t: f64) -> ThermalSpec {
    let tol = cfg.thermal.rel_tol();
    if t == 0.0 {
        return ThermalSpec::zero_t().with_rel_tol(tol);
    }
    match cfg.thermal {
        ThermalSpec::FiniteT {
            zero_mode, l_max_cap, ..
        } => ThermalSpec::FiniteT {
            temperature: t,
            zero_mode,
            rel_tol: tol,
            l_max_cap,
        },
        ThermalSpec::ZeroT { .. } => ThermalSpec::finite_t(t, cfg.kind.default_zero_mode()).with_rel_tol(tol),
    }
}

fn run_sweep(cfg: &SceneConfig) -> Result<Outcome, RunError> {
    let grid = cfg.sweep.expect("checked by check_task");
    let base = scene(cfg);
    let mut csv = header(grid.parameter.column(), "energy");
    let mut summary = String::new();
    for x in grid.values() {
        let s = match grid.parameter {
            SweepParameter::Separation => base.at_separation(x),
            SweepParameter::Temperature => PairScene {
                thermal: thermal_at(cfg, x),
                ..base.clone()
            },
        };
        let e = s.energy()?;
        let oracle = energy_oracle(&s);
        row(&mut csv, x, e.energy, e.quad_error, e.thermal_tail, oracle);
        let _ = writeln!(summary, "{} = {x:.6e}: energy {:.10e}", grid.parameter.column(), e.energy);
    }
    Ok(Outcome {
        csv,
        summary,
        exit_code: EXIT_OK,
    })
}

fn run_series(cfg: &SceneConfig) -> Result<Outcome, RunError> {
    let terms = series_energy(&cfg.bodies, cfg.series_order, &cfg.kind, &cfg.thermal, &cfg.quad)?;
    let exact = logdet_energy(&cfg.bodies, &cfg.kind, &cfg.thermal, &cfg.quad)?;
    let mut csv = header("order", "energy");
    let mut summary = format!("log-det energy: {:.10e}\n", exact.energy);
    let (mut sum, mut err, mut tail) = (0.0, 0.0, 0.0);
    for (i, t) in terms.iter().enumerate() {
        sum += t.energy;
        err += t.quad_error;
        tail += t.thermal_tail;
        row(&mut csv, (i + 1) as f64, sum, err, tail, Some(exact.energy));
        let _ = writeln!(
            summary,
            "through order {}: {sum:.10e} (relative deviation {:.2e})",
            i + 1,
            rel_deviation(sum, Some(exact.energy))
        );
    }
    Ok(Outcome {
        csv,
        summary,
        exit_code: EXIT_OK,
    })
}

fn run_validate(tolerance_scale: f64) -> Outcome {
    let report = validate_with(&ValidationConfig { tolerance_scale });
    let passed = report.all_passed();
    let mut summary = report.summary();
    let _ = writeln!(summary, "{}", if passed { "all checks passed" } else { "some checks failed" });
    Outcome {
        csv: report.to_csv(),
        summary,
        exit_code: if passed { EXIT_OK } else { EXIT_FAILURE },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_handles_zero_oracle() {
        assert_eq!(rel_deviation(0.0, Some(0.0)), 0.0);
        assert!(rel_deviation(1.0, Some(0.0)).is_nan());
        assert!(rel_deviation(1.0, None).is_nan());
        assert_eq!(rel_deviation(1.5, Some(1.0)), 0.5);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(RunError::Core(CoreError::Convergence("x".into())).exit_code(), 3);
        assert_eq!(RunError::Core(CoreError::Conditioning("x".into())).exit_code(), 3);
        assert_eq!(RunError::Core(CoreError::Domain("x".into())).exit_code(), 1);
        assert_eq!(RunError::Config(ConfigErrors(vec![])).exit_code(), 2);
    }
}
