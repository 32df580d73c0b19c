//! Scene configuration: JSON text to validated engine types.
//!
//! Validation walks the document by hand so every problem is reported with
//! the JSON path of the offending field. All problems found are returned
//! together rather than stopping at the first.

use std::fmt;

use casimir_core::{
    min_separation, Body, Error as CoreError, FieldKind, ForceMethod, PairOptions, QuadratureSpec, Scalar2dBranch,
    Shape, SusceptibilityModel, ThermalSpec, ZeroMode,
};
use serde_json::{Map, Value};

pub const FIELD_KINDS: [&str; 5] = ["scalar1d", "scalar2d", "scalar3d", "em", "proca"];
pub const SHAPES: [&str; 5] = ["interval", "ring", "sphere_shell", "ball", "point_cloud"];
pub const TASKS: [&str; 5] = ["energy", "force", "sweep", "series", "validate"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// JSON path such as `bodies[1].center`; empty for the document root.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

/// Every problem found in one document.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl ConfigErrors {
    pub fn mentions(&self, path: &str) -> bool {
        self.0.iter().any(|e| e.path == path)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Energy,
    Force,
    Sweep,
    Series,
    Validate,
}

impl Task {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "energy" => Self::Energy,
            "force" => Self::Force,
            "sweep" => Self::Sweep,
            "series" => Self::Series,
            "validate" => Self::Validate,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Energy => "energy",
            Self::Force => "force",
            Self::Sweep => "sweep",
            Self::Series => "series",
            Self::Validate => "validate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    /// Centre distance between the two bodies.
    Separation,
    Temperature,
}

impl SweepParameter {
    pub fn column(self) -> &'static str {
        match self {
            Self::Separation => "R",
            Self::Temperature => "temperature",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub parameter: SweepParameter,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let f = i as f64 / n;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => self.min * (self.max / self.min).powf(f),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForceSettings {
    /// Centre distance; the configured distance when absent.
    pub separation: Option<f64>,
    /// Finite-difference step; `1e-3·R` when absent.
    pub step: Option<f64>,
    pub method: ForceMethod,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneConfig {
    pub kind: FieldKind,
    pub bodies: Vec<Body>,
    pub thermal: ThermalSpec,
    pub quad: QuadratureSpec,
    pub options: PairOptions,
    pub task: Option<Task>,
    pub sweep: Option<SweepGrid>,
    pub force: ForceSettings,
    pub series_order: usize,
    pub tolerance_scale: f64,
}

impl SceneConfig {
    /// Centre distance of the first two bodies.
    pub fn separation(&self) -> Option<f64> {
        if self.bodies.len() < 2 {
            return None;
        }
        let a = self.bodies[0].center();
        let b = self.bodies[1].center();
        Some(((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt())
    }

    /// Checks that only make sense once the task is known.
    pub fn check_task(&self, task: Task) -> Result<(), ConfigErrors> {
        let mut errs = Errors::default();
        if let Some(t) = self.task {
            if t != task {
                errs.push("task", format!("config declares task \"{}\" but \"{}\" was requested", t.name(), task.name()));
            }
        }
        match task {
            Task::Energy | Task::Force | Task::Sweep => {
                if self.bodies.len() != 2 {
                    errs.push("bodies", format!("the {} task needs exactly 2 bodies, got {}", task.name(), self.bodies.len()));
                }
            }
            Task::Series => {
                if self.bodies.len() < 2 {
                    errs.push("bodies", "the series task needs at least 2 bodies");
                }
            }
            Task::Validate => {}
        }
        if task == Task::Sweep && self.sweep.is_none() {
            errs.push("sweep", "the sweep task needs a sweep grid");
        }
        let one_d_analytic_force =
            task == Task::Force && self.kind == (FieldKind::Scalar { dim: 1 }) && self.force.method == ForceMethod::Auto;
        if matches!(task, Task::Energy | Task::Sweep | Task::Series) || (task == Task::Force && !one_d_analytic_force) {
            if let FieldKind::Scalar { dim: 1 } = self.kind {
                if let ThermalSpec::ZeroT { nu_min, .. } = self.thermal {
                    if nu_min == 0.0 {
                        errs.push("thermal.temperature", "the 1D scalar energy diverges at zero temperature; set a temperature > 0 or thermal.nu_min > 0");
                    }
                }
            }
        }
        if task == Task::Sweep {
            if let Some(g) = self.sweep {
                if g.parameter == SweepParameter::Separation && self.bodies.len() == 2 {
                    if let Some(r) = self.separation() {
                        if r == 0.0 {
                            errs.push("bodies[1].center", "a separation sweep needs distinct body centres");
                        }
                    }
                    self.check_separation(&mut errs, g.min, "sweep.min");
                }
            }
        }
        if task == Task::Force && self.bodies.len() == 2 {
            if let Some(r) = self.force.separation {
                let h = self.force.step.unwrap_or(1e-3 * r);
                self.check_separation(&mut errs, r - h, "force.separation");
            }
        }
        errs.finish(())
    }

    fn check_separation(&self, errs: &mut Errors, r: f64, path: &str) {
        let Some(r0) = self.separation() else { return };
        if r0 == 0.0 {
            return;
        }
        let axis_b = {
            let a = self.bodies[0].center();
            let b = self.bodies[1].center();
            [(b[0] - a[0]) / r0, (b[1] - a[1]) / r0, (b[2] - a[2]) / r0]
        };
        let delta = axis_b.map(|x| x * (r - r0));
        let moved = self.bodies[1].translated(delta);
        if !(r > 0.0) || min_separation(&self.bodies[0], &moved).is_err() {
            errs.push(path, format!("bodies overlap at centre distance {r}"));
        }
    }
}

#[derive(Default)]
struct Errors(Vec<ConfigError>);

impl Errors {
    fn push(&mut self, path: impl Into<String>, msg: impl Into<String>) {
        self.0.push(ConfigError {
            path: path.into(),
            message: msg.into(),
        });
    }

    fn finish<T>(self, v: T) -> Result<T, ConfigErrors> {
        if self.0.is_empty() {
            Ok(v)
        } else {
            Err(ConfigErrors(self.0))
        }
    }
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn quoted(list: &[&str]) -> String {
    list.iter().map(|s| format!("\"{s}\"")).collect::<Vec<_>>().join(", ")
}

/// Typed access to one JSON object with path-addressed errors.
struct Obj<'a> {
    map: &'a Map<String, Value>,
    path: String,
}

impl<'a> Obj<'a> {
    fn new(v: &'a Value, path: &str, errs: &mut Errors) -> Option<Self> {
        match v.as_object() {
            Some(map) => Some(Self {
                map,
                path: path.to_string(),
            }),
            None => {
                errs.push(path, "expected an object");
                None
            }
        }
    }

    fn at(&self, key: &str) -> String {
        join(&self.path, key)
    }

    fn allow(&self, keys: &[&str], errs: &mut Errors) {
        for k in self.map.keys() {
            if !keys.contains(&k.as_str()) {
                errs.push(self.at(k), format!("unknown field; allowed fields are {}", quoted(keys)));
            }
        }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn number(&self, key: &str, errs: &mut Errors) -> Option<f64> {
        match self.map.get(key) {
            None => None,
            Some(v) => match v.as_f64() {
                Some(x) if x.is_finite() => Some(x),
                _ => {
                    errs.push(self.at(key), "expected a finite number");
                    None
                }
            },
        }
    }

    fn required_number(&self, key: &str, errs: &mut Errors) -> Option<f64> {
        if !self.map.contains_key(key) {
            errs.push(self.at(key), "required field is missing");
            return None;
        }
        self.number(key, errs)
    }

    fn positive(&self, key: &str, errs: &mut Errors) -> Option<f64> {
        let x = self.required_number(key, errs)?;
        if x > 0.0 {
            Some(x)
        } else {
            errs.push(self.at(key), format!("must be > 0, got {x}"));
            None
        }
    }

    fn count(&self, key: &str, errs: &mut Errors) -> Option<u64> {
        match self.map.get(key) {
            None => None,
            Some(v) => match v.as_u64() {
                Some(n) => Some(n),
                None => {
                    errs.push(self.at(key), "expected a non-negative integer");
                    None
                }
            },
        }
    }

    fn string(&self, key: &str, errs: &mut Errors) -> Option<&'a str> {
        match self.map.get(key) {
            None => None,
            Some(v) => match v.as_str() {
                Some(s) => Some(s),
                None => {
                    errs.push(self.at(key), "expected a string");
                    None
                }
            },
        }
    }

    fn choice(&self, key: &str, allowed: &[&str], errs: &mut Errors) -> Option<&'a str> {
        let s = self.string(key, errs)?;
        if allowed.contains(&s) {
            Some(s)
        } else {
            errs.push(self.at(key), format!("unknown value \"{s}\"; allowed values are {}", quoted(allowed)));
            None
        }
    }

    fn point<const N: usize>(&self, key: &str, errs: &mut Errors) -> Option<[f64; N]> {
        let v = self.map.get(key)?;
        let arr = v.as_array().filter(|a| a.len() == N);
        let Some(arr) = arr else {
            errs.push(self.at(key), format!("expected an array of {N} numbers"));
            return None;
        };
        let mut out = [0.0; N];
        for (i, x) in arr.iter().enumerate() {
            match x.as_f64() {
                Some(x) if x.is_finite() => out[i] = x,
                _ => {
                    errs.push(format!("{}[{i}]", self.at(key)), "expected a finite number");
                    return None;
                }
            }
        }
        Some(out)
    }
}

/// Parses and validates a scene document.
pub fn parse_config(text: &str) -> Result<SceneConfig, ConfigErrors> {
    let doc: Value = serde_json::from_str(text).map_err(|e| {
        ConfigErrors(vec![ConfigError {
            path: String::new(),
            message: format!("invalid JSON at line {} column {}: {e}", e.line(), e.column()),
        }])
    })?;
    let mut errs = Errors::default();
    let Some(root) = Obj::new(&doc, "", &mut errs) else {
        return Err(ConfigErrors(errs.0));
    };
    root.allow(
        &["field", "bodies", "thermal", "quadrature", "options", "task", "sweep", "force", "series", "validation"],
        &mut errs,
    );

    let kind = parse_field(&root, &mut errs);
    let task = root.choice("task", &TASKS, &mut errs).and_then(Task::parse);
    let bodies = parse_bodies(&root, kind, &mut errs);
    let thermal = parse_thermal(&root, kind, &mut errs);
    let quad = parse_quadrature(&root, &mut errs);
    let options = parse_options(&root, &mut errs);
    let sweep = parse_sweep(&root, &mut errs);
    let force = parse_force(&root, &mut errs);
    let series_order = parse_series(&root, &mut errs);
    let tolerance_scale = parse_validation(&root, &mut errs);

    if let (Some(bodies), true) = (&bodies, errs.0.is_empty()) {
        for j in 0..bodies.len() {
            for i in 0..j {
                match min_separation(&bodies[i], &bodies[j]) {
                    Ok(_) => {}
                    Err(CoreError::Overlap { separation }) => errs.push(
                        position_path(j, &bodies[j]),
                        format!("body {j} overlaps body {i} (gap {separation:e})"),
                    ),
                    Err(e) => errs.push(format!("bodies[{j}]"), e.to_string()),
                }
            }
        }
    }

    if let Some(g) = sweep {
        if g.parameter == SweepParameter::Temperature {
            if g.min < 0.0 {
                errs.push("sweep.min", "temperatures must be >= 0");
            }
            if g.min == 0.0 && kind == Some(FieldKind::Scalar { dim: 1 }) {
                errs.push("sweep.min", "the 1D scalar energy diverges at zero temperature; start the sweep above 0");
            }
        }
    }

    if !errs.0.is_empty() {
        return Err(ConfigErrors(errs.0));
    }
    Ok(SceneConfig {
        kind: kind.expect("checked"),
        bodies: bodies.expect("checked"),
        thermal: thermal.expect("checked"),
        quad: quad.expect("checked"),
        options,
        task,
        sweep,
        force,
        series_order,
        tolerance_scale,
    })
}

fn position_path(j: usize, body: &Body) -> String {
    match body.shape {
        Shape::Interval { .. } => format!("bodies[{j}].a"),
        Shape::PointCloud { .. } => format!("bodies[{j}].nodes"),
        _ => format!("bodies[{j}].center"),
    }
}

fn parse_field(root: &Obj, errs: &mut Errors) -> Option<FieldKind> {
    let Some(v) = root.get("field") else {
        errs.push("field", "required field is missing");
        return None;
    };
    let f = Obj::new(v, "field", errs)?;
    f.allow(&["kind", "mass"], errs);
    let Some(kind) = f.get("kind") else {
        errs.push("field.kind", format!("required field is missing; allowed kinds are {}", quoted(&FIELD_KINDS)));
        return None;
    };
    let Some(kind) = kind.as_str() else {
        errs.push("field.kind", format!("expected a string; allowed kinds are {}", quoted(&FIELD_KINDS)));
        return None;
    };
    if kind != "proca" && f.get("mass").is_some() {
        errs.push("field.mass", "only the proca field takes a mass");
    }
    match kind {
        "scalar1d" => Some(FieldKind::Scalar { dim: 1 }),
        "scalar2d" => Some(FieldKind::Scalar { dim: 2 }),
        "scalar3d" => Some(FieldKind::Scalar { dim: 3 }),
        "em" => Some(FieldKind::Em),
        "proca" => {
            let m = f.required_number("mass", errs)?;
            if m < 0.0 {
                errs.push("field.mass", format!("must be >= 0, got {m}"));
                return None;
            }
            Some(FieldKind::Proca { mass: m })
        }
        other => {
            errs.push("field.kind", format!("unknown field kind \"{other}\"; allowed kinds are {}", quoted(&FIELD_KINDS)));
            None
        }
    }
}

fn parse_chi(v: &Value, path: &str, errs: &mut Errors) -> Option<SusceptibilityModel> {
    if let Some(x) = v.as_f64() {
        return match SusceptibilityModel::constant(x) {
            Ok(m) => Some(m),
            Err(e) => {
                errs.push(path, e.to_string());
                None
            }
        };
    }
    let o = Obj::new(v, path, errs)?;
    let model = o.choice("model", &["constant", "lorentz"], errs);
    let m = match model {
        Some("constant") => {
            o.allow(&["model", "chi0"], errs);
            SusceptibilityModel::constant(o.required_number("chi0", errs)?)
        }
        Some("lorentz") => {
            o.allow(&["model", "chi0", "omega0", "gamma"], errs);
            let chi0 = o.required_number("chi0", errs);
            let w0 = o.required_number("omega0", errs);
            let g = o.required_number("gamma", errs);
            SusceptibilityModel::lorentz(chi0?, w0?, g?)
        }
        _ => {
            if o.get("model").is_none() {
                errs.push(o.at("model"), "required field is missing; allowed models are \"constant\", \"lorentz\"");
            }
            return None;
        }
    };
    match m {
        Ok(m) => Some(m),
        Err(e) => {
            errs.push(path, e.to_string());
            None
        }
    }
}

fn parse_bodies(root: &Obj, kind: Option<FieldKind>, errs: &mut Errors) -> Option<Vec<Body>> {
    let Some(v) = root.get("bodies") else {
        errs.push("bodies", "required field is missing");
        return None;
    };
    let Some(arr) = v.as_array() else {
        errs.push("bodies", "expected an array of bodies");
        return None;
    };
    if arr.is_empty() {
        errs.push("bodies", "at least one body is required");
        return None;
    }
    let n_before = errs.0.len();
    let mut bodies = Vec::new();
    for (i, b) in arr.iter().enumerate() {
        let path = format!("bodies[{i}]");
        if let Some(body) = parse_body(b, &path, errs) {
            if let Some(k) = kind {
                if body.dim() != k.spatial_dim() {
                    errs.push(
                        format!("{path}.shape"),
                        format!("a {}-dimensional body cannot be used with a {}-dimensional field", body.dim(), k.spatial_dim()),
                    );
                }
            }
            bodies.push(body);
        }
    }
    if errs.0.len() > n_before {
        None
    } else {
        Some(bodies)
    }
}

fn parse_body(v: &Value, path: &str, errs: &mut Errors) -> Option<Body> {
    let o = Obj::new(v, path, errs)?;
    let shape = o.get("shape").map(|_| o.choice("shape", &SHAPES, errs));
    let Some(shape) = shape else {
        errs.push(o.at("shape"), format!("required field is missing; allowed shapes are {}", quoted(&SHAPES)));
        return None;
    };
    let shape = shape?;
    let chi = match o.get("chi") {
        Some(c) => parse_chi(c, &o.at("chi"), errs),
        None => {
            errs.push(o.at("chi"), "required field is missing");
            None
        }
    };
    let shape = match shape {
        "interval" => {
            o.allow(&["shape", "chi", "a", "b"], errs);
            let a = o.required_number("a", errs);
            let b = o.required_number("b", errs);
            let (a, b) = (a?, b?);
            if !(a < b) {
                errs.push(o.at("b"), format!("interval needs a < b, got a = {a}, b = {b}"));
                return None;
            }
            Shape::Interval { a, b }
        }
        "ring" => {
            o.allow(&["shape", "chi", "radius", "center"], errs);
            let radius = o.positive("radius", errs);
            let center = o.point::<2>("center", errs).unwrap_or([0.0; 2]);
            Shape::RingShell { radius: radius?, center }
        }
        "sphere_shell" | "ball" => {
            o.allow(&["shape", "chi", "radius", "center"], errs);
            let radius = o.positive("radius", errs)?;
            let center = o.point::<3>("center", errs).unwrap_or([0.0; 3]);
            if shape == "ball" {
                Shape::Ball { radius, center }
            } else {
                Shape::SphereShell { radius, center }
            }
        }
        _ => {
            o.allow(&["shape", "chi", "dim", "nodes", "weights"], errs);
            let dim = o.count("dim", errs).unwrap_or(3) as usize;
            let nodes = match o.get("nodes").and_then(Value::as_array) {
                Some(a) => a,
                None => {
                    errs.push(o.at("nodes"), "expected an array of points");
                    return None;
                }
            };
            let mut pts = Vec::with_capacity(nodes.len());
            for (k, p) in nodes.iter().enumerate() {
                let coords = p.as_array().filter(|c| c.len() == dim && c.iter().all(|x| x.as_f64().is_some_and(f64::is_finite)));
                match coords {
                    Some(c) => {
                        let mut q = [0.0; 3];
                        for (d, x) in c.iter().enumerate() {
                            q[d] = x.as_f64().unwrap_or(0.0);
                        }
                        pts.push(q);
                    }
                    None => {
                        errs.push(format!("{}[{k}]", o.at("nodes")), format!("expected {dim} finite coordinates"));
                        return None;
                    }
                }
            }
            let weights: Option<Vec<f64>> = o
                .get("weights")
                .and_then(Value::as_array)
                .map(|w| w.iter().map(|x| x.as_f64().filter(|x| x.is_finite())).collect::<Option<Vec<_>>>())
                .unwrap_or(None);
            let Some(weights) = weights else {
                errs.push(o.at("weights"), "expected an array of finite numbers");
                return None;
            };
            Shape::PointCloud {
                dim,
                nodes: pts,
                weights,
            }
        }
    };
    match Body::new(shape, chi?) {
        Ok(b) => Some(b),
        Err(e) => {
            errs.push(path, e.to_string());
            None
        }
    }
}

fn parse_thermal(root: &Obj, kind: Option<FieldKind>, errs: &mut Errors) -> Option<ThermalSpec> {
    let Some(v) = root.get("thermal") else {
        return Some(ThermalSpec::zero_t());
    };
    let o = Obj::new(v, "thermal", errs)?;
    o.allow(&["temperature", "zero_mode", "rel_tol", "l_max_cap", "nu_min"], errs);
    let t = o.number("temperature", errs).unwrap_or(0.0);
    if t < 0.0 {
        errs.push("thermal.temperature", format!("must be >= 0, got {t}"));
        return None;
    }
    let mode = o.choice("zero_mode", &["full", "half", "skip"], errs).map(|m| match m {
        "full" => ZeroMode::Full,
        "half" => ZeroMode::Half,
        _ => ZeroMode::Skip,
    });
    let mut spec = if t == 0.0 {
        if o.get("zero_mode").is_some() {
            errs.push("thermal.zero_mode", "only meaningful at temperature > 0");
        }
        if o.get("l_max_cap").is_some() {
            errs.push("thermal.l_max_cap", "only meaningful at temperature > 0");
        }
        let nu_min = o.number("nu_min", errs).unwrap_or(0.0);
        if nu_min < 0.0 {
            errs.push("thermal.nu_min", format!("must be >= 0, got {nu_min}"));
        }
        ThermalSpec::ZeroT {
            nu_min,
            rel_tol: casimir_core::thermal::DEFAULT_REL_TOL,
        }
    } else {
        if o.get("nu_min").is_some() {
            errs.push("thermal.nu_min", "only meaningful at temperature 0");
        }
        let zm = mode.or(kind.map(|k| k.default_zero_mode())).unwrap_or(ZeroMode::Half);
        if let Some(k) = kind {
            if zm != ZeroMode::Skip && !k.finite_at_zero_frequency() && !matches!(k, FieldKind::Proca { .. }) {
                errs.push("thermal.zero_mode", "this field's kernel diverges at zero frequency; use \"skip\"");
            }
        }
        let mut s = ThermalSpec::finite_t(t, zm);
        if let Some(cap) = o.count("l_max_cap", errs) {
            if let ThermalSpec::FiniteT { ref mut l_max_cap, .. } = s {
                *l_max_cap = cap as usize;
            }
        }
        s
    };
    if let Some(tol) = o.number("rel_tol", errs) {
        spec = spec.with_rel_tol(tol);
    }
    match spec.validate() {
        Ok(()) => Some(spec),
        Err(e) => {
            errs.push("thermal", e.to_string());
            None
        }
    }
}

fn parse_quadrature(root: &Obj, errs: &mut Errors) -> Option<QuadratureSpec> {
    let mut q = QuadratureSpec::default();
    let Some(v) = root.get("quadrature") else {
        return Some(q);
    };
    let o = Obj::new(v, "quadrature", errs)?;
    o.allow(&["angular_order", "radial_order", "mc_samples", "seed"], errs);
    for (key, slot) in [("angular_order", &mut q.angular_order), ("radial_order", &mut q.radial_order)] {
        if let Some(n) = o.count(key, errs) {
            if n == 0 {
                errs.push(o.at(key), "must be >= 1");
            }
            *slot = n as usize;
        }
    }
    if let Some(n) = o.count("mc_samples", errs) {
        q.mc_samples = n as usize;
    }
    if let Some(n) = o.count("seed", errs) {
        q.seed = n;
    }
    Some(q)
}

fn parse_options(root: &Obj, errs: &mut Errors) -> PairOptions {
    let mut opts = PairOptions::default();
    if let Some(v) = root.get("options") {
        if let Some(o) = Obj::new(v, "options", errs) {
            o.allow(&["scalar2d_branch"], errs);
            if let Some(b) = o.choice("scalar2d_branch", &["auto", "static", "bessel"], errs) {
                opts.scalar2d_branch = match b {
                    "static" => Scalar2dBranch::Static,
                    "bessel" => Scalar2dBranch::Bessel,
                    _ => Scalar2dBranch::Auto,
                };
            }
        }
    }
    opts
}

fn parse_sweep(root: &Obj, errs: &mut Errors) -> Option<SweepGrid> {
    let o = Obj::new(root.get("sweep")?, "sweep", errs)?;
    o.allow(&["parameter", "min", "max", "points", "spacing"], errs);
    let parameter = match o.get("parameter") {
        None => Some(SweepParameter::Separation),
        Some(_) => o.choice("parameter", &["R", "temperature"], errs).map(|p| {
            if p == "R" {
                SweepParameter::Separation
            } else {
                SweepParameter::Temperature
            }
        }),
    };
    let min = o.required_number("min", errs);
    let max = o.required_number("max", errs);
    let points = match o.count("points", errs) {
        Some(0) => {
            errs.push("sweep.points", "must be >= 1");
            None
        }
        Some(n) => Some(n as usize),
        None => {
            if o.get("points").is_none() {
                errs.push("sweep.points", "required field is missing");
            }
            None
        }
    };
    let spacing = match o.get("spacing") {
        None => Some(Spacing::Linear),
        Some(_) => o
            .choice("spacing", &["linear", "log"], errs)
            .map(|s| if s == "log" { Spacing::Log } else { Spacing::Linear }),
    };
    let (min, max) = (min?, max?);
    if max < min {
        errs.push("sweep.max", format!("must be >= min ({min}), got {max}"));
        return None;
    }
    let spacing = spacing?;
    if spacing == Spacing::Log && !(min > 0.0) {
        errs.push("sweep.min", "log spacing needs min > 0");
        return None;
    }
    Some(SweepGrid {
        parameter: parameter?,
        min,
        max,
        points: points?,
        spacing,
    })
}

fn parse_force(root: &Obj, errs: &mut Errors) -> ForceSettings {
    let mut f = ForceSettings {
        separation: None,
        step: None,
        method: ForceMethod::Auto,
    };
    let Some(v) = root.get("force") else { return f };
    let Some(o) = Obj::new(v, "force", errs) else { return f };
    o.allow(&["separation", "step", "method"], errs);
    if o.get("separation").is_some() {
        f.separation = o.positive("separation", errs);
    }
    if o.get("step").is_some() {
        f.step = o.positive("step", errs);
    }
    if let Some(m) = o.choice("method", &["auto", "central", "richardson"], errs) {
        f.method = match m {
            "central" => ForceMethod::Central,
            "richardson" => ForceMethod::Richardson,
            _ => ForceMethod::Auto,
        };
    }
    f
}

fn parse_series(root: &Obj, errs: &mut Errors) -> usize {
    let Some(v) = root.get("series") else { return 4 };
    let Some(o) = Obj::new(v, "series", errs) else { return 4 };
    o.allow(&["n_max"], errs);
    match o.count("n_max", errs) {
        Some(0) => {
            errs.push("series.n_max", "must be >= 1");
            4
        }
        Some(n) => n as usize,
        None => 4,
    }
}

fn parse_validation(root: &Obj, errs: &mut Errors) -> f64 {
    let Some(v) = root.get("validation") else { return 1.0 };
    let Some(o) = Obj::new(v, "validation", errs) else { return 1.0 };
    o.allow(&["tolerance_scale"], errs);
    match o.number("tolerance_scale", errs) {
        Some(s) if s > 0.0 => s,
        Some(s) => {
            errs.push("validation.tolerance_scale", format!("must be > 0, got {s}"));
            1.0
        }
        None => 1.0,
    }
}
