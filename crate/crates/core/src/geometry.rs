//! Bodies, their quadrature rules, and separations between them.
//!
//! Points are stored as `[f64; 3]` regardless of dimension; unused
//! coordinates are zero.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, gauss_legendre_on, periodic_nodes};
use crate::susceptibility::SusceptibilityModel;

pub type Point = [f64; 3];

#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Segment `a < x < b` of the real line.
    Interval { a: f64, b: f64 },
    /// Circle of the given radius carrying a surface-delta susceptibility.
    RingShell { radius: f64, center: [f64; 2] },
    /// Sphere surface carrying a surface-delta susceptibility.
    SphereShell { radius: f64, center: [f64; 3] },
    /// Solid ball.
    Ball { radius: f64, center: [f64; 3] },
    /// Explicit nodes with measure weights in `dim` dimensions.
    PointCloud {
        dim: usize,
        nodes: Vec<Point>,
        weights: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Body {
    pub shape: Shape,
    pub chi: SusceptibilityModel,
}

impl Body {
    pub fn new(shape: Shape, chi: SusceptibilityModel) -> Result<Self> {
        let body = Self { shape, chi };
        body.validate()?;
        Ok(body)
    }

    pub fn interval(a: f64, b: f64, chi: SusceptibilityModel) -> Result<Self> {
        Self::new(Shape::Interval { a, b }, chi)
    }

    pub fn ring(radius: f64, center: [f64; 2], chi: SusceptibilityModel) -> Result<Self> {
        Self::new(Shape::RingShell { radius, center }, chi)
    }

    pub fn sphere_shell(radius: f64, center: [f64; 3], chi: SusceptibilityModel) -> Result<Self> {
        Self::new(Shape::SphereShell { radius, center }, chi)
    }

    pub fn ball(radius: f64, center: [f64; 3], chi: SusceptibilityModel) -> Result<Self> {
        Self::new(Shape::Ball { radius, center }, chi)
    }

    pub fn point_cloud(
        dim: usize,
        nodes: Vec<Point>,
        weights: Vec<f64>,
        chi: SusceptibilityModel,
    ) -> Result<Self> {
        Self::new(
            Shape::PointCloud {
                dim,
                nodes,
                weights,
            },
            chi,
        )
    }

    pub fn validate(&self) -> Result<()> {
        self.chi.validate()?;
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        match &self.shape {
            Shape::Interval { a, b } => {
                if !(finite(&[*a, *b]) && b > a) {
                    return Err(Error::InvalidBody(format!(
                        "interval needs finite a < b, got [{a}, {b}]"
                    )));
                }
            }
            Shape::RingShell { radius, center } => check_round(*radius, center)?,
            Shape::SphereShell { radius, center } | Shape::Ball { radius, center } => {
                check_round(*radius, center)?
            }
            Shape::PointCloud {
                dim,
                nodes,
                weights,
            } => {
                if !(1..=3).contains(dim) {
                    return Err(Error::InvalidBody(format!(
                        "point cloud dimension must be 1, 2 or 3, got {dim}"
                    )));
                }
                if nodes.is_empty() || nodes.len() != weights.len() {
                    return Err(Error::InvalidBody(format!(
                        "point cloud needs as many weights as nodes (>= 1), got {} nodes and {} weights",
                        nodes.len(),
                        weights.len()
                    )));
                }
                if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
                    return Err(Error::InvalidBody(format!(
                        "point cloud weights must be positive, got {w}"
                    )));
                }
                for p in nodes {
                    if !finite(p) || p[*dim..].iter().any(|c| *c != 0.0) {
                        return Err(Error::InvalidBody(format!(
                            "point cloud node {p:?} is not a finite {dim}-vector"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Spatial dimension of the support.
    pub fn dim(&self) -> usize {
        match &self.shape {
            Shape::Interval { .. } => 1,
            Shape::RingShell { .. } => 2,
            Shape::SphereShell { .. } | Shape::Ball { .. } => 3,
            Shape::PointCloud { dim, .. } => *dim,
        }
    }

    /// Reference point used when a body is moved: interval midpoint,
    /// shell/ball centre, or the weighted centroid of a cloud.
    pub fn center(&self) -> Point {
        match &self.shape {
            Shape::Interval { a, b } => [0.5 * (a + b), 0.0, 0.0],
            Shape::RingShell { center, .. } => [center[0], center[1], 0.0],
            Shape::SphereShell { center, .. } | Shape::Ball { center, .. } => *center,
            Shape::PointCloud { nodes, weights, .. } => {
                let total: f64 = weights.iter().sum();
                let mut c = [0.0; 3];
                for (p, w) in nodes.iter().zip(weights) {
                    for k in 0..3 {
                        c[k] += w * p[k];
                    }
                }
                c.map(|x| x / total)
            }
        }
    }

    /// Copy of the body rigidly shifted by `delta`.
    pub fn translated(&self, delta: Point) -> Self {
        let shape = match &self.shape {
            Shape::Interval { a, b } => Shape::Interval {
                a: a + delta[0],
                b: b + delta[0],
            },
            Shape::RingShell { radius, center } => Shape::RingShell {
                radius: *radius,
                center: [center[0] + delta[0], center[1] + delta[1]],
            },
            Shape::SphereShell { radius, center } => Shape::SphereShell {
                radius: *radius,
                center: add(*center, delta),
            },
            Shape::Ball { radius, center } => Shape::Ball {
                radius: *radius,
                center: add(*center, delta),
            },
            Shape::PointCloud {
                dim,
                nodes,
                weights,
            } => {
                let mut d = delta;
                for c in d.iter_mut().skip(*dim) {
                    *c = 0.0;
                }
                Shape::PointCloud {
                    dim: *dim,
                    nodes: nodes.iter().map(|p| add(*p, d)).collect(),
                    weights: weights.clone(),
                }
            }
        };
        Self {
            shape,
            chi: self.chi,
        }
    }

    pub fn with_chi(&self, chi: SusceptibilityModel) -> Self {
        Self {
            shape: self.shape.clone(),
            chi,
        }
    }
}

fn check_round(radius: f64, center: &[f64]) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) || center.iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidBody(format!(
            "radius must be finite and > 0 with a finite centre, got radius {radius}"
        )));
    }
    Ok(())
}

/// Orders of the quadrature rules used to discretise bodies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    /// Trapezoid points in each periodic angle.
    pub angular_order: usize,
    /// Gauss–Legendre points along intervals, `cos θ`, and ball radii.
    pub radial_order: usize,
    /// Monte Carlo samples for balls; zero selects the product rule.
    pub mc_samples: usize,
    pub seed: u64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            angular_order: 24,
            radial_order: 16,
            mc_samples: 0,
            seed: 0x5eed,
        }
    }
}

impl QuadratureSpec {
    pub fn new(angular_order: usize, radial_order: usize) -> Self {
        Self {
            angular_order,
            radial_order,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.angular_order == 0 || self.radial_order == 0 {
            return Err(Error::Domain(format!(
                "quadrature orders must be >= 1, got angular {} radial {}",
                self.angular_order, self.radial_order
            )));
        }
        Ok(())
    }

    /// Rule with both orders halved (never below 1), used for error estimates.
    pub fn coarsened(&self) -> Self {
        Self {
            angular_order: (self.angular_order / 2).max(1),
            radial_order: (self.radial_order / 2).max(1),
            mc_samples: self.mc_samples / 4,
            seed: self.seed,
        }
    }
}

/// Discretised body measure.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeSet {
    pub dim: usize,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Nodes and weights with `Σ wᵢ f(xᵢ) ≈ ∫ f dμ` over the body's measure.
pub fn quadrature_nodes(body: &Body, spec: &QuadratureSpec) -> Result<NodeSet> {
    body.validate()?;
    spec.validate()?;
    let dim = body.dim();
    let (points, weights) = match &body.shape {
        Shape::Interval { a, b } => {
            let (x, w) = gauss_legendre_on(spec.radial_order, *a, *b);
            (x.into_iter().map(|x| [x, 0.0, 0.0]).collect(), w)
        }
        Shape::RingShell { radius, center } => {
            let n = spec.angular_order;
            let w = radius * 2.0 * PI / n as f64;
            let pts = periodic_nodes(n)
                .into_iter()
                .map(|t| [center[0] + radius * t.cos(), center[1] + radius * t.sin(), 0.0])
                .collect();
            (pts, vec![w; n])
        }
        Shape::SphereShell { radius, center } => sphere_rule(*radius, *center, spec),
        Shape::Ball { radius, center } => {
            if spec.mc_samples > 0 {
                ball_monte_carlo(*radius, *center, spec.mc_samples, spec.seed)
            } else {
                let (rs, rw) = gauss_legendre_on(spec.radial_order, 0.0, *radius);
                let mut pts = Vec::new();
                let mut wts = Vec::new();
                for (r, wr) in rs.iter().zip(&rw) {
                    let (sp, sw) = sphere_rule(*r, *center, spec);
                    pts.extend(sp);
                    wts.extend(sw.into_iter().map(|w| w * wr));
                }
                (pts, wts)
            }
        }
        Shape::PointCloud { nodes, weights, .. } => (nodes.clone(), weights.clone()),
    };
    Ok(NodeSet {
        dim,
        points,
        weights,
    })
}

/// Gauss–Legendre in `cos θ` times trapezoid in `φ`; weights include `r²`.
fn sphere_rule(radius: f64, center: Point, spec: &QuadratureSpec) -> (Vec<Point>, Vec<f64>) {
    let (u, wu) = gauss_legendre(spec.radial_order);
    let phis = periodic_nodes(spec.angular_order);
    let wphi = 2.0 * PI / spec.angular_order as f64;
    let mut pts = Vec::with_capacity(u.len() * phis.len());
    let mut wts = Vec::with_capacity(u.len() * phis.len());
    for (cz, w) in u.iter().zip(&wu) {
        let s = (1.0 - cz * cz).max(0.0).sqrt();
        for phi in &phis {
            pts.push([
                center[0] + radius * s * phi.cos(),
                center[1] + radius * s * phi.sin(),
                center[2] + radius * cz,
            ]);
            wts.push(radius * radius * w * wphi);
        }
    }
    (pts, wts)
}

fn ball_monte_carlo(radius: f64, center: Point, n: usize, seed: u64) -> (Vec<Point>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let volume = 4.0 / 3.0 * PI * radius.powi(3);
    let mut pts = Vec::with_capacity(n);
    while pts.len() < n {
        let p: [f64; 3] = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            pts.push([
                center[0] + radius * p[0],
                center[1] + radius * p[1],
                center[2] + radius * p[2],
            ]);
        }
    }
    (pts, vec![volume / n as f64; n])
}

fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn distance(a: &Point, b: &Point) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// Analytic description used for exact separations.
enum Support<'a> {
    Interval(f64, f64),
    Round {
        center: Point,
        radius: f64,
        solid: bool,
    },
    Cloud(&'a [Point]),
}

fn support(body: &Body) -> Support<'_> {
    match &body.shape {
        Shape::Interval { a, b } => Support::Interval(*a, *b),
        Shape::RingShell { radius, center } => Support::Round {
            center: [center[0], center[1], 0.0],
            radius: *radius,
            solid: false,
        },
        Shape::SphereShell { radius, center } => Support::Round {
            center: *center,
            radius: *radius,
            solid: false,
        },
        Shape::Ball { radius, center } => Support::Round {
            center: *center,
            radius: *radius,
            solid: true,
        },
        Shape::PointCloud { nodes, .. } => Support::Cloud(nodes),
    }
}

fn point_to_support(p: &Point, s: &Support) -> f64 {
    match s {
        Support::Interval(a, b) => {
            let x = p[0];
            let along = if x < *a {
                a - x
            } else if x > *b {
                x - b
            } else {
                0.0
            };
            (along * along + p[1] * p[1] + p[2] * p[2]).sqrt()
        }
        Support::Round {
            center,
            radius,
            solid,
        } => {
            let d = distance(p, center);
            if *solid {
                (d - radius).max(0.0)
            } else {
                (d - radius).abs()
            }
        }
        Support::Cloud(nodes) => nodes
            .iter()
            .map(|q| distance(p, q))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Smallest distance between the supports of two bodies of equal dimension.
///
/// Overlapping or touching supports are an error: every pair formula
/// assumes disjoint bodies.
pub fn min_separation(a: &Body, b: &Body) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::Domain(format!(
            "bodies live in different dimensions ({} and {})",
            a.dim(),
            b.dim()
        )));
    }
    let sep = match (support(a), support(b)) {
        (Support::Interval(a0, a1), Support::Interval(b0, b1)) => (b0 - a1).max(a0 - b1),
        (
            Support::Round {
                center: c1,
                radius: r1,
                solid: s1,
            },
            Support::Round {
                center: c2,
                radius: r2,
                solid: s2,
            },
        ) => {
            let d = distance(&c1, &c2);
            if d >= r1 + r2 {
                d - r1 - r2
            } else if !s2 && d + r1 < r2 {
                r2 - d - r1
            } else if !s1 && d + r2 < r1 {
                r1 - d - r2
            } else {
                -1.0
            }
        }
        (Support::Cloud(nodes), other) | (other, Support::Cloud(nodes)) => nodes
            .iter()
            .map(|p| point_to_support(p, &other))
            .fold(f64::INFINITY, f64::min),
        _ => {
            return Err(Error::Domain(
                "separation between these shapes is not defined".into(),
            ))
        }
    };
    if !(sep > 0.0) {
        return Err(Error::Overlap {
            separation: sep.max(0.0),
        });
    }
    Ok(sep)
}

/// Distance between a point at polar angles `(θ, φ)` on a sphere of radius
/// `a` at the origin and a point at `(θ′, φ′)` on a sphere of radius `b`
/// centred at `R ẑ`.
pub fn sphere_point_distance(
    big_r: f64,
    a: f64,
    b: f64,
    theta: f64,
    theta_p: f64,
    phi: f64,
    phi_p: f64,
) -> Result<f64> {
    if !(big_r > 0.0) {
        return Err(Error::Domain(format!("centre distance must be > 0, got {big_r}")));
    }
    let cos_gamma = theta.cos() * theta_p.cos() + theta.sin() * theta_p.sin() * (phi - phi_p).cos();
    let rad = big_r * big_r + a * a + b * b
        - 2.0 * a * b * cos_gamma
        - 2.0 * big_r * (a * theta.cos() - b * theta_p.cos());
    if rad < 0.0 {
        if rad > -1e-12 * (big_r + a + b).powi(2) {
            return Ok(0.0);
        }
        return Err(Error::Domain(format!("negative squared distance {rad}")));
    }
    Ok(rad.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop_assert, proptest};

    fn chi() -> SusceptibilityModel {
        SusceptibilityModel::constant(1.0).unwrap()
    }

    #[test]
    fn ring_and_sphere_total_measure() {
        let ring = Body::ring(2.0, [0.0, 0.0], chi()).unwrap();
        for n in [1, 3, 17, 64] {
            let ns = quadrature_nodes(&ring, &QuadratureSpec::new(n, 4)).unwrap();
            assert!((ns.total_weight() - 4.0 * PI).abs() < 1e-13);
        }
        let sph = Body::sphere_shell(1.0, [0.0; 3], chi()).unwrap();
        let ns = quadrature_nodes(&sph, &QuadratureSpec::new(7, 5)).unwrap();
        assert!((ns.total_weight() - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn sphere_second_moment() {
        let sph = Body::sphere_shell(1.0, [0.0; 3], chi()).unwrap();
        for order in [4, 8] {
            let ns = quadrature_nodes(&sph, &QuadratureSpec::new(order, order)).unwrap();
            let m: f64 = ns.points.iter().zip(&ns.weights).map(|(p, w)| w * p[2] * p[2]).sum();
            assert!((m - 4.0 * PI / 3.0).abs() < 1e-13);
            let mx: f64 = ns.points.iter().zip(&ns.weights).map(|(p, w)| w * p[0] * p[0]).sum();
            assert!((mx - 4.0 * PI / 3.0).abs() < 1e-13);
        }
    }

    #[test]
    fn ring_trigonometric_exactness() {
        // The N-point periodic trapezoid integrates cos(kθ) exactly for |k| < N.
        let ring = Body::ring(1.0, [0.0, 0.0], chi()).unwrap();
        let ns = quadrature_nodes(&ring, &QuadratureSpec::new(16, 1)).unwrap();
        for k in 1..16 {
            let s: f64 = ns
                .points
                .iter()
                .zip(&ns.weights)
                .map(|(p, w)| w * (k as f64 * p[1].atan2(p[0])).cos())
                .sum();
            assert!(s.abs() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn ball_volume_product_and_monte_carlo() {
        let ball = Body::ball(2.0, [1.0, 0.0, 0.0], chi()).unwrap();
        let v = 4.0 / 3.0 * PI * 8.0;
        let ns = quadrature_nodes(&ball, &QuadratureSpec::new(8, 6)).unwrap();
        assert!((ns.total_weight() - v).abs() < 1e-12);
        let mut spec = QuadratureSpec::new(8, 6);
        spec.mc_samples = 500;
        let a = quadrature_nodes(&ball, &spec).unwrap();
        let b = quadrature_nodes(&ball, &spec).unwrap();
        assert_eq!(a, b);
        assert!((a.total_weight() - v).abs() < 1e-12);
        assert!(a.points.iter().all(|p| distance(p, &[1.0, 0.0, 0.0]) <= 2.0));
    }

    #[test]
    fn point_cloud_is_returned_verbatim() {
        let b = Body::point_cloud(2, vec![[0.0, 1.0, 0.0], [2.0, 3.0, 0.0]], vec![0.5, 1.5], chi())
            .unwrap();
        let ns = quadrature_nodes(&b, &QuadratureSpec::default()).unwrap();
        assert_eq!(ns.points, vec![[0.0, 1.0, 0.0], [2.0, 3.0, 0.0]]);
        assert_eq!(ns.weights, vec![0.5, 1.5]);
    }

    #[test]
    fn invalid_bodies() {
        assert!(Body::interval(1.0, 1.0, chi()).is_err());
        assert!(Body::sphere_shell(0.0, [0.0; 3], chi()).is_err());
        assert!(Body::point_cloud(3, vec![], vec![], chi()).is_err());
        assert!(Body::point_cloud(3, vec![[0.0; 3]], vec![1.0, 2.0], chi()).is_err());
        assert!(Body::point_cloud(1, vec![[0.0, 1.0, 0.0]], vec![1.0], chi()).is_err());
        assert!(Body::point_cloud(3, vec![[0.0; 3]], vec![-1.0], chi()).is_err());
    }

    #[test]
    fn separation_examples() {
        let s1 = Body::sphere_shell(1.0, [0.0; 3], chi()).unwrap();
        let s2 = Body::sphere_shell(1.0, [0.0, 0.0, 4.0], chi()).unwrap();
        assert!((min_separation(&s1, &s2).unwrap() - 2.0).abs() < 1e-15);
        let i1 = Body::interval(0.0, 1.0, chi()).unwrap();
        let i2 = Body::interval(3.0, 5.0, chi()).unwrap();
        assert_eq!(min_separation(&i1, &i2).unwrap(), 2.0);
        assert_eq!(min_separation(&i2, &i1).unwrap(), 2.0);
        assert!(matches!(min_separation(&s1, &s1), Err(Error::Overlap { .. })));
        let touching = Body::sphere_shell(1.0, [0.0, 0.0, 2.0], chi()).unwrap();
        assert!(matches!(min_separation(&s1, &touching), Err(Error::Overlap { .. })));
        assert!(min_separation(&s1, &i1).is_err());
    }

    #[test]
    fn separation_with_clouds_and_nested_shells() {
        let inner = Body::sphere_shell(1.0, [0.0; 3], chi()).unwrap();
        let outer = Body::sphere_shell(3.0, [0.5, 0.0, 0.0], chi()).unwrap();
        assert!((min_separation(&inner, &outer).unwrap() - 1.5).abs() < 1e-15);
        let ball = Body::ball(3.0, [0.5, 0.0, 0.0], chi()).unwrap();
        assert!(min_separation(&inner, &ball).is_err());
        let cloud = Body::point_cloud(3, vec![[0.0, 0.0, 5.0], [0.0, 0.0, 3.0]], vec![1.0, 1.0], chi())
            .unwrap();
        assert!((min_separation(&inner, &cloud).unwrap() - 2.0).abs() < 1e-15);
        assert!((min_separation(&cloud, &inner).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn sphere_distance_limits() {
        assert_eq!(sphere_point_distance(3.0, 0.0, 0.0, 0.3, 1.2, 0.1, 2.0).unwrap(), 3.0);
        // North poles: (0,0,a) and (0,0,R+b).
        let d = sphere_point_distance(3.0, 1.0, 0.5, 0.0, 0.0, 0.7, -0.2).unwrap();
        assert!((d - (3.0f64 - 1.0 + 0.5).abs()).abs() < 1e-14);
        assert!(sphere_point_distance(0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn sphere_distance_matches_cartesian_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (big_r, a, b) = (3.0, 1.1, 0.7);
            let t: f64 = rng.random_range(0.0..PI);
            let tp: f64 = rng.random_range(0.0..PI);
            let p: f64 = rng.random_range(0.0..2.0 * PI);
            let pp: f64 = rng.random_range(0.0..2.0 * PI);
            let x = [a * t.sin() * p.cos(), a * t.sin() * p.sin(), a * t.cos()];
            let y = [b * tp.sin() * pp.cos(), b * tp.sin() * pp.sin(), big_r + b * tp.cos()];
            let want = distance(&x, &y);
            let got = sphere_point_distance(big_r, a, b, t, tp, p, pp).unwrap();
            assert!((got - want).abs() < 1e-12);
        }
    }

    proptest! {
        #[test]
        fn refinement_of_smooth_shell_integral_is_stable(n in 6usize..20) {
            // Doubling the angular order barely moves a smooth integrand.
            let sph = Body::sphere_shell(1.0, [0.0; 3], chi()).unwrap();
            let f = |p: &Point| 1.0 / distance(p, &[0.0, 0.0, 3.0]);
            let int = |spec: QuadratureSpec| {
                let ns = quadrature_nodes(&sph, &spec).unwrap();
                ns.points.iter().zip(&ns.weights).map(|(p, w)| w * f(p)).sum::<f64>()
            };
            let coarse = int(QuadratureSpec::new(n, n));
            let fine = int(QuadratureSpec::new(2 * n, 2 * n));
            // exact value: 4π a² / R for a point outside the sphere
            let exact = 4.0 * PI / 3.0;
            prop_assert!((fine - exact).abs() <= (coarse - exact).abs().max(1e-13));
        }
    }
}
