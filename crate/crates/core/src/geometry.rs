//! Polygonal domains, interior angles, and the grading parameters derived
//! from re-entrant corners.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Angles above `PI + SINGULAR_TOL` mark a re-entrant (singular) vertex.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Interior angles at or above `2π - CRACK_TOL` are rejected as slits.
pub const CRACK_TOL: f64 = 1e-9;

/// Interior angles at or below this are treated as a collapsed vertex.
const DEGENERATE_ANGLE: f64 = 1e-9;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// `self + t (other - self)`.
    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + t * (other.x - self.x), self.y + t * (other.y - self.y))
    }
}

impl From<[f64; 2]> for Point {
    fn from(p: [f64; 2]) -> Self {
        Point::new(p[0], p[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Point> for f64 {
    type Output = Point;
    fn mul(self, p: Point) -> Point {
        Point::new(self * p.x, self * p.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Twice the signed area of the triangle `a, b, c` (positive when CCW).
pub fn orient2d(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("vertex {0} repeats its predecessor")]
    RepeatedVertex(usize),
    #[error("vertex {index} is degenerate (interior angle {angle:e} rad)")]
    DegenerateVertex { index: usize, angle: f64 },
    #[error("vertex {index} forms a slit (interior angle {angle} rad is too close to 2π)")]
    Crack { index: usize, angle: f64 },
    #[error("polygon is not simple: edges {0} and {1} intersect")]
    SelfIntersection(usize, usize),
    #[error("polygon is clockwise; list the vertices counter-clockwise")]
    Clockwise,
    #[error("vertex index {index} out of range for a polygon with {len} vertices")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("unknown named domain `{0}` (expected square, lshape, octagon, plus or triangle)")]
    UnknownDomain(String),
    #[error("invalid grading at vertex {vertex}: {constraint}")]
    Grading { vertex: usize, constraint: String },
    #[error("invalid grading: {0}")]
    Theta(String),
}

/// Per-vertex corner data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexInfo {
    /// Interior angle in radians, in (0, 2π).
    pub interior_angle: f64,
    /// The angle exceeds π.
    pub is_singular: bool,
    /// π / interior angle.
    pub beta_threshold: f64,
}

/// A simple, counter-clockwise polygon with its corner metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonDomain {
    vertices: Vec<Point>,
    info: Vec<VertexInfo>,
}

impl PolygonDomain {
    /// Validates `vertices` and computes the corner metadata.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let angles = interior_angles(&vertices)?;
        let info = angles
            .into_iter()
            .map(|a| VertexInfo {
                interior_angle: a,
                is_singular: a > PI + SINGULAR_TOL,
                beta_threshold: PI / a,
            })
            .collect();
        Ok(PolygonDomain { vertices, info })
    }

    /// Built-in domains: `square`, `lshape`, `octagon`, `plus`, `triangle`.
    pub fn named(name: &str) -> Result<Self, GeometryError> {
        let pts: Vec<Point> = match name {
            "square" => vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
                .into_iter()
                .map(Point::from)
                .collect(),
            "triangle" => vec![[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
                .into_iter()
                .map(Point::from)
                .collect(),
            // Re-entrant corner at the origin, vertex 3.
            "lshape" => vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [-1.0, 1.0]]
                .into_iter()
                .map(Point::from)
                .collect(),
            // Regular octagon with circumradius 1 and a horizontal bottom edge.
            "octagon" => (0..8)
                .map(|k| {
                    let t = -3.0 * PI / 8.0 + k as f64 * PI / 4.0;
                    Point::new(t.cos(), t.sin())
                })
                .collect(),
            // Plus sign made of five unit squares; re-entrant corners at 2, 5, 8, 11.
            "plus" => vec![
                [1.0, 0.0],
                [2.0, 0.0],
                [2.0, 1.0],
                [3.0, 1.0],
                [3.0, 2.0],
                [2.0, 2.0],
                [2.0, 3.0],
                [1.0, 3.0],
                [1.0, 2.0],
                [0.0, 2.0],
                [0.0, 1.0],
                [1.0, 1.0],
            ]
            .into_iter()
            .map(Point::from)
            .collect(),
            other => return Err(GeometryError::UnknownDomain(other.to_string())),
        };
        PolygonDomain::new(pts)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex_info(&self) -> &[VertexInfo] {
        &self.info
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn interior_angles(&self) -> Vec<f64> {
        self.info.iter().map(|v| v.interior_angle).collect()
    }

    /// Indices of the re-entrant vertices.
    pub fn singular_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.info[i].is_singular).collect()
    }

    pub fn is_convex(&self) -> bool {
        self.info.iter().all(|v| !v.is_singular)
    }

    /// Boundary edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> (Point, Point) {
        let n = self.len();
        (self.vertices[i], self.vertices[(i + 1) % n])
    }

    pub fn area(&self) -> f64 {
        let n = self.len();
        0.5 * (0..n)
            .map(|i| self.vertices[i].cross(self.vertices[(i + 1) % n]))
            .sum::<f64>()
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, &p) in self.vertices.iter().enumerate() {
            for &q in &self.vertices[i + 1..] {
                d = d.max(p.dist(q));
            }
        }
        d
    }

    /// Distance from `p` to the polygon boundary.
    pub fn boundary_distance(&self, p: Point) -> f64 {
        (0..self.len())
            .map(|i| {
                let (a, b) = self.edge(i);
                point_segment_distance(p, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Returns `(β, β₀ⁱ per vertex)` with `β = minᵢ min(π/αᵢ, 1)`.
    pub fn regularity_index(&self) -> (f64, Vec<f64>) {
        let per_vertex: Vec<f64> = self.info.iter().map(|v| v.beta_threshold).collect();
        let beta = per_vertex.iter().fold(1.0_f64, |b, &t| b.min(t));
        (beta, per_vertex)
    }
}

/// Interior angles of a simple CCW polygon, from oriented edge vectors.
pub fn interior_angles(vertices: &[Point]) -> Result<Vec<f64>, GeometryError> {
    let n = vertices.len();
    if n < 3 {
        return Err(GeometryError::TooFewVertices(n));
    }
    if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
        return Err(GeometryError::NonFinite(i));
    }
    for i in 0..n {
        if vertices[i] == vertices[(i + n - 1) % n] {
            return Err(GeometryError::RepeatedVertex(i));
        }
    }
    let mut angles = Vec::with_capacity(n);
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let cur = vertices[i];
        let next = vertices[(i + 1) % n];
        let e_in = cur - prev;
        let e_out = next - cur;
        let turn = e_in.cross(e_out).atan2(e_in.dot(e_out));
        let angle = PI - turn;
        if angle <= DEGENERATE_ANGLE {
            return Err(GeometryError::DegenerateVertex { index: i, angle });
        }
        angles.push(angle);
    }
    check_simple(vertices)?;
    let signed_area: f64 = (0..n).map(|i| vertices[i].cross(vertices[(i + 1) % n])).sum();
    if signed_area <= 0.0 {
        return Err(GeometryError::Clockwise);
    }
    for (i, &a) in angles.iter().enumerate() {
        if a >= 2.0 * PI - CRACK_TOL {
            return Err(GeometryError::Crack { index: i, angle: a });
        }
    }
    Ok(angles)
}

fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient2d(q1, q2, p1);
    let d2 = orient2d(q1, q2, p2);
    let d3 = orient2d(p1, p2, q1);
    let d4 = orient2d(p1, p2, q2);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p.x >= a.x.min(b.x)
            && p.x <= a.x.max(b.x)
            && p.y >= a.y.min(b.y)
            && p.y <= a.y.max(b.y)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

fn check_simple(v: &[Point]) -> Result<(), GeometryError> {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            let (c, d) = (v[j], v[(j + 1) % n]);
            if adjacent {
                // Adjacent edges share one endpoint; they may only overlap if folded back.
                let (shared, other_a, other_b) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orient2d(other_a, shared, other_b) == 0.0
                    && (other_a - shared).dot(other_b - shared) > 0.0
                {
                    return Err(GeometryError::SelfIntersection(i, j));
                }
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return Err(GeometryError::SelfIntersection(i, j));
            }
        }
    }
    Ok(())
}

/// How the grading parameters were specified.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GradingSource {
    /// κ given directly per vertex.
    Kappa,
    /// κᵢ = 2^(-θ/aᵢ) from a target order θ and per-vertex aᵢ.
    ThetaA { theta: f64, a: BTreeMap<usize, f64> },
}

/// Per-vertex refinement ratios for the graded refinement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GradingSpec {
    kappa: Vec<f64>,
    source: GradingSource,
}

impl GradingSpec {
    /// κ = 1/2 everywhere: plain midpoint refinement.
    pub fn uniform(polygon: &PolygonDomain) -> Self {
        GradingSpec {
            kappa: vec![0.5; polygon.len()],
            source: GradingSource::Kappa,
        }
    }

    /// κ given per singular vertex; unlisted and convex vertices get 1/2.
    pub fn from_kappa(
        polygon: &PolygonDomain,
        kappa: &BTreeMap<usize, f64>,
    ) -> Result<Self, GeometryError> {
        let mut out = vec![0.5; polygon.len()];
        for (&i, &k) in kappa {
            if i >= polygon.len() {
                return Err(GeometryError::VertexOutOfRange {
                    index: i,
                    len: polygon.len(),
                });
            }
            if !(k > 0.0 && k <= 0.5) {
                return Err(GeometryError::Grading {
                    vertex: i,
                    constraint: format!("kappa = {k} must lie in (0, 1/2]"),
                });
            }
            if polygon.info[i].is_singular {
                out[i] = k;
            }
        }
        Ok(GradingSpec {
            kappa: out,
            source: GradingSource::Kappa,
        })
    }

    /// The same κ at every singular vertex.
    pub fn from_uniform_kappa(polygon: &PolygonDomain, kappa: f64) -> Result<Self, GeometryError> {
        let map: BTreeMap<usize, f64> = polygon
            .singular_vertices()
            .into_iter()
            .map(|i| (i, kappa))
            .collect();
        if map.is_empty() && !(kappa > 0.0 && kappa <= 0.5) {
            return Err(GeometryError::Theta(format!(
                "kappa = {kappa} must lie in (0, 1/2]"
            )));
        }
        GradingSpec::from_kappa(polygon, &map)
    }

    pub fn kappa(&self) -> &[f64] {
        &self.kappa
    }

    pub fn kappa_at(&self, vertex: usize) -> f64 {
        self.kappa[vertex]
    }

    pub fn source(&self) -> &GradingSource {
        &self.source
    }

    /// The target order θ: the stored one for (θ, a) input, otherwise the
    /// largest θ ≤ 1 the κ values admit, `minᵢ min(β₀ⁱ log₂(1/κᵢ), 1)`.
    pub fn theta(&self, polygon: &PolygonDomain) -> f64 {
        match &self.source {
            GradingSource::ThetaA { theta, .. } => *theta,
            GradingSource::Kappa => polygon
                .singular_vertices()
                .into_iter()
                .map(|i| (polygon.info[i].beta_threshold * (1.0 / self.kappa[i]).log2()).min(1.0))
                .fold(1.0, f64::min),
        }
    }

    /// θ' = min(max(θ, β₀), 1), the expected energy-norm rate.
    pub fn expected_h1_rate(&self, polygon: &PolygonDomain) -> f64 {
        let (beta0, _) = polygon.regularity_index();
        self.theta(polygon).max(beta0).min(1.0)
    }

    /// min(2θ', θ' + 1), the expected L² rate.
    pub fn expected_l2_rate(&self, polygon: &PolygonDomain) -> f64 {
        let t = self.expected_h1_rate(polygon);
        (2.0 * t).min(t + 1.0)
    }
}

/// Builds κᵢ = 2^(-θ/aᵢ) at each listed singular vertex.
///
/// Requires `0 < aᵢ < β₀ⁱ` and `aᵢ ≤ θ ≤ 1`. Entries for convex vertices are
/// checked for positivity but otherwise ignored (κ = 1/2 there).
pub fn make_grading(
    polygon: &PolygonDomain,
    theta: f64,
    a: &BTreeMap<usize, f64>,
) -> Result<GradingSpec, GeometryError> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(GeometryError::Theta(format!(
            "theta = {theta} must lie in (0, 1]"
        )));
    }
    let mut kappa = vec![0.5; polygon.len()];
    for (&i, &ai) in a {
        if i >= polygon.len() {
            return Err(GeometryError::VertexOutOfRange {
                index: i,
                len: polygon.len(),
            });
        }
        if !(ai > 0.0) {
            return Err(GeometryError::Grading {
                vertex: i,
                constraint: format!("a = {ai} must be positive"),
            });
        }
        let info = polygon.info[i];
        if !info.is_singular {
            continue;
        }
        if ai >= info.beta_threshold {
            return Err(GeometryError::Grading {
                vertex: i,
                constraint: format!(
                    "a = {ai} must be below the threshold pi/alpha = {}",
                    info.beta_threshold
                ),
            });
        }
        if theta < ai {
            return Err(GeometryError::Grading {
                vertex: i,
                constraint: format!("theta = {theta} must lie in [a, 1] with a = {ai}"),
            });
        }
        kappa[i] = if ai == theta {
            0.5
        } else {
            (-theta / ai).exp2()
        };
    }
    Ok(GradingSpec {
        kappa,
        source: GradingSource::ThetaA {
            theta,
            a: a.clone(),
        },
    })
}
