//! Oracles and fixtures shared by the integration tests.
//!
//! The quadrature here is a collapsed Gauss-Legendre product rule built from
//! scratch, so it shares no code or coefficients with the library's rules.

#![allow(dead_code)]

use std::sync::Arc;

use graded_fem::geometry::{Point, PolygonDomain};
use graded_fem::mesh::TriMesh;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Gauss-Legendre nodes and weights on [0, 1] with `n` points, by Newton's
/// method on the Legendre recurrence.
pub fn gauss_legendre_01(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pm = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pm) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 - x) / 2.0, w / 2.0));
    }
    out
}

/// Points and weights on triangle `p` from the Duffy map of the unit square;
/// `n = 4` integrates polynomials of degree 6 exactly (order 5 and beyond).
pub fn duffy_rule(p: &[Point; 3], n: usize) -> Vec<(Point, f64)> {
    let gl = gauss_legendre_01(n);
    let area2 = (p[1] - p[0]).cross(p[2] - p[0]);
    let mut out = Vec::with_capacity(n * n);
    for &(u, wu) in &gl {
        for &(v, wv) in &gl {
            let (s, t) = (u, (1.0 - u) * v);
            let x = p[0] + s * (p[1] - p[0]) + t * (p[2] - p[0]);
            out.push((x, wu * wv * (1.0 - u) * area2));
        }
    }
    out
}

/// Coefficients (c0, cx, cy) of the three P1 basis functions, from the inverse
/// of the Vandermonde matrix `[1 x y]` by Cramer's rule.
pub fn basis_coefficients(p: &[Point; 3]) -> [[f64; 3]; 3] {
    let m = [
        [1.0, p[0].x, p[0].y],
        [1.0, p[1].x, p[1].y],
        [1.0, p[2].x, p[2].y],
    ];
    let det = |m: &[[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(&m);
    let mut coef = [[0.0; 3]; 3];
    for i in 0..3 {
        // solve V c = e_i
        for k in 0..3 {
            let mut mk = m;
            for r in 0..3 {
                mk[r][k] = if r == i { 1.0 } else { 0.0 };
            }
            coef[i][k] = det(&mk) / d;
        }
    }
    coef
}

/// Stiffness matrix of triangle `p` by brute-force quadrature of ∇φᵢ·∇φⱼ.
pub fn oracle_local_stiffness(p: &[Point; 3]) -> [[f64; 3]; 3] {
    let c = basis_coefficients(p);
    let mut k = [[0.0; 3]; 3];
    for (_, w) in duffy_rule(p, 4) {
        for i in 0..3 {
            for j in 0..3 {
                k[i][j] += w * (c[i][1] * c[j][1] + c[i][2] * c[j][2]);
            }
        }
    }
    k
}

/// H¹ seminorm and L² norm of `u_fine − u_coarse` by quadrature on the fine
/// mesh, evaluating the coarse function on the ancestor triangle `t / 4^d`.
pub fn oracle_level_difference(
    fine: &TriMesh,
    u_fine: &[f64],
    coarse: &TriMesh,
    u_coarse: &[f64],
) -> (f64, f64) {
    let depth = (fine.triangle_count() / coarse.triangle_count()).trailing_zeros() / 2;
    let (mut h1, mut l2) = (0.0, 0.0);
    for t in 0..fine.triangle_count() {
        let pf = fine.corners(t);
        let tf = fine.triangles()[t];
        let cf = basis_coefficients(&pf);
        let parent = t >> (2 * depth);
        let pc = coarse.corners(parent);
        let tc = coarse.triangles()[parent];
        let cc = basis_coefficients(&pc);
        let eval = |c: &[[f64; 3]; 3], vals: [f64; 3], x: Point| {
            let mut v = 0.0;
            let mut g = Point::new(0.0, 0.0);
            for i in 0..3 {
                v += vals[i] * (c[i][0] + c[i][1] * x.x + c[i][2] * x.y);
                g = g + vals[i] * Point::new(c[i][1], c[i][2]);
            }
            (v, g)
        };
        let vf = [u_fine[tf[0]], u_fine[tf[1]], u_fine[tf[2]]];
        let vc = [u_coarse[tc[0]], u_coarse[tc[1]], u_coarse[tc[2]]];
        for (x, w) in duffy_rule(&pf, 4) {
            let (a, ga) = eval(&cf, vf, x);
            let (b, gb) = eval(&cc, vc, x);
            let d = ga - gb;
            h1 += w * d.dot(d);
            l2 += w * (a - b) * (a - b);
        }
    }
    (h1.sqrt(), l2.sqrt())
}

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Random CCW triangle with every angle above 5 degrees.
pub fn random_triangle(rng: &mut StdRng) -> [Point; 3] {
    loop {
        let mut p = [Point::new(0.0, 0.0); 3];
        for q in &mut p {
            *q = Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        }
        if (p[1] - p[0]).cross(p[2] - p[0]) < 0.0 {
            p.swap(1, 2);
        }
        if graded_fem::mesh::triangle_min_angle(p).to_degrees() > 5.0 {
            return p;
        }
    }
}

/// Star-shaped CCW polygon around the origin: sorted random angles with a
/// minimum gap and radii in [0.35, 1].
pub fn star_polygon(rng: &mut StdRng, n: usize) -> PolygonDomain {
    let gap = 2.0 * std::f64::consts::PI / n as f64;
    let pts: Vec<Point> = (0..n)
        .map(|k| {
            let t = gap * (k as f64 + rng.gen_range(0.1..0.9));
            let r = rng.gen_range(0.35..1.0);
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect();
    PolygonDomain::new(pts).expect("star polygon is simple")
}

pub fn arc(m: TriMesh) -> Arc<TriMesh> {
    Arc::new(m)
}

/// Distance from node `q` to the nearest other node.
pub fn nearest_node_distance(mesh: &TriMesh, q: usize) -> f64 {
    let p = mesh.nodes()[q];
    mesh.nodes()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != q)
        .map(|(_, x)| x.dist(p))
        .fold(f64::INFINITY, f64::min)
}
