//! Error measurement between nested P1 functions and against exact
//! solutions, the successive-level rate indicator, and weighted-norm
//! diagnostics around singular corners.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::assembly::{p1_gradients, AssemblyError, FeFunction};
use crate::expr::{Expr, ExprError};
use crate::geometry::Point;
use crate::mesh::TriMesh;
use crate::quadrature::{map_point, QuadOrder};
use crate::refine::subdivide;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NormsError {
    #[error("meshes are not nested: {0}")]
    NotNested(String),
    #[error("need at least two error values, got {0}")]
    TooFewErrors(usize),
    #[error("error value {value} at position {index} is not positive")]
    NonPositiveError { index: usize, value: f64 },
    #[error("element {element}: {source}")]
    Expr {
        element: usize,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

/// H¹ seminorm and L² norm of one function or difference.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ErrorNorms {
    pub h1: f64,
    pub l2: f64,
}

/// Interpolates `coarse` onto `fine_mesh`, a mesh obtained from the coarse one
/// by zero or more refinements. Since the P1 spaces are nested this is exact:
/// a new node at fraction `s` along parent edge `AB` gets `(1−s) v(A) + s v(B)`.
pub fn prolongate(coarse: &FeFunction, fine_mesh: &Arc<TriMesh>) -> Result<FeFunction, NormsError> {
    let cmesh = coarse.mesh();
    if Arc::ptr_eq(cmesh, fine_mesh) {
        return Ok(coarse.clone());
    }
    let (nc, nf) = (cmesh.node_count(), fine_mesh.node_count());
    let (tc, tf) = (cmesh.triangle_count(), fine_mesh.triangle_count());
    let mut steps = 0;
    let mut t = tc;
    while t < tf {
        t *= 4;
        steps += 1;
    }
    if t != tf || tc == 0 {
        return Err(NormsError::NotNested(format!(
            "triangle counts {tc} and {tf} are not related by a power of 4"
        )));
    }
    let fine_nodes = fine_mesh.nodes();
    if nf < nc || fine_nodes[..nc] != *cmesh.nodes() {
        return Err(NormsError::NotNested(
            "coarse nodes are not a prefix of the fine nodes".into(),
        ));
    }

    let mut values = Vec::with_capacity(nf);
    values.extend_from_slice(coarse.values());
    let mut tris = cmesh.triangles().to_vec();
    let mut n = nc;
    for _ in 0..steps {
        let sub = subdivide(&tris, n);
        if n + sub.edges.len() > nf {
            return Err(NormsError::NotNested("fine mesh has too few nodes".into()));
        }
        for (e, &[a, b]) in sub.edges.endpoints.iter().enumerate() {
            let (pa, pb, d) = (fine_nodes[a], fine_nodes[b], fine_nodes[n + e]);
            let ab = pb - pa;
            let s = (d - pa).dot(ab) / ab.dot(ab);
            let off = d.dist(pa.lerp(pb, s));
            // coordinates carry absolute rounding error on tiny edges far from the origin
            let tol = 1e-10 * ab.norm() + 16.0 * f64::EPSILON * pa.norm().max(pb.norm());
            if !(s > 0.0 && s < 1.0) || off > tol {
                return Err(NormsError::NotNested(format!(
                    "node {} does not lie inside parent edge ({a}, {b})",
                    n + e
                )));
            }
            values.push((1.0 - s) * values[a] + s * values[b]);
        }
        n += sub.edges.len();
        tris = sub.children;
    }
    if n != nf || tris != fine_mesh.triangles() {
        return Err(NormsError::NotNested(
            "fine connectivity differs from the refinement of the coarse mesh".into(),
        ));
    }
    Ok(FeFunction::new(Arc::clone(fine_mesh), values)?)
}

/// Exact H¹ seminorm and L² norm of the P1 function with nodal `values`.
pub fn p1_norms(mesh: &TriMesh, values: &[f64]) -> Result<ErrorNorms, AssemblyError> {
    let mut h1 = 0.0;
    let mut l2 = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let (g, area) = p1_gradients(&mesh.corners(t))
            .map_err(|_| AssemblyError::DegenerateElement { element: t })?;
        let v = [values[tri[0]], values[tri[1]], values[tri[2]]];
        let grad = v[0] * g[0] + v[1] * g[1] + v[2] * g[2];
        h1 += area * grad.dot(grad);
        let sum = v[0] + v[1] + v[2];
        l2 += area / 12.0 * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + sum * sum);
    }
    Ok(ErrorNorms {
        h1: h1.sqrt(),
        l2: l2.sqrt(),
    })
}

pub fn h1_seminorm(v: &FeFunction) -> Result<f64, AssemblyError> {
    Ok(p1_norms(v.mesh(), v.values())?.h1)
}

pub fn l2_norm(v: &FeFunction) -> Result<f64, AssemblyError> {
    Ok(p1_norms(v.mesh(), v.values())?.l2)
}

/// Norms of `u_fine − u_coarse`, computed exactly on the fine mesh.
pub fn error_between_levels(
    u_fine: &FeFunction,
    u_coarse: &FeFunction,
) -> Result<ErrorNorms, NormsError> {
    let p = prolongate(u_coarse, u_fine.mesh())?;
    let diff: Vec<f64> = u_fine
        .values()
        .iter()
        .zip(p.values())
        .map(|(a, b)| a - b)
        .collect();
    Ok(p1_norms(u_fine.mesh(), &diff)?)
}

/// An exact solution and its gradient.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub u: Expr,
    pub du_dx: Expr,
    pub du_dy: Expr,
}

/// `|u − u_h|_{H¹}` and `‖u − u_h‖_{L²}` by element-wise quadrature.
pub fn error_vs_exact(
    u_h: &FeFunction,
    exact: &ExactSolution,
    quad: QuadOrder,
) -> Result<ErrorNorms, NormsError> {
    let mesh = u_h.mesh();
    let values = u_h.values();
    let mut h1 = 0.0;
    let mut l2 = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = mesh.corners(t);
        let (g, area) =
            p1_gradients(&p).map_err(|_| AssemblyError::DegenerateElement { element: t })?;
        let v = [values[tri[0]], values[tri[1]], values[tri[2]]];
        let grad = v[0] * g[0] + v[1] * g[1] + v[2] * g[2];
        let (mut eh1, mut el2) = (0.0, 0.0);
        for q in quad.points() {
            let x = map_point(&p, &q.bary);
            let ev = |e: &Expr| {
                e.eval(x.x, x.y)
                    .map_err(|source| NormsError::Expr { element: t, source })
            };
            let uh = q.bary[0] * v[0] + q.bary[1] * v[1] + q.bary[2] * v[2];
            let du = ev(&exact.u)? - uh;
            let dx = ev(&exact.du_dx)? - grad.x;
            let dy = ev(&exact.du_dy)? - grad.y;
            el2 += q.weight * du * du;
            eh1 += q.weight * (dx * dx + dy * dy);
        }
        h1 += area * eh1;
        l2 += area * el2;
    }
    Ok(ErrorNorms {
        h1: h1.sqrt(),
        l2: l2.sqrt(),
    })
}

/// Rate indicator `log₂(e_j / e_{j+1})` for consecutive entries.
pub fn convergence_rate(errors: &[f64]) -> Result<Vec<f64>, NormsError> {
    if errors.len() < 2 {
        return Err(NormsError::TooFewErrors(errors.len()));
    }
    if let Some((index, &value)) = errors
        .iter()
        .enumerate()
        .find(|(_, &e)| !(e > 0.0 && e.is_finite()))
    {
        return Err(NormsError::NonPositiveError { index, value });
    }
    Ok(errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect())
}

/// Product of distances from `x` to each corner.
pub fn rho(x: Point, corners: &[Point]) -> f64 {
    corners.iter().map(|&c| x.dist(c)).product()
}

/// Weighted norm with one derivative:
/// `(∫ ρ^{−2a} |v|² + ∫ ρ^{2(1−a)} |∇v|²)^{1/2}`, by 7-point quadrature.
/// Quadrature points are interior, so corners are never evaluated.
pub fn weighted_k1_norm(v: &FeFunction, a: f64, corners: &[Point]) -> Result<f64, NormsError> {
    let mesh = v.mesh();
    let values = v.values();
    let mut total = 0.0;
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = mesh.corners(t);
        let (g, area) =
            p1_gradients(&p).map_err(|_| AssemblyError::DegenerateElement { element: t })?;
        let nv = [values[tri[0]], values[tri[1]], values[tri[2]]];
        let grad = nv[0] * g[0] + nv[1] * g[1] + nv[2] * g[2];
        let g2 = grad.dot(grad);
        let mut local = 0.0;
        for q in QuadOrder::Three.points() {
            let x = map_point(&p, &q.bary);
            let r = rho(x, corners);
            let val = q.bary[0] * nv[0] + q.bary[1] * nv[1] + q.bary[2] * nv[2];
            local += q.weight * (r.powf(-2.0 * a) * val * val + r.powf(2.0 * (1.0 - a)) * g2);
        }
        total += area * local;
    }
    Ok(total.sqrt())
}
