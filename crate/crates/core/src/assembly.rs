//! P1 stiffness matrix and load vector over interior nodes.
//!
//! Homogeneous Dirichlet conditions are imposed by elimination: boundary
//! nodes carry no unknown, so the assembled matrix is symmetric positive
//! definite. Elements are accumulated in index order, which makes the result
//! bitwise reproducible.

use std::sync::Arc;

use thiserror::Error;

use crate::expr::{Expr, ExprError};
use crate::geometry::{orient2d, Point};
use crate::mesh::TriMesh;
use crate::quadrature::{map_point, QuadOrder};
use crate::sparse::SparseSpd;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AssemblyError {
    #[error("degenerate triangle (twice the signed area is {0:e})")]
    Degenerate(f64),
    #[error("element {element}: degenerate triangle")]
    DegenerateElement { element: usize },
    #[error("mesh has no interior nodes; refine it at least once more")]
    NoInteriorNodes,
    #[error("element {element}: {source}")]
    Expr {
        element: usize,
        #[source]
        source: ExprError,
    },
    #[error("{found} values for a mesh with {expected} nodes")]
    ValueCount { expected: usize, found: usize },
}

/// Constant P1 basis gradients and area of a CCW triangle.
pub fn p1_gradients(p: &[Point; 3]) -> Result<([Point; 3], f64), AssemblyError> {
    let twice_area = orient2d(p[0], p[1], p[2]);
    let longest2 = (0..3)
        .map(|k| {
            let e = p[(k + 1) % 3] - p[k];
            e.dot(e)
        })
        .fold(0.0, f64::max);
    if !(twice_area > 1e-14 * longest2) {
        return Err(AssemblyError::Degenerate(twice_area));
    }
    let inv = 1.0 / twice_area;
    let g = [
        Point::new((p[1].y - p[2].y) * inv, (p[2].x - p[1].x) * inv),
        Point::new((p[2].y - p[0].y) * inv, (p[0].x - p[2].x) * inv),
        Point::new((p[0].y - p[1].y) * inv, (p[1].x - p[0].x) * inv),
    ];
    Ok((g, 0.5 * twice_area))
}

/// Element stiffness `K_ij = area ∇φ_i · ∇φ_j`.
pub fn local_stiffness(p0: Point, p1: Point, p2: Point) -> Result<[[f64; 3]; 3], AssemblyError> {
    let (g, area) = p1_gradients(&[p0, p1, p2])?;
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            k[i][j] = area * g[i].dot(g[j]);
        }
    }
    Ok(k)
}

/// Numbering of the interior (free) nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    node_to_dof: Vec<Option<usize>>,
    dof_to_node: Vec<usize>,
}

impl DofMap {
    /// Interior nodes in increasing node order.
    pub fn new(mesh: &TriMesh) -> Self {
        let mut node_to_dof = vec![None; mesh.node_count()];
        let mut dof_to_node = Vec::with_capacity(mesh.interior_node_count());
        for (i, &b) in mesh.boundary_flags().iter().enumerate() {
            if !b {
                node_to_dof[i] = Some(dof_to_node.len());
                dof_to_node.push(i);
            }
        }
        DofMap {
            node_to_dof,
            dof_to_node,
        }
    }

    pub fn len(&self) -> usize {
        self.dof_to_node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dof_to_node.is_empty()
    }

    pub fn dof(&self, node: usize) -> Option<usize> {
        self.node_to_dof[node]
    }

    pub fn node(&self, dof: usize) -> usize {
        self.dof_to_node[dof]
    }

    /// Restricts a per-node vector to the interior nodes.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.dof_to_node.iter().map(|&n| full[n]).collect()
    }

    /// Extends interior values by zero on the boundary.
    pub fn extend(&self, dofs: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.node_to_dof.len()];
        for (d, &n) in self.dof_to_node.iter().enumerate() {
            full[n] = dofs[d];
        }
        full
    }
}

/// Global stiffness matrix over interior nodes.
pub fn assemble_stiffness(mesh: &TriMesh) -> Result<(SparseSpd, DofMap), AssemblyError> {
    let dofs = DofMap::new(mesh);
    if dofs.is_empty() {
        return Err(AssemblyError::NoInteriorNodes);
    }
    let edges = mesh.edges();
    let mut rows: Vec<Vec<usize>> = (0..dofs.len()).map(|d| vec![d]).collect();
    for &[a, b] in &edges.endpoints {
        if let (Some(da), Some(db)) = (dofs.dof(a), dofs.dof(b)) {
            rows[da].push(db);
            rows[db].push(da);
        }
    }
    drop(edges);
    let mut s = SparseSpd::with_pattern(&rows);
    drop(rows);

    for (t, tri) in mesh.triangles().iter().enumerate() {
        let [p0, p1, p2] = mesh.corners(t);
        let k = local_stiffness(p0, p1, p2)
            .map_err(|_| AssemblyError::DegenerateElement { element: t })?;
        let local: [Option<usize>; 3] = [dofs.dof(tri[0]), dofs.dof(tri[1]), dofs.dof(tri[2])];
        for i in 0..3 {
            let Some(di) = local[i] else { continue };
            for j in 0..3 {
                if let Some(dj) = local[j] {
                    s.add(di, dj, k[i][j]);
                }
            }
        }
    }
    Ok((s, dofs))
}

/// Load vector `b_i = ∫ f φ_i` over ALL nodes (before elimination).
pub fn assemble_load_full(
    mesh: &TriMesh,
    f: &Expr,
    quad: QuadOrder,
) -> Result<Vec<f64>, AssemblyError> {
    let mut b = vec![0.0; mesh.node_count()];
    let constant = f.constant_value();
    for (t, tri) in mesh.triangles().iter().enumerate() {
        let p = mesh.corners(t);
        let area = mesh.signed_area(t);
        if !(area > 0.0) {
            return Err(AssemblyError::DegenerateElement { element: t });
        }
        if let Some(c) = constant {
            let share = c * area / 3.0;
            for &v in tri {
                b[v] += share;
            }
            continue;
        }
        let mut local = [0.0; 3];
        for q in quad.points() {
            let x = map_point(&p, &q.bary);
            let fx = f
                .eval(x.x, x.y)
                .map_err(|source| AssemblyError::Expr { element: t, source })?;
            for k in 0..3 {
                local[k] += q.weight * fx * q.bary[k];
            }
        }
        for k in 0..3 {
            b[tri[k]] += area * local[k];
        }
    }
    Ok(b)
}

/// Load vector over interior nodes, ordered as [`DofMap::new`].
pub fn assemble_load(mesh: &TriMesh, f: &Expr, quad: QuadOrder) -> Result<Vec<f64>, AssemblyError> {
    let full = assemble_load_full(mesh, f, quad)?;
    Ok(DofMap::new(mesh).restrict(&full))
}

/// A continuous piecewise-linear function: one value per mesh node.
#[derive(Debug, Clone, PartialEq)]
pub struct FeFunction {
    mesh: Arc<TriMesh>,
    values: Vec<f64>,
}

impl FeFunction {
    pub fn new(mesh: Arc<TriMesh>, values: Vec<f64>) -> Result<Self, AssemblyError> {
        if values.len() != mesh.node_count() {
            return Err(AssemblyError::ValueCount {
                expected: mesh.node_count(),
                found: values.len(),
            });
        }
        Ok(FeFunction { mesh, values })
    }

    pub fn zero(mesh: Arc<TriMesh>) -> Self {
        let n = mesh.node_count();
        FeFunction {
            mesh,
            values: vec![0.0; n],
        }
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(mesh: Arc<TriMesh>, f: &Expr) -> Result<Self, ExprError> {
        let values = mesh
            .nodes()
            .iter()
            .map(|p| f.eval(p.x, p.y))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FeFunction { mesh, values })
    }

    pub fn mesh(&self) -> &Arc<TriMesh> {
        &self.mesh
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Largest nodal value and the node holding it.
    pub fn max(&self) -> (usize, f64) {
        self.values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::geometry::{GradingSpec, PolygonDomain};
    use crate::mesh::triangulate_initial;
    use crate::refine::refine;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn reference_triangle_stiffness() {
        let k = local_stiffness(p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)).unwrap();
        let expected = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        assert_eq!(k, expected);
        let k2 = local_stiffness(p(0.0, 0.0), p(2.0, 0.0), p(0.0, 2.0)).unwrap();
        assert_eq!(k2, expected);
    }

    #[test]
    fn degenerate_and_clockwise_rejected() {
        assert!(matches!(
            local_stiffness(p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)),
            Err(AssemblyError::Degenerate(_))
        ));
        assert!(local_stiffness(p(0.0, 0.0), p(0.0, 1.0), p(1.0, 0.0)).is_err());
    }

    fn square(levels: u32) -> TriMesh {
        let sq = PolygonDomain::named("square").unwrap();
        let g = GradingSpec::uniform(&sq);
        let mut m = triangulate_initial(&sq).unwrap();
        for _ in 0..levels {
            m = refine(&m, &g).unwrap();
        }
        m
    }

    #[test]
    fn single_interior_node_square() {
        let m = square(1);
        let (s, dofs) = assemble_stiffness(&m).unwrap();
        assert_eq!(dofs.len(), 1);
        assert_eq!(s.dim(), 1);
        assert!((s.get(0, 0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn no_interior_nodes() {
        assert_eq!(
            assemble_stiffness(&square(0)).unwrap_err(),
            AssemblyError::NoInteriorNodes
        );
    }

    #[test]
    fn stiffness_is_exactly_symmetric() {
        let l = PolygonDomain::named("lshape").unwrap();
        let g = GradingSpec::from_uniform_kappa(&l, 0.2).unwrap();
        let mut m = triangulate_initial(&l).unwrap();
        for _ in 0..3 {
            m = refine(&m, &g).unwrap();
        }
        let (s, _) = assemble_stiffness(&m).unwrap();
        assert_eq!(s.max_asymmetry(), 0.0);
    }

    #[test]
    fn interior_rows_match_element_sums_with_boundary_couplings() {
        // For every interior node i: sum_j S_ij over interior j plus the
        // couplings to boundary nodes equals the full row sum, which is zero.
        let m = square(3);
        let (s, dofs) = assemble_stiffness(&m).unwrap();
        let mut boundary_coupling = vec![0.0; dofs.len()];
        for (t, tri) in m.triangles().iter().enumerate() {
            let [a, b, c] = m.corners(t);
            let k = local_stiffness(a, b, c).unwrap();
            for i in 0..3 {
                if let Some(di) = dofs.dof(tri[i]) {
                    for j in 0..3 {
                        if dofs.dof(tri[j]).is_none() {
                            boundary_coupling[di] += k[i][j];
                        }
                    }
                }
            }
        }
        for d in 0..dofs.len() {
            let row: f64 = s.row(d).map(|(_, v)| v).sum();
            assert!((row + boundary_coupling[d]).abs() < 1e-13);
        }
    }

    #[test]
    fn constant_load_on_reference_triangle() {
        let m = TriMesh::from_parts(
            vec![p(0.0, 0.0), p(1.0, 0.0), p(0.0, 1.0)],
            vec![true; 3],
            vec![[0, 1, 2]],
        )
        .unwrap();
        let two = parse("2").unwrap();
        let two_nonconst = parse("2 + 0*x").unwrap();
        for q in [QuadOrder::One, QuadOrder::Two, QuadOrder::Three] {
            for f in [&two, &two_nonconst] {
                let b = assemble_load_full(&m, f, q).unwrap();
                for v in b {
                    assert!((v - 1.0 / 3.0).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn load_sums_to_integral() {
        let o = PolygonDomain::named("octagon").unwrap();
        let g = GradingSpec::uniform(&o);
        let m = refine(&refine(&triangulate_initial(&o).unwrap(), &g).unwrap(), &g).unwrap();
        let b = assemble_load_full(&m, &parse("2").unwrap(), QuadOrder::Two).unwrap();
        assert!((b.iter().sum::<f64>() - 2.0 * o.area()).abs() < 1e-12);
        let zero = assemble_load(&m, &parse("0").unwrap(), QuadOrder::Two).unwrap();
        assert!(zero.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn load_domain_error_names_element() {
        let m = square(1);
        let e = assemble_load_full(&m, &parse("log(x - 0.5)").unwrap(), QuadOrder::Two).unwrap_err();
        assert!(matches!(e, AssemblyError::Expr { .. }));
    }
}
