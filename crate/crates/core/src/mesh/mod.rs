//! Conforming triangulations with refinement ancestry.

mod edges;
mod io;
mod triangulate;
mod validate;

use std::sync::Arc;

use thiserror::Error;

use crate::geometry::{orient2d, GeometryError, Point, PolygonDomain};

pub use edges::Edges;
pub use io::{load_mesh, save_mesh};
pub use triangulate::{triangulate_initial, MIN_ANGLE_DEG};
pub use validate::{ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("triangle {triangle} references node {node}, but the mesh has {nodes} nodes")]
    NodeOutOfRange {
        triangle: usize,
        node: usize,
        nodes: usize,
    },
    #[error("{0} node flags for {1} nodes")]
    FlagCount(usize, usize),
    #[error("ear clipping found no ear among {0} remaining vertices")]
    NoEar(usize),
    #[error("initial triangulation has minimum angle {found:.3} deg after repair, below the required {required:.3} deg")]
    Quality { found: f64, required: f64 },
    #[error("mesh is invalid: {0}")]
    Invalid(String),
}

/// Refinement history of one triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriAncestry {
    /// Number of refinements since the initial triangulation.
    pub generation: u32,
    /// Index of the initial triangle this one descends from.
    pub root: u32,
    /// Polygon vertex index of the singular corner the root triangle touches.
    pub attached_corner: Option<u32>,
    /// Mesh layer around `attached_corner`.
    pub layer: Option<u32>,
}

/// A triangulation of a polygon: nodes, CCW triangles and boundary flags.
///
/// When the mesh was generated from a [`PolygonDomain`], polygon vertex `i`
/// is node `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriMesh {
    nodes: Vec<Point>,
    boundary: Vec<bool>,
    triangles: Vec<[usize; 3]>,
    ancestry: Option<Vec<TriAncestry>>,
    root_count: usize,
    level: u32,
    domain: Option<Arc<PolygonDomain>>,
}

impl TriMesh {
    /// Plain mesh without domain or ancestry. Only index ranges are checked;
    /// use [`TriMesh::validate`] for the geometric invariants.
    pub fn from_parts(
        nodes: Vec<Point>,
        boundary: Vec<bool>,
        triangles: Vec<[usize; 3]>,
    ) -> Result<Self, MeshError> {
        if boundary.len() != nodes.len() {
            return Err(MeshError::FlagCount(boundary.len(), nodes.len()));
        }
        for (t, tri) in triangles.iter().enumerate() {
            if let Some(&node) = tri.iter().find(|&&v| v >= nodes.len()) {
                return Err(MeshError::NodeOutOfRange {
                    triangle: t,
                    node,
                    nodes: nodes.len(),
                });
            }
        }
        let root_count = triangles.len();
        Ok(TriMesh {
            nodes,
            boundary,
            triangles,
            ancestry: None,
            root_count,
            level: 0,
            domain: None,
        })
    }

    pub(crate) fn with_history(
        nodes: Vec<Point>,
        boundary: Vec<bool>,
        triangles: Vec<[usize; 3]>,
        ancestry: Option<Vec<TriAncestry>>,
        root_count: usize,
        level: u32,
        domain: Option<Arc<PolygonDomain>>,
    ) -> Self {
        debug_assert_eq!(nodes.len(), boundary.len());
        debug_assert!(ancestry.as_ref().map_or(true, |a| a.len() == triangles.len()));
        TriMesh {
            nodes,
            boundary,
            triangles,
            ancestry,
            root_count,
            level,
            domain,
        }
    }

    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        self.boundary[node]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn interior_node_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| !b).count()
    }

    pub fn ancestry(&self) -> Option<&[TriAncestry]> {
        self.ancestry.as_deref()
    }

    /// Triangle count of the initial triangulation.
    pub fn root_count(&self) -> usize {
        self.root_count
    }

    /// Number of refinements applied to the initial triangulation.
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn domain(&self) -> Option<&PolygonDomain> {
        self.domain.as_deref()
    }

    pub(crate) fn domain_arc(&self) -> Option<&Arc<PolygonDomain>> {
        self.domain.as_ref()
    }

    /// Vertex coordinates of triangle `t`.
    pub fn corners(&self, t: usize) -> [Point; 3] {
        let [a, b, c] = self.triangles[t];
        [self.nodes[a], self.nodes[b], self.nodes[c]]
    }

    /// Signed area of triangle `t`.
    pub fn signed_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * orient2d(a, b, c)
    }

    pub fn edges(&self) -> Edges {
        Edges::build(&self.triangles, self.nodes.len())
    }

    pub fn validate(&self) -> ValidationReport {
        validate::validate(self)
    }

    /// Smallest interior angle over all triangles, in degrees.
    pub fn min_angle_deg(&self) -> f64 {
        (0..self.triangle_count())
            .map(|t| triangle_min_angle(self.corners(t)))
            .fold(f64::INFINITY, f64::min)
            .to_degrees()
    }

    /// Copy with nodes renumbered by `perm` (old node `i` becomes `perm[i]`).
    /// Domain and ancestry are dropped since they assume the original numbering.
    pub fn renumbered(&self, perm: &[usize]) -> Result<TriMesh, MeshError> {
        let n = self.node_count();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(MeshError::Invalid("node permutation is not a bijection".into()));
        }
        let mut nodes = vec![Point::default(); n];
        let mut boundary = vec![false; n];
        for i in 0..n {
            nodes[perm[i]] = self.nodes[i];
            boundary[perm[i]] = self.boundary[i];
        }
        let triangles = self
            .triangles
            .iter()
            .map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]])
            .collect();
        TriMesh::from_parts(nodes, boundary, triangles)
    }
}

/// Smallest interior angle of a triangle, in radians.
pub fn triangle_min_angle(p: [Point; 3]) -> f64 {
    (0..3)
        .map(|k| {
            let a = p[k];
            let u = p[(k + 1) % 3] - a;
            let v = p[(k + 2) % 3] - a;
            u.cross(v).abs().atan2(u.dot(v))
        })
        .fold(f64::INFINITY, f64::min)
}
