//! Graded refinement toward singular corners.
//!
//! Every edge of the mesh receives one new node. An edge touching a singular
//! vertex `Q` with grading parameter κ gets its node at distance κ|AB| from
//! `Q`; all other edges are bisected. Each triangle is then split into four by
//! connecting its three edge nodes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{GradingSpec, Point};
use crate::mesh::{Edges, TriAncestry, TriMesh};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RefineError {
    #[error("edge endpoints coincide")]
    DegenerateEdge,
    #[error("grading parameter {0} outside (0, 1/2]")]
    Kappa(f64),
    #[error("edge ({0}, {1}) joins two singular vertices")]
    BothSingular(usize, usize),
    #[error("input mesh is invalid: {0}")]
    InvalidMesh(String),
    #[error("mesh has no polygon vertex map; graded refinement needs the generating polygon")]
    NoDomain,
    #[error("grading covers {grading} vertices but the polygon has {polygon}")]
    GradingMismatch { grading: usize, polygon: usize },
    #[error("vertex {0} is not a singular corner")]
    NotSingular(usize),
    #[error("mesh has no refinement ancestry")]
    NoAncestry,
}

/// Which endpoint of an edge, if any, is a singular vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularEnd {
    Neither,
    A,
    B,
}

/// New node on edge `AB`: the midpoint, or the point at κ|AB| from the
/// singular endpoint.
pub fn place_edge_node(
    a: Point,
    b: Point,
    singular_at: SingularEnd,
    kappa: f64,
) -> Result<Point, RefineError> {
    if a == b {
        return Err(RefineError::DegenerateEdge);
    }
    match singular_at {
        SingularEnd::Neither => Ok(a.lerp(b, 0.5)),
        _ if !(kappa > 0.0 && kappa <= 0.5) => Err(RefineError::Kappa(kappa)),
        SingularEnd::A => Ok(a.lerp(b, kappa)),
        SingularEnd::B => Ok(b.lerp(a, kappa)),
    }
}

/// Mesh size parameter h = 2⁻ⁿ after `n` refinements.
pub fn mesh_size_param(n: u32) -> f64 {
    (-(n as f64)).exp2()
}

/// Connectivity of one refinement step, independent of coordinates.
pub(crate) struct Subdivision {
    pub edges: Edges,
    /// `children[4t..4t+4]` are the children of triangle `t`.
    pub children: Vec<[usize; 3]>,
}

/// Splits every triangle into four, numbering the new node of edge `e` as
/// `node_count + e`.
pub(crate) fn subdivide(triangles: &[[usize; 3]], node_count: usize) -> Subdivision {
    let edges = Edges::build(triangles, node_count);
    let mut children = Vec::with_capacity(4 * triangles.len());
    for (t, &[v0, v1, v2]) in triangles.iter().enumerate() {
        let [e01, e12, e20] = edges.tri_edges[t];
        let (m01, m12, m20) = (node_count + e01, node_count + e12, node_count + e20);
        children.push([v0, m01, m20]);
        children.push([m01, v1, m12]);
        children.push([m20, m12, v2]);
        children.push([m01, m12, m20]);
    }
    Subdivision { edges, children }
}

/// One graded refinement step 𝒯 ↦ κ(𝒯).
pub fn refine(mesh: &TriMesh, grading: &GradingSpec) -> Result<TriMesh, RefineError> {
    let report = mesh.validate();
    if !report.is_valid() {
        return Err(RefineError::InvalidMesh(report.to_string()));
    }

    // kappa per node: singular corners carry their grading, everything else 1/2
    let n_old = mesh.node_count();
    let mut node_kappa: Vec<(bool, f64)> = Vec::new();
    match mesh.domain() {
        Some(domain) => {
            if grading.kappa().len() != domain.len() {
                return Err(RefineError::GradingMismatch {
                    grading: grading.kappa().len(),
                    polygon: domain.len(),
                });
            }
            for (i, info) in domain.vertex_info().iter().enumerate() {
                if info.is_singular {
                    node_kappa.push((true, grading.kappa_at(i)));
                } else {
                    node_kappa.push((false, 0.5));
                }
            }
        }
        None => {
            if grading.kappa().iter().any(|&k| k != 0.5) {
                return Err(RefineError::NoDomain);
            }
        }
    }
    let corner = |v: usize| node_kappa.get(v).copied().filter(|c| c.0);

    let Subdivision { edges, children } = subdivide(mesh.triangles(), n_old);

    let nodes = mesh.nodes();
    let mut new_nodes = Vec::with_capacity(n_old + edges.len());
    new_nodes.extend_from_slice(nodes);
    let mut boundary = Vec::with_capacity(n_old + edges.len());
    boundary.extend_from_slice(mesh.boundary_flags());
    for (e, &[a, b]) in edges.endpoints.iter().enumerate() {
        let (end, kappa) = match (corner(a), corner(b)) {
            (Some(_), Some(_)) => return Err(RefineError::BothSingular(a, b)),
            (Some((_, k)), None) => (SingularEnd::A, k),
            (None, Some((_, k))) => (SingularEnd::B, k),
            (None, None) => (SingularEnd::Neither, 0.5),
        };
        new_nodes.push(place_edge_node(nodes[a], nodes[b], end, kappa)?);
        boundary.push(edges.multiplicity[e] == 1 && mesh.is_boundary(a) && mesh.is_boundary(b));
    }

    let ancestry = mesh.ancestry().map(|anc| {
        let mut out = Vec::with_capacity(children.len());
        for (t, parent) in anc.iter().enumerate() {
            let tri = mesh.triangles()[t];
            // local vertex of the parent at its attached corner, if it touches it
            let at_corner = parent
                .attached_corner
                .and_then(|c| tri.iter().position(|&v| v == c as usize));
            for child in 0..4 {
                let deeper = at_corner == Some(child);
                out.push(TriAncestry {
                    generation: parent.generation + 1,
                    root: parent.root,
                    attached_corner: parent.attached_corner,
                    layer: parent.layer.map(|l| l + u32::from(deeper)),
                });
            }
        }
        out
    });

    Ok(TriMesh::with_history(
        new_nodes,
        boundary,
        children,
        ancestry,
        mesh.root_count(),
        mesh.level() + 1,
        mesh.domain_arc().cloned(),
    ))
}

/// Applies [`refine`] `n` times.
pub fn refine_n(mesh: &TriMesh, grading: &GradingSpec, n: u32) -> Result<TriMesh, RefineError> {
    let mut m = mesh.clone();
    for _ in 0..n {
        m = refine(&m, grading)?;
    }
    Ok(m)
}

/// Layer index of every triangle descended from an initial triangle attached
/// to one singular corner.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerMap {
    pub corner: usize,
    pub level: u32,
    /// triangle index -> layer t in 0..=level
    pub layers: BTreeMap<usize, u32>,
}

impl LayerMap {
    /// Triangles of layer `t`.
    pub fn layer(&self, t: u32) -> Vec<usize> {
        self.layers
            .iter()
            .filter(|&(_, &l)| l == t)
            .map(|(&tri, _)| tri)
            .collect()
    }
}

/// Mesh layers around polygon vertex `corner`: layer `t` holds the triangles
/// inside the depth-`t` corner descendant of their initial triangle but not
/// inside the depth-`t+1` one; the triangle touching the corner is in layer `n`.
pub fn compute_layers(mesh: &TriMesh, corner: usize) -> Result<LayerMap, RefineError> {
    let domain = mesh.domain().ok_or(RefineError::NoDomain)?;
    if !domain
        .vertex_info()
        .get(corner)
        .is_some_and(|v| v.is_singular)
    {
        return Err(RefineError::NotSingular(corner));
    }
    let anc = mesh.ancestry().ok_or(RefineError::NoAncestry)?;
    let mut layers = BTreeMap::new();
    for (t, a) in anc.iter().enumerate() {
        if a.attached_corner == Some(corner as u32) {
            layers.insert(t, a.layer.ok_or(RefineError::NoAncestry)?);
        }
    }
    Ok(LayerMap {
        corner,
        level: mesh.level(),
        layers,
    })
}
