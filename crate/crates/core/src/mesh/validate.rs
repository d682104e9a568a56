use std::collections::HashMap;
use std::fmt;

use crate::geometry::{point_segment_distance, Point};

use super::{Edges, TriMesh};

/// Relative tolerance (times the domain diameter) for boundary placement.
const ON_BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonFiniteNode { node: usize },
    RepeatedNode { triangle: usize },
    Orientation { triangle: usize, signed_area: f64 },
    /// More than two triangles on one edge.
    OvershareEdge { edge: [usize; 2], count: u32 },
    /// A node lies in the interior of an edge used by a single triangle.
    HangingNode { edge: [usize; 2], node: usize },
    /// Single-triangle edge that does not lie on the domain boundary.
    OpenInteriorEdge { edge: [usize; 2] },
    BoundaryFlag { node: usize, flagged: bool },
    OffBoundary { node: usize, distance: f64 },
    TriangleCount { expected: usize, found: usize },
    UnreferencedNode { node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFiniteNode { node } => write!(f, "node {node}: non-finite coordinate"),
            Violation::RepeatedNode { triangle } => {
                write!(f, "triangle {triangle}: repeated node index")
            }
            Violation::Orientation {
                triangle,
                signed_area,
            } => write!(
                f,
                "triangle {triangle}: orientation (signed area {signed_area:e} is not positive)"
            ),
            Violation::OvershareEdge { edge, count } => write!(
                f,
                "edge ({}, {}): conformity (shared by {count} triangles)",
                edge[0], edge[1]
            ),
            Violation::HangingNode { edge, node } => write!(
                f,
                "edge ({}, {}): conformity (hanging node {node} on the edge)",
                edge[0], edge[1]
            ),
            Violation::OpenInteriorEdge { edge } => write!(
                f,
                "edge ({}, {}): conformity (single triangle, but not on the boundary)",
                edge[0], edge[1]
            ),
            Violation::BoundaryFlag { node, flagged } => {
                if *flagged {
                    write!(f, "node {node}: flagged boundary but not on a boundary edge")
                } else {
                    write!(f, "node {node}: on a boundary edge but flagged interior")
                }
            }
            Violation::OffBoundary { node, distance } => write!(
                f,
                "node {node}: boundary node at distance {distance:e} from the polygon"
            ),
            Violation::TriangleCount { expected, found } => write!(
                f,
                "triangle count {found}, expected {expected} (initial count times 4^level)"
            ),
            Violation::UnreferencedNode { node } => {
                write!(f, "node {node}: not used by any triangle")
            }
        }
    }
}

/// Every invariant violation found in a mesh.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        write!(f, "{} violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

pub(super) fn validate(mesh: &TriMesh) -> ValidationReport {
    let mut out = Vec::new();
    let nodes = mesh.nodes();

    for (i, p) in nodes.iter().enumerate() {
        if !p.is_finite() {
            out.push(Violation::NonFiniteNode { node: i });
        }
    }

    let mut used = vec![false; nodes.len()];
    for (t, tri) in mesh.triangles().iter().enumerate() {
        for &v in tri {
            used[v] = true;
        }
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[2] == tri[0] {
            out.push(Violation::RepeatedNode { triangle: t });
            continue;
        }
        let area = mesh.signed_area(t);
        if !(area > 0.0) {
            out.push(Violation::Orientation {
                triangle: t,
                signed_area: area,
            });
        }
    }
    for (i, &u) in used.iter().enumerate() {
        if !u {
            out.push(Violation::UnreferencedNode { node: i });
        }
    }

    let edges = mesh.edges();
    let domain = mesh.domain();
    let tol = domain.map_or(0.0, |d| ON_BOUNDARY_TOL * d.diameter());
    let mut on_open_edge = vec![false; nodes.len()];
    let mut open_edges = Vec::new();
    for (e, &count) in edges.multiplicity.iter().enumerate() {
        let edge = edges.endpoints[e];
        if count > 2 {
            out.push(Violation::OvershareEdge { edge, count });
        } else if count == 1 {
            on_open_edge[edge[0]] = true;
            on_open_edge[edge[1]] = true;
            open_edges.push(e);
            if let Some(d) = domain {
                let mid = nodes[edge[0]].lerp(nodes[edge[1]], 0.5);
                if d.boundary_distance(mid) > tol {
                    out.push(Violation::OpenInteriorEdge { edge });
                }
            }
        }
    }
    hanging_nodes(nodes, &edges, &open_edges, &mut out);

    for i in 0..nodes.len() {
        let flagged = mesh.is_boundary(i);
        if used[i] && flagged != on_open_edge[i] {
            out.push(Violation::BoundaryFlag { node: i, flagged });
        }
        if let Some(d) = domain {
            if flagged {
                let distance = d.boundary_distance(nodes[i]);
                if distance > tol {
                    out.push(Violation::OffBoundary { node: i, distance });
                }
            }
        }
    }

    if mesh.ancestry().is_some() {
        let expected = mesh.root_count() * 4usize.pow(mesh.level());
        if expected != mesh.triangle_count() {
            out.push(Violation::TriangleCount {
                expected,
                found: mesh.triangle_count(),
            });
        }
    }

    ValidationReport { violations: out }
}

/// Finds nodes lying strictly inside single-triangle edges, using a uniform
/// bucket grid over the endpoints of those edges.
fn hanging_nodes(nodes: &[Point], edges: &Edges, open: &[usize], out: &mut Vec<Violation>) {
    if open.is_empty() {
        return;
    }
    let mut candidates: Vec<usize> = open.iter().flat_map(|&e| edges.endpoints[e]).collect();
    candidates.sort_unstable();
    candidates.dedup();
    candidates.retain(|&i| nodes[i].is_finite());
    if candidates.is_empty() {
        return;
    }
    let (mut lo, mut hi) = (nodes[candidates[0]], nodes[candidates[0]]);
    for &i in &candidates {
        let p = nodes[i];
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let extent = (hi.x - lo.x).max(hi.y - lo.y).max(f64::MIN_POSITIVE);
    let cells_per_side = ((candidates.len() as f64).sqrt().ceil() as i64).clamp(1, 4096);
    let cell = extent / cells_per_side as f64;
    let cell_of = |p: Point| {
        (
            (((p.x - lo.x) / cell) as i64).min(cells_per_side - 1),
            (((p.y - lo.y) / cell) as i64).min(cells_per_side - 1),
        )
    };
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for &i in &candidates {
        grid.entry(cell_of(nodes[i])).or_default().push(i);
    }
    for &e in open {
        let [a, b] = edges.endpoints[e];
        let (pa, pb) = (nodes[a], nodes[b]);
        if !pa.is_finite() || !pb.is_finite() {
            continue;
        }
        let len = pa.dist(pb);
        let (c0, c1) = (cell_of(pa), cell_of(pb));
        for cx in c0.0.min(c1.0)..=c0.0.max(c1.0) {
            for cy in c0.1.min(c1.1)..=c0.1.max(c1.1) {
                let Some(bucket) = grid.get(&(cx, cy)) else {
                    continue;
                };
                for &v in bucket {
                    if v == a || v == b {
                        continue;
                    }
                    let p = nodes[v];
                    let t = (p - pa).dot(pb - pa) / (len * len);
                    if t > 0.0 && t < 1.0 && point_segment_distance(p, pa, pb) <= 1e-12 * len {
                        out.push(Violation::HangingNode {
                            edge: [a, b],
                            node: v,
                        });
                    }
                }
            }
        }
    }
}
