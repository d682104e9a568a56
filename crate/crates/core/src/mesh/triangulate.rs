//! Initial triangulation of a polygon: ear clipping, Lawson flips, then
//! separation of singular vertices and a bounded quality repair by
//! circumcenter insertion.

use std::sync::Arc;

use crate::geometry::{orient2d, point_segment_distance, Point, PolygonDomain};

use super::{triangle_min_angle, Edges, MeshError, TriAncestry, TriMesh};

/// Minimum interior angle required of the initial triangulation, in degrees.
/// Lowered to the smallest polygon angle when the polygon itself is sharper.
pub const MIN_ANGLE_DEG: f64 = 15.0;

const MAX_REPAIR_STEPS: usize = 2000;
const MAX_FLIPS: usize = 100_000;

struct Work {
    nodes: Vec<Point>,
    boundary: Vec<bool>,
    singular: Vec<bool>,
    tris: Vec<[usize; 3]>,
}

/// Triangulates `polygon` into a conforming, shape-regular mesh 𝒯₀.
///
/// Polygon vertex `i` becomes node `i`. No edge joins two singular vertices,
/// so every triangle contains at most one of them.
pub fn triangulate_initial(polygon: &PolygonDomain) -> Result<TriMesh, MeshError> {
    let n = polygon.len();
    let mut w = Work {
        nodes: polygon.vertices().to_vec(),
        boundary: vec![true; n],
        singular: polygon.vertex_info().iter().map(|v| v.is_singular).collect(),
        tris: ear_clip(polygon.vertices())?,
    };
    w.settle();

    let smallest_corner = polygon
        .vertex_info()
        .iter()
        .map(|v| v.interior_angle)
        .fold(f64::INFINITY, f64::min);
    let target = MIN_ANGLE_DEG.to_radians().min(smallest_corner) - 1e-12;
    let mut splits = 0;
    loop {
        let (worst, angle) = w.worst_triangle();
        if angle >= target {
            break;
        }
        if splits == MAX_REPAIR_STEPS {
            return Err(MeshError::Quality {
                found: angle.to_degrees(),
                required: target.to_degrees(),
            });
        }
        w.improve(worst);
        w.settle();
        splits += 1;
    }

    let ancestry = w
        .tris
        .iter()
        .enumerate()
        .map(|(t, tri)| {
            let corner = tri.iter().copied().find(|&v| v < n && w.singular[v]);
            TriAncestry {
                generation: 0,
                root: t as u32,
                attached_corner: corner.map(|c| c as u32),
                layer: corner.map(|_| 0),
            }
        })
        .collect();
    let root_count = w.tris.len();
    Ok(TriMesh::with_history(
        w.nodes,
        w.boundary,
        w.tris,
        Some(ancestry),
        root_count,
        0,
        Some(Arc::new(polygon.clone())),
    ))
}

fn ear_clip(v: &[Point]) -> Result<Vec<[usize; 3]>, MeshError> {
    let mut ring: Vec<usize> = (0..v.len()).collect();
    let mut tris = Vec::with_capacity(v.len() - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let mut best: Option<(usize, f64)> = None;
        for i in 0..m {
            let (p, c, nx) = (ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]);
            if orient2d(v[p], v[c], v[nx]) <= 0.0 {
                continue;
            }
            let blocked = ring.iter().any(|&q| {
                q != p
                    && q != c
                    && q != nx
                    && orient2d(v[p], v[c], v[q]) >= 0.0
                    && orient2d(v[c], v[nx], v[q]) >= 0.0
                    && orient2d(v[nx], v[p], v[q]) >= 0.0
            });
            if blocked {
                continue;
            }
            let quality = triangle_min_angle([v[p], v[c], v[nx]]);
            if best.map_or(true, |(_, q)| quality > q + 1e-12) {
                best = Some((i, quality));
            }
        }
        let (i, _) = best.ok_or(MeshError::NoEar(m))?;
        tris.push([ring[(i + m - 1) % m], ring[i], ring[(i + 1) % m]]);
        ring.remove(i);
    }
    if orient2d(v[ring[0]], v[ring[1]], v[ring[2]]) <= 0.0 {
        return Err(MeshError::NoEar(3));
    }
    tris.push([ring[0], ring[1], ring[2]]);
    Ok(tris)
}

/// Positive when `d` lies inside the circumcircle of CCW triangle `a, b, c`.
fn incircle(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (ax, ay) = (a.x - d.x, a.y - d.y);
    let (bx, by) = (b.x - d.x, b.y - d.y);
    let (cx, cy) = (c.x - d.x, c.y - d.y);
    (ax * ax + ay * ay) * (bx * cy - cx * by) - (bx * bx + by * by) * (ax * cy - cx * ay)
        + (cx * cx + cy * cy) * (ax * by - bx * ay)
}

/// Segments `ab` and `pq` cross at a point interior to both.
fn segments_cross(a: Point, b: Point, p: Point, q: Point) -> bool {
    let d1 = orient2d(a, b, p);
    let d2 = orient2d(a, b, q);
    let d3 = orient2d(p, q, a);
    let d4 = orient2d(p, q, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn circumcenter(a: Point, b: Point, c: Point) -> Point {
    let (b, c) = (b - a, c - a);
    let d = 2.0 * b.cross(c);
    let (bb, cc) = (b.dot(b), c.dot(c));
    a + Point::new((c.y * bb - b.y * cc) / d, (b.x * cc - c.x * bb) / d)
}

impl Work {
    fn worst_triangle(&self) -> (usize, f64) {
        self.tris
            .iter()
            .enumerate()
            .map(|(t, tri)| {
                (
                    t,
                    triangle_min_angle([self.nodes[tri[0]], self.nodes[tri[1]], self.nodes[tri[2]]]),
                )
            })
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc })
    }

    /// Lawson flips of interior edges until the triangulation is Delaunay.
    fn flip_to_delaunay(&mut self) {
        for _ in 0..MAX_FLIPS {
            if !self.flip_once() {
                return;
            }
        }
    }

    fn flip_once(&mut self) -> bool {
        let edges = Edges::build(&self.tris, self.nodes.len());
        let mut owners = vec![Vec::with_capacity(2); edges.len()];
        for (t, te) in edges.tri_edges.iter().enumerate() {
            for (k, &e) in te.iter().enumerate() {
                owners[e].push((t, k));
            }
        }
        for (e, own) in owners.iter().enumerate() {
            if own.len() != 2 {
                continue;
            }
            let (t1, k1) = own[0];
            let (t2, k2) = own[1];
            let a = self.tris[t1][k1];
            let b = self.tris[t1][(k1 + 1) % 3];
            let c = self.tris[t1][(k1 + 2) % 3];
            let d = self.tris[t2][(k2 + 2) % 3];
            debug_assert_eq!(edges.endpoints[e], [a.min(b), a.max(b)]);
            let p = |i: usize| self.nodes[i];
            let scale = p(a).dist(p(b)).max(p(c).dist(p(d)));
            if incircle(p(a), p(b), p(c), p(d)) <= 1e-12 * scale.powi(4) {
                continue;
            }
            let area_eps = 1e-12 * scale * scale;
            if orient2d(p(a), p(d), p(c)) <= area_eps || orient2d(p(d), p(b), p(c)) <= area_eps {
                continue;
            }
            self.tris[t1] = [a, d, c];
            self.tris[t2] = [d, b, c];
            return true;
        }
        false
    }

    fn split_edge(&mut self, a: usize, b: usize) {
        let m = self.nodes.len();
        self.nodes.push(self.nodes[a].lerp(self.nodes[b], 0.5));
        let shared = self
            .tris
            .iter()
            .filter(|t| t.contains(&a) && t.contains(&b))
            .count();
        self.boundary.push(shared == 1);
        self.singular.push(false);
        let count = self.tris.len();
        for t in 0..count {
            let tri = self.tris[t];
            for k in 0..3 {
                let (u, v, w) = (tri[k], tri[(k + 1) % 3], tri[(k + 2) % 3]);
                if (u == a && v == b) || (u == b && v == a) {
                    self.tris[t] = [u, m, w];
                    self.tris.push([m, v, w]);
                    break;
                }
            }
        }
    }

    /// Delaunay flips, then halving of any edge that joins two singular
    /// vertices, until neither applies. A halved edge cannot come back: its
    /// midpoint lies inside every circle through both ends.
    fn settle(&mut self) {
        loop {
            self.flip_to_delaunay();
            let edges = Edges::build(&self.tris, self.nodes.len());
            let Some(&[a, b]) = edges
                .endpoints
                .iter()
                .find(|[a, b]| self.singular[*a] && self.singular[*b])
            else {
                return;
            };
            self.split_edge(a, b);
        }
    }

    /// Inserts the circumcenter of triangle `t`, unless a boundary edge is in
    /// the way: an edge separating `t` from the circumcenter, or a visible
    /// edge whose diametral circle holds it, is halved instead.
    fn improve(&mut self, t: usize) {
        let [a, b, c] = self.tris[t].map(|v| self.nodes[v]);
        let center = circumcenter(a, b, c);
        let centroid = Point::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0);
        let edges = Edges::build(&self.tris, self.nodes.len());
        let boundary: Vec<[usize; 2]> = edges
            .endpoints
            .iter()
            .zip(&edges.multiplicity)
            .filter(|&(_, &m)| m == 1)
            .map(|(&e, _)| e)
            .collect();
        let crosses = |[u, v]: [usize; 2], p: Point, q: Point| {
            segments_cross(self.nodes[u], self.nodes[v], p, q)
        };
        let blocking = boundary
            .iter()
            .filter(|&&e| crosses(e, centroid, center))
            .min_by(|&&[u, v], &&[p, q]| {
                let du = point_segment_distance(centroid, self.nodes[u], self.nodes[v]);
                let dp = point_segment_distance(centroid, self.nodes[p], self.nodes[q]);
                du.total_cmp(&dp)
            });
        if let Some(&[u, v]) = blocking {
            self.split_edge(u, v);
            return;
        }
        let encroached = boundary
            .iter()
            .filter(|&&[u, v]| (self.nodes[u] - center).dot(self.nodes[v] - center) < 0.0)
            .filter(|&&[u, v]| {
                let mid = self.nodes[u].lerp(self.nodes[v], 0.5);
                !boundary
                    .iter()
                    .any(|&f| f != [u, v] && crosses(f, center, mid))
            })
            .max_by(|&&[u, v], &&[p, q]| {
                self.nodes[u]
                    .dist(self.nodes[v])
                    .total_cmp(&self.nodes[p].dist(self.nodes[q]))
            });
        if let Some(&[u, v]) = encroached {
            self.split_edge(u, v);
            return;
        }
        match self.locate(center) {
            Some(host) => self.insert_in(host, center),
            None => self.split_longest_edge(t),
        }
    }

    /// A triangle containing `p`, by exhaustive orientation tests.
    fn locate(&self, p: Point) -> Option<usize> {
        self.tris.iter().position(|tri| {
            let [a, b, c] = tri.map(|v| self.nodes[v]);
            orient2d(a, b, p) >= 0.0 && orient2d(b, c, p) >= 0.0 && orient2d(c, a, p) >= 0.0
        })
    }

    /// Adds `p` inside triangle `t`, or splits the edge it (nearly) lies on.
    fn insert_in(&mut self, t: usize, p: Point) {
        let tri = self.tris[t];
        let pts = tri.map(|v| self.nodes[v]);
        let area = orient2d(pts[0], pts[1], pts[2]);
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            if orient2d(self.nodes[u], self.nodes[v], p) <= 1e-6 * area {
                self.split_edge(u, v);
                return;
            }
        }
        let m = self.nodes.len();
        self.nodes.push(p);
        self.boundary.push(false);
        self.singular.push(false);
        let [a, b, c] = tri;
        self.tris[t] = [a, b, m];
        self.tris.push([b, c, m]);
        self.tris.push([c, a, m]);
    }

    fn split_longest_edge(&mut self, t: usize) {
        let tri = self.tris[t];
        let k = (0..3)
            .max_by(|&i, &j| {
                let li = self.nodes[tri[i]].dist(self.nodes[tri[(i + 1) % 3]]);
                let lj = self.nodes[tri[j]].dist(self.nodes[tri[(j + 1) % 3]]);
                li.total_cmp(&lj)
            })
            .unwrap_or(0);
        self.split_edge(tri[k], tri[(k + 1) % 3]);
    }
}
