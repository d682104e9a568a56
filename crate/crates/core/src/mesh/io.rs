//! Plain-text mesh format:
//!
//! ```text
//! nodes N
//! x y boundary_flag      (N lines, flag 0 or 1)
//! triangles M
//! i j k                  (M lines, 0-based node indices)
//! ```
//!
//! Coordinates are written in shortest round-trip form, so
//! `load_mesh(&save_mesh(m))` reproduces the coordinates bit for bit.

use std::fmt::Write as _;

use crate::geometry::Point;

use super::{MeshError, TriMesh};

pub fn save_mesh(mesh: &TriMesh) -> String {
    let mut s = String::with_capacity(32 * (mesh.node_count() + mesh.triangle_count()) + 32);
    let _ = writeln!(s, "nodes {}", mesh.node_count());
    for (p, &b) in mesh.nodes().iter().zip(mesh.boundary_flags()) {
        let _ = writeln!(s, "{:?} {:?} {}", p.x, p.y, u8::from(b));
    }
    let _ = writeln!(s, "triangles {}", mesh.triangle_count());
    for t in mesh.triangles() {
        let _ = writeln!(s, "{} {} {}", t[0], t[1], t[2]);
    }
    s
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with its 1-based number.
    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str), MeshError> {
        for (i, line) in self.inner.by_ref() {
            self.last = i + 1;
            let line = line.trim();
            if !line.is_empty() {
                return Ok((i + 1, line));
            }
        }
        Err(MeshError::Parse {
            line: self.last + 1,
            message: format!("unexpected end of input, expected {what}"),
        })
    }
}

fn err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn header(lines: &mut Lines<'_>, keyword: &str) -> Result<usize, MeshError> {
    let (n, line) = lines.next_line(&format!("`{keyword} <count>`"))?;
    let mut it = line.split_whitespace();
    if it.next() != Some(keyword) {
        return Err(err(n, format!("expected `{keyword} <count>`, found `{line}`")));
    }
    let count = it
        .next()
        .and_then(|c| c.parse::<usize>().ok())
        .ok_or_else(|| err(n, format!("malformed {keyword} count")))?;
    if it.next().is_some() {
        return Err(err(n, "trailing tokens after count"));
    }
    Ok(count)
}

pub fn load_mesh(text: &str) -> Result<TriMesh, MeshError> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        last: 0,
    };

    let n_nodes = header(&mut lines, "nodes")?;
    let mut nodes = Vec::with_capacity(n_nodes);
    let mut boundary = Vec::with_capacity(n_nodes);
    for _ in 0..n_nodes {
        let (n, line) = lines.next_line("a node line")?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(n, format!("expected `x y flag`, found {} fields", fields.len())));
        }
        let coord = |s: &str| -> Result<f64, MeshError> {
            let v: f64 = s
                .parse()
                .map_err(|_| err(n, format!("malformed coordinate `{s}`")))?;
            if !v.is_finite() {
                return Err(err(n, format!("non-finite coordinate `{s}`")));
            }
            Ok(v)
        };
        nodes.push(Point::new(coord(fields[0])?, coord(fields[1])?));
        boundary.push(match fields[2] {
            "0" => false,
            "1" => true,
            other => return Err(err(n, format!("boundary flag must be 0 or 1, found `{other}`"))),
        });
    }

    let n_tris = header(&mut lines, "triangles")?;
    let mut triangles = Vec::with_capacity(n_tris);
    for _ in 0..n_tris {
        let (n, line) = lines.next_line("a triangle line")?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(err(n, format!("expected `i j k`, found {} fields", fields.len())));
        }
        let mut tri = [0usize; 3];
        for (slot, s) in tri.iter_mut().zip(&fields) {
            let v: usize = s
                .parse()
                .map_err(|_| err(n, format!("malformed node index `{s}`")))?;
            if v >= n_nodes {
                return Err(err(
                    n,
                    format!("node index {v} out of range ({n_nodes} nodes)"),
                ));
            }
            *slot = v;
        }
        triangles.push(tri);
    }
    if let Ok((n, line)) = lines.next_line("") {
        return Err(err(n, format!("unexpected trailing content `{line}`")));
    }

    TriMesh::from_parts(nodes, boundary, triangles)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ONE_TRIANGLE: &str = "nodes 3\n0 0 1\n1 0 1\n0 1 1\ntriangles 1\n0 1 2\n";

    #[test]
    fn loads_single_triangle() {
        let m = load_mesh(ONE_TRIANGLE).unwrap();
        assert_eq!(m.node_count(), 3);
        assert_eq!(m.triangles(), &[[0, 1, 2]]);
        assert!(m.validate().is_valid());
    }

    #[test]
    fn canonical_form_is_stable() {
        let text = save_mesh(&load_mesh(ONE_TRIANGLE).unwrap());
        assert_eq!(text, "nodes 3\n0.0 0.0 1\n1.0 0.0 1\n0.0 1.0 1\ntriangles 1\n0 1 2\n");
        assert_eq!(save_mesh(&load_mesh(&text).unwrap()), text);
    }

    #[test]
    fn out_of_range_index_names_the_line() {
        let text = "nodes 3\n0 0 1\n1 0 1\n0 1 1\ntriangles 1\n0 99 2\n";
        let e = load_mesh(text).unwrap_err();
        assert_eq!(
            e,
            MeshError::Parse {
                line: 6,
                message: "node index 99 out of range (3 nodes)".into()
            }
        );
    }

    #[test]
    fn malformed_inputs() {
        let line_of = |t: &str| match load_mesh(t) {
            Err(MeshError::Parse { line, .. }) => line,
            other => panic!("expected parse error, got {other:?}"),
        };
        assert_eq!(line_of("nodes x\n"), 1);
        assert_eq!(line_of("nodes 2\n0 0 1\n"), 3);
        assert_eq!(line_of("nodes 1\n0 NaN 1\ntriangles 0\n"), 2);
        assert_eq!(line_of("nodes 1\n0 inf 1\ntriangles 0\n"), 2);
        assert_eq!(line_of("nodes 1\n0 0 2\ntriangles 0\n"), 2);
        assert_eq!(line_of("nodes 1\n0 0 1\ntriangles 2\n0 0 0\n"), 5);
        assert_eq!(line_of("nodes 1\n0 0 1\ntriangles 0\nextra\n"), 4);
    }
}
