//! SVG pictures of meshes and legacy VTK files for external viewers.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::assembly::FeFunction;
use crate::mesh::TriMesh;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("solution has {values} values but the mesh has {nodes} nodes")]
    ValueCount { values: usize, nodes: usize },
}

const SVG_SIZE: f64 = 800.0;
const SVG_MARGIN: f64 = 10.0;

/// Every edge as a `<line>`, singular polygon vertices as red `<circle>`s.
pub fn svg_string(mesh: &TriMesh) -> String {
    let nodes = mesh.nodes();
    let (mut lo_x, mut lo_y, mut hi_x, mut hi_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in nodes {
        lo_x = lo_x.min(p.x);
        lo_y = lo_y.min(p.y);
        hi_x = hi_x.max(p.x);
        hi_y = hi_y.max(p.y);
    }
    let extent = (hi_x - lo_x).max(hi_y - lo_y);
    let scale = if extent > 0.0 { SVG_SIZE / extent } else { 1.0 };
    let width = (hi_x - lo_x).max(0.0) * scale + 2.0 * SVG_MARGIN;
    let height = (hi_y - lo_y).max(0.0) * scale + 2.0 * SVG_MARGIN;
    let sx = |x: f64| (x - lo_x) * scale + SVG_MARGIN;
    let sy = |y: f64| (hi_y - y) * scale + SVG_MARGIN;
    let stroke = (0.5f64).min(200.0 / (mesh.triangle_count() as f64).sqrt().max(1.0));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(
        out,
        r#"<g stroke="black" stroke-width="{stroke:.3}" stroke-linecap="round">"#
    );
    for &[a, b] in &mesh.edges().endpoints {
        let (p, q) = (nodes[a], nodes[b]);
        let _ = writeln!(
            out,
            r#"<line x1="{:.4}" y1="{:.4}" x2="{:.4}" y2="{:.4}"/>"#,
            sx(p.x),
            sy(p.y),
            sx(q.x),
            sy(q.y)
        );
    }
    out.push_str("</g>\n");
    if let Some(domain) = mesh.domain() {
        for i in domain.singular_vertices() {
            let p = domain.vertices()[i];
            let _ = writeln!(
                out,
                r#"<circle cx="{:.4}" cy="{:.4}" r="4" fill="red"/>"#,
                sx(p.x),
                sy(p.y)
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

pub fn export_svg(mesh: &TriMesh, path: &Path) -> Result<(), ExportError> {
    write_file(path, svg_string(mesh))
}

/// Legacy ASCII `UNSTRUCTURED_GRID` with triangle cells and, if given, the
/// nodal scalar `u`.
pub fn vtk_string(mesh: &TriMesh, solution: Option<&FeFunction>) -> Result<String, ExportError> {
    if let Some(u) = solution {
        if u.values().len() != mesh.node_count() {
            return Err(ExportError::ValueCount {
                values: u.values().len(),
                nodes: mesh.node_count(),
            });
        }
    }
    let n = mesh.node_count();
    let m = mesh.triangle_count();
    let mut out = String::with_capacity(40 * n + 30 * m);
    out.push_str("# vtk DataFile Version 3.0\ngraded-fem mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n");
    let _ = writeln!(out, "POINTS {n} double");
    for p in mesh.nodes() {
        let _ = writeln!(out, "{:?} {:?} 0", p.x, p.y);
    }
    let _ = writeln!(out, "CELLS {m} {}", 4 * m);
    for t in mesh.triangles() {
        let _ = writeln!(out, "3 {} {} {}", t[0], t[1], t[2]);
    }
    let _ = writeln!(out, "CELL_TYPES {m}");
    for _ in 0..m {
        out.push_str("5\n");
    }
    if let Some(u) = solution {
        let _ = writeln!(out, "POINT_DATA {n}\nSCALARS u double 1\nLOOKUP_TABLE default");
        for v in u.values() {
            let _ = writeln!(out, "{v:?}");
        }
    }
    Ok(out)
}

pub fn export_vtk(
    mesh: &TriMesh,
    solution: Option<&FeFunction>,
    path: &Path,
) -> Result<(), ExportError> {
    write_file(path, vtk_string(mesh, solution)?)
}

pub(crate) fn write_file(path: &Path, contents: String) -> Result<(), ExportError> {
    let io_err = |source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path.as_os_str().is_empty() {
        return Err(io_err(io::Error::new(
            io::ErrorKind::InvalidInput,
            "empty path",
        )));
    }
    fs::write(path, contents).map_err(io_err)
}
