//! C interface to `graded-fem`.
//!
//! Objects are opaque handles created by `fem_*` constructors and released
//! with the matching `*_free`. Every fallible call returns a [`FemStatus`];
//! on failure `fem_last_error()` describes what went wrong on this thread.
//! Panics never cross the boundary: they are reported as
//! `FEM_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::slice;
use std::sync::Arc;

use graded_fem::assembly::{AssemblyError, FeFunction};
use graded_fem::export::{export_svg, export_vtk, ExportError};
use graded_fem::expr::{parse, ExprError};
use graded_fem::geometry::{make_grading, GeometryError, GradingSpec, Point, PolygonDomain};
use graded_fem::mesh::{load_mesh, save_mesh, triangulate_initial, MeshError, TriMesh};
use graded_fem::norms::{convergence_rate, error_between_levels, NormsError};
use graded_fem::quadrature::QuadOrder;
use graded_fem::refine::{refine_n, RefineError};
use graded_fem::solver::{solve_poisson, CgOptions, SolverConfig, SolverError};
use graded_fem::study::{run_study, PolygonInput, StudyConfig, StudyError};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FemStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Geometry = 3,
    Mesh = 4,
    Refine = 5,
    Expression = 6,
    Solver = 7,
    Norms = 8,
    Io = 9,
    Config = 10,
    Panic = 99,
}

/// A polygon with its grading parameters.
pub struct FemDomain {
    polygon: Arc<PolygonDomain>,
    grading: GradingSpec,
}

/// A triangulation, possibly carrying refinement history.
pub struct FemMesh {
    mesh: Arc<TriMesh>,
}

/// A discrete solution with solver statistics.
pub struct FemSolution {
    u: FeFunction,
    iterations: usize,
    relative_residual: f64,
    galerkin_residual: f64,
}

struct Failure {
    status: FemStatus,
    message: String,
}

impl Failure {
    fn new(status: FemStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

macro_rules! failure_from {
    ($($err:ty => $status:ident),* $(,)?) => {
        $(impl From<$err> for Failure {
            fn from(e: $err) -> Self {
                Failure::new(FemStatus::$status, e.to_string())
            }
        })*
    };
}

failure_from!(
    GeometryError => Geometry,
    MeshError => Mesh,
    RefineError => Refine,
    ExprError => Expression,
    NormsError => Norms,
    ExportError => Io,
);

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        let status = match &e {
            SolverError::Assembly(AssemblyError::Expr { .. }) => FemStatus::Expression,
            _ => FemStatus::Solver,
        };
        Failure::new(status, e.to_string())
    }
}

impl From<StudyError> for Failure {
    fn from(e: StudyError) -> Self {
        let status = match &e {
            StudyError::Read { .. } | StudyError::Export(_) => FemStatus::Io,
            StudyError::Geometry(_) => FemStatus::Geometry,
            StudyError::Expr { .. } => FemStatus::Expression,
            StudyError::Level { .. } => FemStatus::Solver,
            _ => FemStatus::Config,
        };
        Failure::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> FemStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            FemStatus::Ok
        }
        Ok(Err(f)) => {
            set_last_error(&f.message);
            f.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("internal panic: {msg}"));
            FemStatus::Panic
        }
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure::new(FemStatus::NullPointer, format!("{what} is null")))
}

unsafe fn handle_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure::new(FemStatus::NullPointer, format!("{what} is null")))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::new(FemStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::new(FemStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(FemStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(FemStatus::NullPointer, "output pointer is null"));
    }
    *out = value;
    Ok(())
}

unsafe fn out_slice<'a, T>(out: *mut T, len: usize, needed: usize) -> Result<&'a mut [T], Failure> {
    if out.is_null() {
        return Err(Failure::new(FemStatus::NullPointer, "output buffer is null"));
    }
    if len < needed {
        return Err(Failure::new(
            FemStatus::InvalidArgument,
            format!("output buffer holds {len} entries, {needed} needed"),
        ));
    }
    Ok(slice::from_raw_parts_mut(out, needed))
}

unsafe fn free<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `fem_*` call on the same thread.
#[no_mangle]
pub extern "C" fn fem_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn fem_status_name(status: FemStatus) -> *const c_char {
    let s: &'static CStr = match status {
        FemStatus::Ok => c"ok",
        FemStatus::NullPointer => c"null pointer",
        FemStatus::InvalidArgument => c"invalid argument",
        FemStatus::Geometry => c"invalid geometry",
        FemStatus::Mesh => c"invalid mesh",
        FemStatus::Refine => c"refinement failed",
        FemStatus::Expression => c"expression error",
        FemStatus::Solver => c"solver failed",
        FemStatus::Norms => c"norm computation failed",
        FemStatus::Io => c"I/O error",
        FemStatus::Config => c"configuration error",
        FemStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fem_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Built-in domain (`square`, `triangle`, `lshape`, `octagon`, `plus`) with κ = 1/2.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_named(name: *const c_char, out: *mut *mut FemDomain) -> FemStatus {
    guard(|| {
        let polygon = PolygonDomain::named(string(name, "name")?)?;
        let grading = GradingSpec::uniform(&polygon);
        put(
            out,
            FemDomain {
                polygon: Arc::new(polygon),
                grading,
            },
        )
    })
}

/// Domain from `{"vertices": [[x, y], ...], "grading": ...}`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_from_json(json: *const c_char, out: *mut *mut FemDomain) -> FemStatus {
    guard(|| {
        let input = PolygonInput::from_json(string(json, "json")?)?;
        let (polygon, grading) = input.build()?;
        put(
            out,
            FemDomain {
                polygon: Arc::new(polygon),
                grading,
            },
        )
    })
}

/// Domain from `count` counter-clockwise vertices stored as `x0, y0, x1, y1, ...`.
///
/// # Safety
/// `xy` must point to `2 * count` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_from_vertices(
    xy: *const f64,
    count: usize,
    out: *mut *mut FemDomain,
) -> FemStatus {
    guard(|| {
        if xy.is_null() {
            return Err(Failure::new(FemStatus::NullPointer, "vertex array is null"));
        }
        let raw = slice::from_raw_parts(xy, 2 * count);
        let pts = raw.chunks_exact(2).map(|c| Point::new(c[0], c[1])).collect();
        let polygon = PolygonDomain::new(pts)?;
        let grading = GradingSpec::uniform(&polygon);
        put(
            out,
            FemDomain {
                polygon: Arc::new(polygon),
                grading,
            },
        )
    })
}

/// Sets the same κ at every singular vertex.
///
/// # Safety
/// `domain` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_set_kappa(domain: *mut FemDomain, kappa: f64) -> FemStatus {
    guard(|| {
        let d = handle_mut(domain, "domain")?;
        d.grading = GradingSpec::from_uniform_kappa(&d.polygon, kappa)?;
        Ok(())
    })
}

/// Sets κ at one vertex, keeping the others.
///
/// # Safety
/// `domain` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_set_vertex_kappa(
    domain: *mut FemDomain,
    vertex: usize,
    kappa: f64,
) -> FemStatus {
    guard(|| {
        let d = handle_mut(domain, "domain")?;
        let mut map: std::collections::BTreeMap<usize, f64> = d
            .polygon
            .singular_vertices()
            .into_iter()
            .map(|i| (i, d.grading.kappa_at(i)))
            .collect();
        map.insert(vertex, kappa);
        d.grading = GradingSpec::from_kappa(&d.polygon, &map)?;
        Ok(())
    })
}

/// Grades with κᵢ = 2^(−θ/a) at every singular vertex.
///
/// # Safety
/// `domain` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_set_theta(domain: *mut FemDomain, theta: f64, a: f64) -> FemStatus {
    guard(|| {
        let d = handle_mut(domain, "domain")?;
        let map = d.polygon.singular_vertices().into_iter().map(|i| (i, a)).collect();
        d.grading = make_grading(&d.polygon, theta, &map)?;
        Ok(())
    })
}

/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_vertex_count(domain: *const FemDomain, out: *mut usize) -> FemStatus {
    guard(|| write(out, handle(domain, "domain")?.polygon.len()))
}

/// Interior angle, singularity flag and κ of one vertex.
///
/// # Safety
/// `domain` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_vertex(
    domain: *const FemDomain,
    vertex: usize,
    angle: *mut f64,
    singular: *mut bool,
    kappa: *mut f64,
) -> FemStatus {
    guard(|| {
        let d = handle(domain, "domain")?;
        let info = d.polygon.vertex_info().get(vertex).ok_or_else(|| {
            Failure::new(
                FemStatus::InvalidArgument,
                format!("vertex {vertex} out of range ({} vertices)", d.polygon.len()),
            )
        })?;
        write(angle, info.interior_angle)?;
        write(singular, info.is_singular)?;
        write(kappa, d.grading.kappa_at(vertex))
    })
}

/// Expected H¹ and L² rates for the current grading.
///
/// # Safety
/// `domain` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_expected_rates(
    domain: *const FemDomain,
    h1: *mut f64,
    l2: *mut f64,
) -> FemStatus {
    guard(|| {
        let d = handle(domain, "domain")?;
        write(h1, d.grading.expected_h1_rate(&d.polygon))?;
        write(l2, d.grading.expected_l2_rate(&d.polygon))
    })
}

/// # Safety
/// `domain` must be null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn fem_domain_free(domain: *mut FemDomain) {
    free(domain)
}

/// Initial triangulation of the domain.
///
/// # Safety
/// `domain` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_initial(domain: *const FemDomain, out: *mut *mut FemMesh) -> FemStatus {
    guard(|| {
        let d = handle(domain, "domain")?;
        let mesh = triangulate_initial(&d.polygon)?;
        put(out, FemMesh { mesh: Arc::new(mesh) })
    })
}

/// Applies `levels` graded refinements using the domain's κ values.
///
/// # Safety
/// `domain` and `mesh` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_refine(
    domain: *const FemDomain,
    mesh: *const FemMesh,
    levels: u32,
    out: *mut *mut FemMesh,
) -> FemStatus {
    guard(|| {
        let d = handle(domain, "domain")?;
        let m = handle(mesh, "mesh")?;
        if m.mesh.domain() != Some(&*d.polygon) {
            return Err(Failure::new(
                FemStatus::InvalidArgument,
                "mesh was not built from this domain",
            ));
        }
        let fine = refine_n(&m.mesh, &d.grading, levels)?;
        put(out, FemMesh { mesh: Arc::new(fine) })
    })
}

/// Node count, triangle count and refinement level.
///
/// # Safety
/// `mesh` must be a live handle; each output may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_sizes(
    mesh: *const FemMesh,
    nodes: *mut usize,
    triangles: *mut usize,
    level: *mut u32,
) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        if !nodes.is_null() {
            *nodes = m.node_count();
        }
        if !triangles.is_null() {
            *triangles = m.triangle_count();
        }
        if !level.is_null() {
            *level = m.level();
        }
        Ok(())
    })
}

/// Copies node coordinates as `x0, y0, x1, y1, ...` into `xy` (length `len`).
///
/// # Safety
/// `mesh` must be a live handle; `xy` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_nodes(mesh: *const FemMesh, xy: *mut f64, len: usize) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        let dst = out_slice(xy, len, 2 * m.node_count())?;
        for (d, p) in dst.chunks_exact_mut(2).zip(m.nodes()) {
            d[0] = p.x;
            d[1] = p.y;
        }
        Ok(())
    })
}

/// Copies triangle corner indices, three per triangle, into `tri` (length `len`).
///
/// # Safety
/// `mesh` must be a live handle; `tri` must hold `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_triangles(mesh: *const FemMesh, tri: *mut usize, len: usize) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        let dst = out_slice(tri, len, 3 * m.triangle_count())?;
        for (d, t) in dst.chunks_exact_mut(3).zip(m.triangles()) {
            d.copy_from_slice(t);
        }
        Ok(())
    })
}

/// Copies boundary flags (1 on the boundary, 0 inside) into `flags`.
///
/// # Safety
/// `mesh` must be a live handle; `flags` must hold `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_boundary_flags(mesh: *const FemMesh, flags: *mut u8, len: usize) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        let dst = out_slice(flags, len, m.node_count())?;
        for (d, &b) in dst.iter_mut().zip(m.boundary_flags()) {
            *d = u8::from(b);
        }
        Ok(())
    })
}

/// Runs the conformity checks. A non-conforming mesh gives `FEM_STATUS_MESH`
/// with the violations in `fem_last_error()`.
///
/// # Safety
/// `mesh` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_validate(mesh: *const FemMesh) -> FemStatus {
    guard(|| {
        let report = handle(mesh, "mesh")?.mesh.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Failure::new(FemStatus::Mesh, report.to_string()))
        }
    })
}

/// Reads a mesh in the plain-text format. Loaded meshes carry no domain, so
/// they cannot be refined.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_load(path: *const c_char, out: *mut *mut FemMesh) -> FemStatus {
    guard(|| {
        let path = string(path, "path")?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::new(FemStatus::Io, format!("cannot read {path}: {e}")))?;
        let mesh = load_mesh(&text)?;
        put(out, FemMesh { mesh: Arc::new(mesh) })
    })
}

/// # Safety
/// `mesh` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_save(mesh: *const FemMesh, path: *const c_char) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        let path = string(path, "path")?;
        std::fs::write(path, save_mesh(m))
            .map_err(|e| Failure::new(FemStatus::Io, format!("cannot write {path}: {e}")))
    })
}

/// # Safety
/// `mesh` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_export_svg(mesh: *const FemMesh, path: *const c_char) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        Ok(export_svg(m, Path::new(string(path, "path")?))?)
    })
}

/// # Safety
/// `mesh` must be null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn fem_mesh_free(mesh: *mut FemMesh) {
    free(mesh)
}

/// Solves −Δu = f with u = 0 on the boundary. `quad_order` is 1, 2 or 3;
/// `rel_tol` ≤ 0 selects the default 1e-12.
///
/// # Safety
/// `mesh` must be a live handle; `f` must be a NUL-terminated string; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_solve(
    mesh: *const FemMesh,
    f: *const c_char,
    quad_order: u8,
    rel_tol: f64,
    out: *mut *mut FemSolution,
) -> FemStatus {
    guard(|| {
        let m = &handle(mesh, "mesh")?.mesh;
        let f = parse(string(f, "f")?)?;
        let quad_order = QuadOrder::try_from(quad_order)
            .map_err(|e| Failure::new(FemStatus::InvalidArgument, e))?;
        let mut cg = CgOptions::default();
        if rel_tol > 0.0 {
            cg.rel_tol = rel_tol;
        }
        let sol = solve_poisson(m, &f, &SolverConfig { cg, quad_order })?;
        put(
            out,
            FemSolution {
                u: sol.u,
                iterations: sol.iterations,
                relative_residual: sol.relative_residual,
                galerkin_residual: sol.galerkin_residual,
            },
        )
    })
}

/// Copies nodal values into `values` (length `len` ≥ node count).
///
/// # Safety
/// `solution` must be a live handle; `values` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fem_solution_values(
    solution: *const FemSolution,
    values: *mut f64,
    len: usize,
) -> FemStatus {
    guard(|| {
        let s = handle(solution, "solution")?;
        out_slice(values, len, s.u.values().len())?.copy_from_slice(s.u.values());
        Ok(())
    })
}

/// Node count, CG iterations, relative residual and scaled Galerkin residual.
///
/// # Safety
/// `solution` must be a live handle; each output may be null to skip it.
#[no_mangle]
pub unsafe extern "C" fn fem_solution_stats(
    solution: *const FemSolution,
    nodes: *mut usize,
    iterations: *mut usize,
    relative_residual: *mut f64,
    galerkin_residual: *mut f64,
) -> FemStatus {
    guard(|| {
        let s = handle(solution, "solution")?;
        if !nodes.is_null() {
            *nodes = s.u.values().len();
        }
        if !iterations.is_null() {
            *iterations = s.iterations;
        }
        if !relative_residual.is_null() {
            *relative_residual = s.relative_residual;
        }
        if !galerkin_residual.is_null() {
            *galerkin_residual = s.galerkin_residual;
        }
        Ok(())
    })
}

/// # Safety
/// `solution` must be a live handle; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn fem_solution_export_vtk(solution: *const FemSolution, path: *const c_char) -> FemStatus {
    guard(|| {
        let s = handle(solution, "solution")?;
        Ok(export_vtk(s.u.mesh(), Some(&s.u), Path::new(string(path, "path")?))?)
    })
}

/// H¹ seminorm and L² norm of `fine − coarse`, where `fine` lives on a
/// refinement of the mesh of `coarse`.
///
/// # Safety
/// Both solutions must be live handles; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_error_between_levels(
    fine: *const FemSolution,
    coarse: *const FemSolution,
    h1: *mut f64,
    l2: *mut f64,
) -> FemStatus {
    guard(|| {
        let e = error_between_levels(&handle(fine, "fine")?.u, &handle(coarse, "coarse")?.u)?;
        write(h1, e.h1)?;
        write(l2, e.l2)
    })
}

/// Writes the `count − 1` rates `log₂(eⱼ / eⱼ₊₁)` to `rates`.
///
/// # Safety
/// `errors` must hold `count` doubles and `rates` `count − 1` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn fem_convergence_rate(errors: *const f64, count: usize, rates: *mut f64) -> FemStatus {
    guard(|| {
        if errors.is_null() {
            return Err(Failure::new(FemStatus::NullPointer, "errors is null"));
        }
        let r = convergence_rate(slice::from_raw_parts(errors, count))?;
        out_slice(rates, r.len(), r.len())?.copy_from_slice(&r);
        Ok(())
    })
}

/// Runs the study described by the JSON file at `config_path` and returns
/// its CSV table in `csv_out` (free with `fem_string_free`).
///
/// # Safety
/// `config_path` must be a NUL-terminated string; `csv_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fem_run_study(config_path: *const c_char, csv_out: *mut *mut c_char) -> FemStatus {
    guard(|| {
        if csv_out.is_null() {
            return Err(Failure::new(FemStatus::NullPointer, "csv_out is null"));
        }
        let path = Path::new(string(config_path, "config_path")?);
        let config = StudyConfig::load(path)?;
        let report = run_study(&config, path.parent().unwrap_or(Path::new(".")))?;
        *csv_out = CString::new(report.to_csv())
            .map_err(|_| Failure::new(FemStatus::Panic, "CSV contains NUL"))?
            .into_raw();
        Ok(())
    })
}

/// # Safety
/// `solution` must be null or a live handle, freed at most once.
#[no_mangle]
pub unsafe extern "C" fn fem_solution_free(solution: *mut FemSolution) {
    free(solution)
}
