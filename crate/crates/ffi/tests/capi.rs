use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use graded_fem_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(fem_last_error()) }
        .to_string_lossy()
        .into_owned()
}

fn named(name: &str) -> *mut FemDomain {
    let name = CString::new(name).unwrap();
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { fem_domain_named(name.as_ptr(), &mut d) }, FemStatus::Ok);
    d
}

#[test]
fn refine_solve_and_measure() {
    unsafe {
        let d = named("lshape");
        assert_eq!(fem_domain_set_kappa(d, 0.2), FemStatus::Ok);
        let (mut angle, mut singular, mut kappa) = (0.0, false, 0.0);
        assert_eq!(fem_domain_vertex(d, 3, &mut angle, &mut singular, &mut kappa), FemStatus::Ok);
        assert!(singular && kappa == 0.2);
        assert!((angle - 1.5 * std::f64::consts::PI).abs() < 1e-12);

        let mut m0 = ptr::null_mut();
        assert_eq!(fem_mesh_initial(d, &mut m0), FemStatus::Ok);
        let mut m1 = ptr::null_mut();
        let mut m2 = ptr::null_mut();
        assert_eq!(fem_mesh_refine(d, m0, 3, &mut m1), FemStatus::Ok);
        assert_eq!(fem_mesh_refine(d, m1, 1, &mut m2), FemStatus::Ok);
        let (mut n0, mut t0, mut t2, mut lvl) = (0, 0, 0, 0);
        fem_mesh_sizes(m0, &mut n0, &mut t0, ptr::null_mut());
        fem_mesh_sizes(m2, ptr::null_mut(), &mut t2, &mut lvl);
        assert_eq!(t2, t0 * 256);
        assert_eq!(lvl, 4);
        assert_eq!(fem_mesh_validate(m2), FemStatus::Ok);

        let mut xy = vec![0.0; 2 * n0];
        assert_eq!(fem_mesh_nodes(m0, xy.as_mut_ptr(), xy.len()), FemStatus::Ok);
        assert_eq!(&xy[6..8], &[0.0, 0.0]);
        let mut tri = vec![0usize; 3 * t0];
        assert_eq!(fem_mesh_triangles(m0, tri.as_mut_ptr(), tri.len()), FemStatus::Ok);
        assert!(tri.iter().all(|&i| i < n0));
        let mut short = vec![0usize; 2];
        assert_eq!(
            fem_mesh_triangles(m0, short.as_mut_ptr(), short.len()),
            FemStatus::InvalidArgument
        );
        assert!(last_error().contains("needed"));

        let f = CString::new("0.5").unwrap();
        let mut s1 = ptr::null_mut();
        let mut s2 = ptr::null_mut();
        assert_eq!(fem_solve(m1, f.as_ptr(), 2, 0.0, &mut s1), FemStatus::Ok);
        assert_eq!(fem_solve(m2, f.as_ptr(), 2, 0.0, &mut s2), FemStatus::Ok);
        let (mut nodes, mut its, mut res, mut gal) = (0, 0, 0.0, 0.0);
        assert_eq!(fem_solution_stats(s2, &mut nodes, &mut its, &mut res, &mut gal), FemStatus::Ok);
        assert!(its > 0 && res <= 1e-12 && gal <= 1e-9);
        let mut u = vec![0.0; nodes];
        assert_eq!(fem_solution_values(s2, u.as_mut_ptr(), u.len()), FemStatus::Ok);
        assert!(u.iter().all(|&v| v >= 0.0));

        let (mut h1, mut l2) = (0.0, 0.0);
        assert_eq!(fem_error_between_levels(s2, s1, &mut h1, &mut l2), FemStatus::Ok);
        assert!(h1 > 0.0 && l2 > 0.0 && l2 < h1);
        assert_eq!(fem_error_between_levels(s1, s2, &mut h1, &mut l2), FemStatus::Norms);

        fem_solution_free(s1);
        fem_solution_free(s2);
        fem_mesh_free(m0);
        fem_mesh_free(m1);
        fem_mesh_free(m2);
        fem_domain_free(d);
    }
}

#[test]
fn error_codes_and_messages() {
    unsafe {
        let mut d = ptr::null_mut();
        let bad = CString::new("heptagon").unwrap();
        assert_eq!(fem_domain_named(bad.as_ptr(), &mut d), FemStatus::Geometry);
        assert!(d.is_null());
        assert!(last_error().contains("heptagon"));
        assert_eq!(fem_domain_named(ptr::null(), &mut d), FemStatus::NullPointer);

        // clockwise square
        let xy = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 0.0];
        assert_eq!(fem_domain_from_vertices(xy.as_ptr(), 4, &mut d), FemStatus::Geometry);

        let d = named("lshape");
        assert_eq!(fem_domain_set_kappa(d, 0.7), FemStatus::Geometry);
        assert_eq!(fem_domain_set_theta(d, 1.0, 0.9), FemStatus::Geometry);
        assert!(last_error().contains("vertex 3"));
        assert_eq!(fem_domain_set_theta(d, 1.0, 0.5), FemStatus::Ok);
        assert!(last_error().is_empty());
        let (mut h1, mut l2) = (0.0, 0.0);
        fem_domain_expected_rates(d, &mut h1, &mut l2);
        assert_eq!((h1, l2), (1.0, 2.0));

        let mut m = ptr::null_mut();
        fem_mesh_initial(d, &mut m);
        let mut s = ptr::null_mut();
        let f = CString::new("1 / (x - x)").unwrap();
        let mut m1 = ptr::null_mut();
        fem_mesh_refine(d, m, 1, &mut m1);
        assert_eq!(fem_solve(m1, f.as_ptr(), 2, 0.0, &mut s), FemStatus::Expression);
        let f = CString::new("1").unwrap();
        assert_eq!(fem_solve(m1, f.as_ptr(), 4, 0.0, &mut s), FemStatus::InvalidArgument);

        let other = named("square");
        let mut m2 = ptr::null_mut();
        assert_eq!(fem_mesh_refine(other, m, 1, &mut m2), FemStatus::InvalidArgument);
        assert_eq!(fem_mesh_validate(ptr::null()), FemStatus::NullPointer);

        let errs = [0.4, 0.2, 0.05];
        let mut rates = [0.0; 2];
        assert_eq!(fem_convergence_rate(errs.as_ptr(), 3, rates.as_mut_ptr()), FemStatus::Ok);
        assert_eq!(rates, [1.0, 2.0]);
        assert_eq!(fem_convergence_rate(errs.as_ptr(), 1, rates.as_mut_ptr()), FemStatus::Norms);

        let name = CStr::from_ptr(fem_status_name(FemStatus::Solver));
        assert_eq!(name.to_str().unwrap(), "solver failed");

        fem_mesh_free(m);
        fem_mesh_free(m1);
        fem_domain_free(other);
        fem_domain_free(d);
        fem_domain_free(ptr::null_mut());
    }
}

#[test]
fn files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| CString::new(dir.path().join(name).to_str().unwrap()).unwrap();
    unsafe {
        let json = CString::new(r#"{"vertices": [[0,0],[1,0],[1,1],[0,1]]}"#).unwrap();
        let mut d = ptr::null_mut();
        assert_eq!(fem_domain_from_json(json.as_ptr(), &mut d), FemStatus::Ok);
        let mut m0 = ptr::null_mut();
        let mut m = ptr::null_mut();
        fem_mesh_initial(d, &mut m0);
        fem_mesh_refine(d, m0, 2, &mut m);

        let mesh_file = path("square.mesh");
        assert_eq!(fem_mesh_save(m, mesh_file.as_ptr()), FemStatus::Ok);
        let mut loaded = ptr::null_mut();
        assert_eq!(fem_mesh_load(mesh_file.as_ptr(), &mut loaded), FemStatus::Ok);
        let (mut a, mut b) = (0, 0);
        fem_mesh_sizes(m, &mut a, ptr::null_mut(), ptr::null_mut());
        fem_mesh_sizes(loaded, &mut b, ptr::null_mut(), ptr::null_mut());
        assert_eq!(a, b);
        let mut again = ptr::null_mut();
        assert_eq!(fem_mesh_refine(d, loaded, 1, &mut again), FemStatus::InvalidArgument);

        let svg = path("square.svg");
        assert_eq!(fem_mesh_export_svg(m, svg.as_ptr()), FemStatus::Ok);
        let f = CString::new("1").unwrap();
        let mut s = ptr::null_mut();
        fem_solve(m, f.as_ptr(), 1, 1e-10, &mut s);
        let vtk = path("u.vtk");
        assert_eq!(fem_solution_export_vtk(s, vtk.as_ptr()), FemStatus::Ok);
        let text = std::fs::read_to_string(dir.path().join("u.vtk")).unwrap();
        assert!(text.contains("SCALARS u double 1"));
        let empty = CString::new("").unwrap();
        assert_eq!(fem_solution_export_vtk(s, empty.as_ptr()), FemStatus::Io);

        let missing = path("missing.mesh");
        assert_eq!(fem_mesh_load(missing.as_ptr(), &mut loaded), FemStatus::Io);

        std::fs::write(
            dir.path().join("study.json"),
            r#"{"polygon": "square", "f": "1", "levels": 3}"#,
        )
        .unwrap();
        let cfg = path("study.json");
        let mut csv = ptr::null_mut();
        assert_eq!(fem_run_study(cfg.as_ptr(), &mut csv), FemStatus::Ok);
        let table = CStr::from_ptr(csv).to_str().unwrap().to_owned();
        fem_string_free(csv);
        assert_eq!(table.lines().count(), 4);
        assert!(table.starts_with("j,nodes,triangles,H1_err,H1_rate,L2_err,L2_rate"));

        std::fs::write(dir.path().join("bad.json"), r#"{"polygon": "square", "f": "1", "levels": "x"}"#)
            .unwrap();
        let bad = path("bad.json");
        assert_eq!(fem_run_study(bad.as_ptr(), &mut csv), FemStatus::Config);
        assert!(last_error().contains("levels"));

        fem_solution_free(s);
        fem_mesh_free(m0);
        fem_mesh_free(m);
        fem_mesh_free(loaded);
        fem_domain_free(d);
    }
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include "graded_fem.h"

int main(void) {
    FemDomain *d = NULL;
    FemMesh *m0 = NULL, *m = NULL;
    FemSolution *s = NULL;
    size_t nodes = 0, tris = 0, its = 0;
    double res = 1.0;
    if (fem_domain_named("lshape", &d) != FEM_STATUS_OK) return 1;
    if (fem_domain_set_kappa(d, 0.2) != FEM_STATUS_OK) return 2;
    if (fem_mesh_initial(d, &m0) != FEM_STATUS_OK) return 3;
    if (fem_mesh_refine(d, m0, 3, &m) != FEM_STATUS_OK) return 4;
    fem_mesh_sizes(m, &nodes, &tris, NULL);
    if (fem_solve(m, "0.5", 2, 0.0, &s) != FEM_STATUS_OK) return 5;
    fem_solution_stats(s, NULL, &its, &res, NULL);
    if (fem_domain_named("nonagon", &d) != FEM_STATUS_GEOMETRY) return 6;
    printf("%zu %zu %d\n", nodes, tris, res <= 1e-12);
    fem_solution_free(s);
    fem_mesh_free(m);
    fem_mesh_free(m0);
    fem_domain_free(d);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = crate_dir.join("include");
    assert!(header_dir.join("graded_fem.h").exists());
    // tests run from target/<profile>/deps; the static library sits one level up
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().parent().unwrap().join("libgraded_fem_ffi.a");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() || !lib.exists() {
        eprintln!("skipping C link test: no C compiler or no {}", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = dir.path().join("main");
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert_eq!(fields.len(), 3);
    assert_eq!(fields[2], "1");
}
