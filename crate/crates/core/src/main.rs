use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use graded_fem::export::{export_svg, export_vtk};
use graded_fem::geometry::{make_grading, GradingSpec, PolygonDomain};
use graded_fem::mesh::{load_mesh, save_mesh, triangulate_initial};
use graded_fem::refine::refine_n;
use graded_fem::study::{fmt_sci, run_study_with, PolygonInput, StudyConfig};

#[derive(Parser)]
#[command(name = "graded-fem", version, about = "P1 finite elements on graded polygon meshes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a convergence study described by a JSON file.
    Study {
        config: PathBuf,
        /// Do not print per-level progress.
        #[arg(long)]
        quiet: bool,
    },
    /// Build and refine a mesh, optionally writing it out.
    Mesh {
        /// Built-in domain name or a polygon JSON file.
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = 0)]
        refine: u32,
        /// Ratio κ at every singular vertex.
        #[arg(long, conflicts_with_all = ["theta", "a"])]
        kappa: Option<f64>,
        /// Target order θ; needs --a.
        #[arg(long, requires = "a")]
        theta: Option<f64>,
        /// Weight exponent a at every singular vertex; needs --theta.
        #[arg(long, requires = "theta")]
        a: Option<f64>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        vtk: Option<PathBuf>,
        /// Write the mesh in the plain-text format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a plain-text mesh for conformity and orientation.
    Validate { mesh: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Study { config, quiet } => study(&config, quiet),
        Command::Mesh {
            domain,
            refine,
            kappa,
            theta,
            a,
            svg,
            vtk,
            out,
        } => mesh(&domain, refine, kappa, theta.zip(a), svg, vtk, out),
        Command::Validate { mesh } => validate(&mesh),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn study(path: &Path, quiet: bool) -> Result<(), String> {
    let config = StudyConfig::load(path).map_err(|e| e.to_string())?;
    let base = path.parent().unwrap_or(Path::new("."));
    let start = Instant::now();
    let report = run_study_with(&config, base, |row| {
        if !quiet {
            eprintln!(
                "level {:>2}: {:>9} nodes, CG {:>5} its (residual {:.1e}), H1 {}, L2 {}  [{:.1}s]",
                row.level,
                row.nodes,
                row.cg_iterations,
                row.relative_residual,
                fmt_sci(row.h1_err),
                fmt_sci(row.l2_err),
                start.elapsed().as_secs_f64()
            );
        }
    })
    .map_err(|e| e.to_string())?;
    print!("{}", report.to_csv());
    if !quiet {
        eprintln!(
            "expected rates: H1 {:.4}, L2 {:.4}",
            report.expected_h1_rate, report.expected_l2_rate
        );
    }
    Ok(())
}

fn load_domain(
    domain: &str,
    kappa: Option<f64>,
    theta_a: Option<(f64, f64)>,
) -> Result<(PolygonDomain, GradingSpec), String> {
    let (polygon, file_grading) = match PolygonDomain::named(domain) {
        Ok(p) => (p, None),
        Err(named_err) => {
            let text = fs::read_to_string(domain)
                .map_err(|_| format!("{named_err}, and no polygon file `{domain}` exists"))?;
            let input = PolygonInput::from_json(&text).map_err(|e| e.to_string())?;
            let (p, g) = input.build().map_err(|e| e.to_string())?;
            let g = input.grading.is_some().then_some(g);
            (p, g)
        }
    };
    let grading = match (kappa, theta_a) {
        (Some(k), _) => GradingSpec::from_uniform_kappa(&polygon, k).map_err(|e| e.to_string())?,
        (None, Some((theta, a))) => {
            let map = polygon.singular_vertices().into_iter().map(|i| (i, a)).collect();
            make_grading(&polygon, theta, &map).map_err(|e| e.to_string())?
        }
        (None, None) => file_grading.unwrap_or_else(|| GradingSpec::uniform(&polygon)),
    };
    Ok((polygon, grading))
}

fn mesh(
    domain: &str,
    levels: u32,
    kappa: Option<f64>,
    theta_a: Option<(f64, f64)>,
    svg: Option<PathBuf>,
    vtk: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<(), String> {
    let (polygon, grading) = load_domain(domain, kappa, theta_a)?;
    let initial = triangulate_initial(&polygon).map_err(|e| e.to_string())?;
    let m = refine_n(&initial, &grading, levels).map_err(|e| e.to_string())?;
    let report = m.validate();
    if !report.is_valid() {
        return Err(format!("refined mesh failed validation:\n{report}"));
    }
    println!(
        "level {}: {} nodes, {} triangles, minimum angle {:.2} degrees",
        m.level(),
        m.node_count(),
        m.triangle_count(),
        m.min_angle_deg()
    );
    if let Some(p) = svg {
        export_svg(&m, &p).map_err(|e| e.to_string())?;
    }
    if let Some(p) = vtk {
        export_vtk(&m, None, &p).map_err(|e| e.to_string())?;
    }
    if let Some(p) = out {
        fs::write(&p, save_mesh(&m)).map_err(|e| format!("cannot write {}: {e}", p.display()))?;
    }
    Ok(())
}

fn validate(path: &Path) -> Result<(), String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let m = load_mesh(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    let report = m.validate();
    if report.is_valid() {
        println!(
            "valid: {} nodes, {} triangles",
            m.node_count(),
            m.triangle_count()
        );
        Ok(())
    } else {
        Err(format!("{} is not a valid mesh:\n{report}", path.display()))
    }
}
