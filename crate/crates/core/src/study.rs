//! Convergence studies: refine level by level, solve, and tabulate the
//! successive-level errors and rates, all driven by a JSON configuration.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::FeFunction;
use crate::export::{export_svg, export_vtk, write_file, ExportError};
use crate::expr::{parse, Expr, ExprError};
use crate::geometry::{make_grading, GeometryError, GradingSpec, Point, PolygonDomain};
use crate::mesh::{triangulate_initial, MeshError, TriMesh};
use crate::norms::{convergence_rate, error_vs_exact, p1_norms, prolongate, ErrorNorms, ExactSolution, NormsError};
use crate::quadrature::QuadOrder;
use crate::refine::{refine, RefineError};
use crate::solver::{solve_poisson_from, CgOptions, PoissonSolution, SolverConfig, SolverError};

/// A failure inside one level of a study.
#[derive(Debug, Error)]
pub enum StageError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Norms(#[from] NormsError),
    #[error(transparent)]
    Export(#[from] ExportError),
}

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
    #[error("invalid polygon: {0}")]
    Geometry(#[from] GeometryError),
    #[error("expression `{field}`: {source}")]
    Expr {
        field: String,
        #[source]
        source: ExprError,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("level {level}: {source}")]
    Level {
        level: u32,
        #[source]
        source: StageError,
    },
    #[error(transparent)]
    Export(#[from] ExportError),
}

/// A single number for every singular vertex, or values keyed by vertex index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerVertex {
    Uniform(f64),
    Map(VertexMap),
}

/// JSON object keyed by vertex index, e.g. `{"3": 0.2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct VertexMap(pub BTreeMap<usize, f64>);

impl TryFrom<BTreeMap<String, f64>> for VertexMap {
    type Error = String;
    fn try_from(m: BTreeMap<String, f64>) -> Result<Self, String> {
        m.into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<usize>()
                    .map(|i| (i, v))
                    .map_err(|_| format!("vertex key `{k}` is not a vertex index"))
            })
            .collect::<Result<_, _>>()
            .map(VertexMap)
    }
}

impl From<VertexMap> for BTreeMap<String, f64> {
    fn from(m: VertexMap) -> Self {
        m.0.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

impl PerVertex {
    fn to_map(&self, polygon: &PolygonDomain) -> BTreeMap<usize, f64> {
        match self {
            PerVertex::Uniform(v) => polygon
                .singular_vertices()
                .into_iter()
                .map(|i| (i, *v))
                .collect(),
            PerVertex::Map(m) => m.0.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KappaGrading {
    pub kappa: PerVertex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThetaGrading {
    pub theta: f64,
    pub a: PerVertex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GradingInput {
    Kappa(KappaGrading),
    ThetaA(ThetaGrading),
}

/// `{"vertices": [[x, y], ...], "grading": ...}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonInput {
    pub vertices: Vec<Point>,
    #[serde(default)]
    pub grading: Option<GradingInput>,
}

impl PolygonInput {
    pub fn from_json(text: &str) -> Result<Self, StudyError> {
        from_json_with_path(text)
    }

    /// The polygon and its grading; κ = 1/2 everywhere if none is given.
    pub fn build(&self) -> Result<(PolygonDomain, GradingSpec), StudyError> {
        let polygon = PolygonDomain::new(self.vertices.clone())?;
        let grading = build_grading(&polygon, self.grading.as_ref())?;
        Ok((polygon, grading))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolygonConfig {
    Named(String),
    Vertices(PolygonInput),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExactConfig {
    pub u: String,
    pub du_dx: String,
    pub du_dy: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub svg_levels: Vec<u32>,
    /// SVG files are named `<prefix>_<level>.svg`; defaults to `mesh`.
    pub svg_prefix: Option<String>,
    pub vtk_level: Option<u32>,
    /// Defaults to `solution_<level>.vtk`.
    pub vtk: Option<PathBuf>,
    /// Full per-level report as JSON.
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyConfig {
    pub polygon: PolygonConfig,
    #[serde(default)]
    pub kappa: Option<PerVertex>,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub a: Option<PerVertex>,
    pub f: String,
    pub levels: u32,
    #[serde(default)]
    pub exact: Option<ExactConfig>,
    #[serde(default)]
    pub quad_order: QuadOrder,
    #[serde(default)]
    pub solver: CgOptions,
    #[serde(default)]
    pub outputs: OutputConfig,
}

fn from_json_with_path<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, StudyError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| StudyError::Config {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| StudyError::Config {
        path: ".".into(),
        message: e.to_string(),
    })?;
    Ok(value)
}

fn build_grading(
    polygon: &PolygonDomain,
    input: Option<&GradingInput>,
) -> Result<GradingSpec, StudyError> {
    Ok(match input {
        None => GradingSpec::uniform(polygon),
        Some(GradingInput::Kappa(k)) => match &k.kappa {
            PerVertex::Uniform(v) => GradingSpec::from_uniform_kappa(polygon, *v)?,
            m => GradingSpec::from_kappa(polygon, &m.to_map(polygon))?,
        },
        Some(GradingInput::ThetaA(t)) => make_grading(polygon, t.theta, &t.a.to_map(polygon))?,
    })
}

fn parse_field(field: &str, text: &str) -> Result<Expr, StudyError> {
    parse(text).map_err(|source| StudyError::Expr {
        field: field.into(),
        source,
    })
}

/// Everything a study needs, checked and parsed.
#[derive(Debug, Clone)]
pub struct StudySetup {
    pub polygon: Arc<PolygonDomain>,
    pub grading: GradingSpec,
    pub f: Expr,
    pub exact: Option<ExactSolution>,
    pub levels: u32,
    pub solver: SolverConfig,
}

impl StudyConfig {
    pub fn from_json(text: &str) -> Result<Self, StudyError> {
        from_json_with_path(text)
    }

    pub fn load(path: &Path) -> Result<Self, StudyError> {
        let text = fs::read_to_string(path).map_err(|source| StudyError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn setup(&self) -> Result<StudySetup, StudyError> {
        let top = match (&self.kappa, self.theta, &self.a) {
            (None, None, None) => None,
            (Some(k), None, None) => Some(GradingInput::Kappa(KappaGrading { kappa: k.clone() })),
            (None, Some(theta), Some(a)) => Some(GradingInput::ThetaA(ThetaGrading {
                theta,
                a: a.clone(),
            })),
            (Some(_), _, _) => {
                return Err(StudyError::Invalid(
                    "give either `kappa` or `theta` with `a`, not both".into(),
                ))
            }
            _ => {
                return Err(StudyError::Invalid(
                    "`theta` and `a` must be given together".into(),
                ))
            }
        };
        let (polygon, grading) = match &self.polygon {
            PolygonConfig::Named(name) => {
                let p = PolygonDomain::named(name)?;
                let g = build_grading(&p, top.as_ref())?;
                (p, g)
            }
            PolygonConfig::Vertices(input) => {
                if input.grading.is_some() && top.is_some() {
                    return Err(StudyError::Invalid(
                        "grading given both inside `polygon` and at top level".into(),
                    ));
                }
                let p = PolygonDomain::new(input.vertices.clone())?;
                let g = build_grading(&p, input.grading.as_ref().or(top.as_ref()))?;
                (p, g)
            }
        };
        if self.levels == 0 {
            return Err(StudyError::Invalid("`levels` must be at least 1".into()));
        }
        let out = &self.outputs;
        if let Some(&j) = out.svg_levels.iter().find(|&&j| j > self.levels) {
            return Err(StudyError::Invalid(format!(
                "svg level {j} exceeds `levels` = {}",
                self.levels
            )));
        }
        if let Some(j) = out.vtk_level.filter(|&j| j > self.levels) {
            return Err(StudyError::Invalid(format!(
                "vtk level {j} exceeds `levels` = {}",
                self.levels
            )));
        }
        let exact = match &self.exact {
            Some(e) => Some(ExactSolution {
                u: parse_field("exact.u", &e.u)?,
                du_dx: parse_field("exact.du_dx", &e.du_dx)?,
                du_dy: parse_field("exact.du_dy", &e.du_dy)?,
            }),
            None => None,
        };
        Ok(StudySetup {
            polygon: Arc::new(polygon),
            grading,
            f: parse_field("f", &self.f)?,
            exact,
            levels: self.levels,
            solver: SolverConfig {
                cg: self.solver.clone(),
                quad_order: self.quad_order,
            },
        })
    }
}

/// One row of the study table; errors compare level `j` with level `j − 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRow {
    pub level: u32,
    pub nodes: usize,
    pub triangles: usize,
    pub interior_nodes: usize,
    pub h1_err: f64,
    pub h1_rate: Option<f64>,
    pub l2_err: f64,
    pub l2_rate: Option<f64>,
    pub exact: Option<ErrorNorms>,
    pub exact_h1_rate: Option<f64>,
    pub exact_l2_rate: Option<f64>,
    pub cg_iterations: usize,
    pub relative_residual: f64,
    /// Residual after rounding the solution to binary64.
    pub rounded_relative_residual: f64,
    /// Largest Galerkin residual entry over ‖b‖₂.
    pub galerkin_residual: f64,
    pub load_norm: f64,
    pub min_angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub vertices: Vec<Point>,
    pub singular_vertices: Vec<usize>,
    pub kappa: Vec<f64>,
    pub theta: f64,
    pub expected_h1_rate: f64,
    pub expected_l2_rate: f64,
    pub rows: Vec<LevelRow>,
}

impl StudyReport {
    pub fn h1_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.h1_err).collect()
    }

    pub fn l2_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.l2_err).collect()
    }

    pub fn last(&self) -> &LevelRow {
        self.rows.last().expect("a study has at least one level")
    }

    /// Table with columns `j,nodes,triangles,H1_err,H1_rate,L2_err,L2_rate`,
    /// followed by the exact-error columns when an exact solution was given.
    pub fn to_csv(&self) -> String {
        let with_exact = self.rows.iter().any(|r| r.exact.is_some());
        let mut out = String::from("j,nodes,triangles,H1_err,H1_rate,L2_err,L2_rate");
        if with_exact {
            out.push_str(",H1_exact,H1_exact_rate,L2_exact,L2_exact_rate");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{},{},{},{},{},{},{}",
                r.level,
                r.nodes,
                r.triangles,
                fmt_sci(r.h1_err),
                fmt_rate(r.h1_rate),
                fmt_sci(r.l2_err),
                fmt_rate(r.l2_rate)
            );
            if with_exact {
                let e = r.exact.unwrap_or_default();
                let _ = write!(
                    out,
                    ",{},{},{},{}",
                    fmt_sci(e.h1),
                    fmt_rate(r.exact_h1_rate),
                    fmt_sci(e.l2),
                    fmt_rate(r.exact_l2_rate)
                );
            }
            out.push('\n');
        }
        out
    }
}

/// C-style `%.4e`: `8.2455e-05`.
pub fn fmt_sci(x: f64) -> String {
    let s = format!("{x:.4e}");
    match s.split_once('e') {
        Some((mant, exp)) => {
            let e: i32 = exp.parse().unwrap_or(0);
            format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
        }
        None => s,
    }
}

fn fmt_rate(r: Option<f64>) -> String {
    r.map_or_else(|| "-".into(), |v| format!("{v:.4}"))
}

fn rate(prev: f64, cur: f64) -> Option<f64> {
    convergence_rate(&[prev, cur]).ok().map(|r| r[0])
}

fn solve_level(
    mesh: &Arc<TriMesh>,
    setup: &StudySetup,
    guess: Option<&FeFunction>,
) -> Result<PoissonSolution, SolverError> {
    if mesh.interior_node_count() == 0 {
        return Ok(PoissonSolution {
            u: FeFunction::zero(Arc::clone(mesh)),
            iterations: 0,
            relative_residual: 0.0,
            rounded_relative_residual: 0.0,
            galerkin_residual: 0.0,
            load_norm: 0.0,
        });
    }
    solve_poisson_from(mesh, &setup.f, &setup.solver, guess)
}

/// Runs a study; output paths are resolved against `base_dir`.
pub fn run_study(config: &StudyConfig, base_dir: &Path) -> Result<StudyReport, StudyError> {
    run_study_with(config, base_dir, |_| {})
}

/// As [`run_study`], calling `on_level` as each row completes.
pub fn run_study_with(
    config: &StudyConfig,
    base_dir: &Path,
    mut on_level: impl FnMut(&LevelRow),
) -> Result<StudyReport, StudyError> {
    let setup = config.setup()?;
    let out = &config.outputs;
    let at = |level: u32| move |source: StageError| StudyError::Level { level, source };

    let mut mesh = Arc::new(triangulate_initial(&setup.polygon).map_err(|e| at(0)(e.into()))?);
    let mut u_prev = solve_level(&mesh, &setup, None).map_err(|e| at(0)(e.into()))?.u;
    let mut prev_exact = match &setup.exact {
        Some(ex) => Some(error_vs_exact(&u_prev, ex, QuadOrder::Three).map_err(|e| at(0)(e.into()))?),
        None => None,
    };
    write_level_outputs(out, base_dir, 0, &u_prev).map_err(|e| at(0)(e.into()))?;

    let mut rows: Vec<LevelRow> = Vec::with_capacity(setup.levels as usize);
    for j in 1..=setup.levels {
        let stage = at(j);
        let fine = Arc::new(refine(&mesh, &setup.grading).map_err(|e| stage(e.into()))?);
        let guess = prolongate(&u_prev, &fine).map_err(|e| stage(e.into()))?;
        let sol = solve_level(&fine, &setup, Some(&guess)).map_err(|e| stage(e.into()))?;
        let diff: Vec<f64> = sol
            .u
            .values()
            .iter()
            .zip(guess.values())
            .map(|(a, b)| a - b)
            .collect();
        let err = p1_norms(&fine, &diff).map_err(|e| stage(NormsError::from(e).into()))?;
        drop(guess);
        let exact = match &setup.exact {
            Some(ex) => {
                Some(error_vs_exact(&sol.u, ex, QuadOrder::Three).map_err(|e| stage(e.into()))?)
            }
            None => None,
        };
        let previous = rows.last();
        let row = LevelRow {
            level: j,
            nodes: fine.node_count(),
            triangles: fine.triangle_count(),
            interior_nodes: fine.interior_node_count(),
            h1_err: err.h1,
            h1_rate: previous.and_then(|p| rate(p.h1_err, err.h1)),
            l2_err: err.l2,
            l2_rate: previous.and_then(|p| rate(p.l2_err, err.l2)),
            exact,
            exact_h1_rate: previous
                .and(prev_exact.zip(exact))
                .and_then(|(p, e)| rate(p.h1, e.h1)),
            exact_l2_rate: previous
                .and(prev_exact.zip(exact))
                .and_then(|(p, e)| rate(p.l2, e.l2)),
            cg_iterations: sol.iterations,
            relative_residual: sol.relative_residual,
            rounded_relative_residual: sol.rounded_relative_residual,
            galerkin_residual: sol.galerkin_residual,
            load_norm: sol.load_norm,
            min_angle_deg: fine.min_angle_deg(),
        };
        write_level_outputs(out, base_dir, j, &sol.u).map_err(|e| stage(e.into()))?;
        on_level(&row);
        rows.push(row);
        prev_exact = exact;
        u_prev = sol.u;
        mesh = fine;
    }

    let polygon = &setup.polygon;
    let report = StudyReport {
        vertices: polygon.vertices().to_vec(),
        singular_vertices: polygon.singular_vertices(),
        kappa: setup.grading.kappa().to_vec(),
        theta: setup.grading.theta(polygon),
        expected_h1_rate: setup.grading.expected_h1_rate(polygon),
        expected_l2_rate: setup.grading.expected_l2_rate(polygon),
        rows,
    };
    if let Some(p) = &out.csv {
        write_file(&base_dir.join(p), report.to_csv())?;
    }
    if let Some(p) = &out.report {
        let json = serde_json::to_string_pretty(&report).expect("report serializes");
        write_file(&base_dir.join(p), json + "\n")?;
    }
    Ok(report)
}

fn write_level_outputs(
    out: &OutputConfig,
    base_dir: &Path,
    level: u32,
    u: &FeFunction,
) -> Result<(), ExportError> {
    if out.svg_levels.contains(&level) {
        let prefix = out.svg_prefix.as_deref().unwrap_or("mesh");
        export_svg(u.mesh(), &base_dir.join(format!("{prefix}_{level}.svg")))?;
    }
    if out.vtk_level == Some(level) {
        let path = match &out.vtk {
            Some(p) => base_dir.join(p),
            None => base_dir.join(format!("solution_{level}.vtk")),
        };
        export_vtk(u.mesh(), Some(u), &path)?;
    }
    Ok(())
}
