//! Piecewise-linear finite elements for the Dirichlet Poisson problem on
//! polygons, with meshes graded toward reentrant corners.
//!
//! The usual pipeline: build a [`PolygonDomain`], pick a [`GradingSpec`],
//! triangulate with [`triangulate_initial`], refine with [`refine`], solve with
//! [`solve_poisson`], and measure with [`error_between_levels`]. The [`study`]
//! module runs the whole sequence from a JSON configuration.

pub mod assembly;
pub mod export;
pub mod expr;
pub mod geometry;
pub mod mesh;
pub mod norms;
pub mod quadrature;
pub mod refine;
pub mod solver;
pub mod sparse;
pub mod study;

pub use assembly::{assemble_load, assemble_stiffness, AssemblyError, DofMap, FeFunction};
pub use expr::{parse as parse_expr, Expr, ExprError};
pub use geometry::{make_grading, GeometryError, GradingSpec, Point, PolygonDomain};
pub use mesh::{load_mesh, save_mesh, triangulate_initial, MeshError, TriMesh};
pub use norms::{
    convergence_rate, error_between_levels, error_vs_exact, prolongate, ErrorNorms,
    ExactSolution, NormsError,
};
pub use quadrature::QuadOrder;
pub use refine::{refine, refine_n, RefineError};
pub use solver::{solve_poisson, CgOptions, PoissonSolution, SolverConfig, SolverError};
pub use sparse::SparseSpd;
pub use study::{run_study, StudyConfig, StudyError, StudyReport};
