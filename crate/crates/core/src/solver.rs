//! Jacobi-preconditioned conjugate gradients and the Poisson driver.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::assembly::{assemble_load, assemble_stiffness, AssemblyError, DofMap, FeFunction};
use crate::expr::Expr;
use crate::mesh::TriMesh;
use crate::quadrature::QuadOrder;
use crate::sparse::SparseSpd;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("matrix not positive definite (p^T A p = {curvature:e} at iteration {iteration})")]
    NotPositiveDefinite { iteration: usize, curvature: f64 },
    #[error("Jacobi preconditioner undefined: diagonal entry {row} is {value}")]
    Preconditioner { row: usize, value: f64 },
    #[error("no convergence after {iterations} iterations (relative residual {relative_residual:e})")]
    NotConverged {
        iterations: usize,
        relative_residual: f64,
    },
    #[error("dimension mismatch: matrix {matrix}, vector {vector}")]
    Dimension { matrix: usize, vector: usize },
    #[error("relative tolerance {0} outside (0, 1)")]
    Tolerance(f64),
    #[error("initial guess lives on a different mesh")]
    GuessMesh,
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CgOptions {
    pub rel_tol: f64,
    /// Defaults to `20 √n + 1000`.
    pub max_iter: Option<usize>,
    /// Record `ξᵀAξ − 2bᵀξ` after every iteration.
    #[serde(skip)]
    pub record_energy: bool,
}

impl Default for CgOptions {
    fn default() -> Self {
        CgOptions {
            rel_tol: 1e-12,
            max_iter: None,
            record_energy: false,
        }
    }
}

impl CgOptions {
    pub fn max_iter_for(&self, n: usize) -> usize {
        self.max_iter
            .unwrap_or_else(|| (20.0 * (n as f64).sqrt()) as usize + 1000)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// ‖b − Aξ‖₂ / ‖b‖₂ of the final iterate, recomputed from scratch.
    ///
    /// The iterate is carried as an unevaluated sum of two doubles, so this
    /// can go below the floor `≈ ε ‖A‖ ‖ξ‖ / ‖b‖` that any binary64 vector hits
    /// on large meshes. `x` is that iterate rounded to binary64.
    pub relative_residual: f64,
    /// ‖b − A x‖₂ / ‖b‖₂ for the returned, rounded `x`.
    pub rounded_relative_residual: f64,
    pub energy: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}


/// Solves `A ξ = b` to `‖b − Aξ‖ ≤ rel_tol ‖b‖`, starting from `x0` (or zero).
pub fn cg_solve(
    a: &SparseSpd,
    b: &[f64],
    x0: Option<&[f64]>,
    opts: &CgOptions,
) -> Result<CgOutcome, SolverError> {
    let n = a.dim();
    if b.len() != n {
        return Err(SolverError::Dimension {
            matrix: n,
            vector: b.len(),
        });
    }
    if let Some(x0) = x0 {
        if x0.len() != n {
            return Err(SolverError::Dimension {
                matrix: n,
                vector: x0.len(),
            });
        }
    }
    if !(opts.rel_tol > 0.0 && opts.rel_tol < 1.0) {
        return Err(SolverError::Tolerance(opts.rel_tol));
    }
    let inv_diag = a
        .diagonal()
        .into_iter()
        .enumerate()
        .map(|(row, d)| {
            if d > 0.0 {
                Ok(1.0 / d)
            } else {
                Err(SolverError::Preconditioner { row, value: d })
            }
        })
        .collect::<Result<Vec<f64>, _>>()?;

    let b_norm = dot(b, b).sqrt();
    let mut energy = Vec::new();
    if b_norm == 0.0 {
        return Ok(CgOutcome {
            x: vec![0.0; n],
            iterations: 0,
            relative_residual: 0.0,
            rounded_relative_residual: 0.0,
            energy,
        });
    }
    let target = opts.rel_tol * b_norm;
    let max_iter = opts.max_iter_for(n);

    // iterate x = hi + lo; lo collects the rounding error of each update
    let mut hi = x0.map_or_else(|| vec![0.0; n], <[f64]>::to_vec);
    let mut lo = vec![0.0; n];
    let mut r = vec![0.0; n];
    a.residual_split_into(b, &hi, Some(&lo), &mut r);
    let mut r_norm = dot(&r, &r).sqrt();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; n];
    let mut iterations = 0;

    while r_norm > target {
        if iterations == max_iter {
            return Err(SolverError::NotConverged {
                iterations,
                relative_residual: r_norm / b_norm,
            });
        }
        iterations += 1;
        let curvature = a.mul_vec_dot(&p, &mut ap);
        if !(curvature > 0.0) {
            return Err(SolverError::NotPositiveDefinite {
                iteration: iterations,
                curvature,
            });
        }
        let alpha = rz / curvature;
        let mut rr = 0.0;
        let mut rz_new = 0.0;
        for i in 0..n {
            let d = alpha * p[i];
            let t = hi[i] + d;
            let bp = t - hi[i];
            lo[i] += (hi[i] - (t - bp)) + (d - bp);
            hi[i] = t;
            let ri = r[i] - alpha * ap[i];
            r[i] = ri;
            z[i] = ri * inv_diag[i];
            rr += ri * ri;
            rz_new += ri * z[i];
        }
        r_norm = rr.sqrt();
        if opts.record_energy {
            energy.push(-dot(b, &hi) - dot(&r, &hi));
        }
        if r_norm <= target {
            // confirm against the true residual; restart from it if it drifted
            a.residual_split_into(b, &hi, Some(&lo), &mut r);
            r_norm = dot(&r, &r).sqrt();
            if r_norm <= target {
                break;
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            p.copy_from_slice(&z);
            rz = dot(&r, &z);
            continue;
        }
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }

    let x: Vec<f64> = hi.iter().zip(&lo).map(|(h, l)| h + l).collect();
    a.residual_into(b, &x, &mut r);
    let rounded_relative_residual = dot(&r, &r).sqrt() / b_norm;
    Ok(CgOutcome {
        x,
        iterations,
        relative_residual: r_norm / b_norm,
        rounded_relative_residual,
        energy,
    })
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SolverConfig {
    pub cg: CgOptions,
    /// Quadrature for the load vector.
    pub quad_order: QuadOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoissonSolution {
    pub u: FeFunction,
    pub iterations: usize,
    pub relative_residual: f64,
    pub rounded_relative_residual: f64,
    /// maxᵢ |(∇u_h, ∇φᵢ) − (f, φᵢ)| / ‖b‖₂ over interior nodes.
    pub galerkin_residual: f64,
    pub load_norm: f64,
}

/// Solves `−Δu = f` in the domain with `u = 0` on the boundary.
pub fn solve_poisson(
    mesh: &Arc<TriMesh>,
    f: &Expr,
    config: &SolverConfig,
) -> Result<PoissonSolution, SolverError> {
    solve_poisson_from(mesh, f, config, None)
}

/// As [`solve_poisson`], with an optional starting iterate on the same mesh.
pub fn solve_poisson_from(
    mesh: &Arc<TriMesh>,
    f: &Expr,
    config: &SolverConfig,
    guess: Option<&FeFunction>,
) -> Result<PoissonSolution, SolverError> {
    let (s, dofs) = assemble_stiffness(mesh)?;
    let b = assemble_load(mesh, f, config.quad_order)?;
    let x0 = match guess {
        Some(g) if !Arc::ptr_eq(g.mesh(), mesh) && **g.mesh() != **mesh => {
            return Err(SolverError::GuessMesh)
        }
        Some(g) => Some(dofs.restrict(g.values())),
        None => None,
    };
    let out = cg_solve(&s, &b, x0.as_deref(), &config.cg)?;
    let load_norm = dot(&b, &b).sqrt();
    let galerkin_residual = galerkin_residual(&s, &b, &out.x) / load_norm.max(f64::MIN_POSITIVE);
    let u = FeFunction::new(Arc::clone(mesh), dofs.extend(&out.x))?;
    Ok(PoissonSolution {
        u,
        iterations: out.iterations,
        relative_residual: out.relative_residual,
        rounded_relative_residual: out.rounded_relative_residual,
        galerkin_residual,
        load_norm,
    })
}

/// maxᵢ |(S ξ − b)ᵢ|.
pub fn galerkin_residual(s: &SparseSpd, b: &[f64], x: &[f64]) -> f64 {
    let sx = s.mul_vec(x);
    sx.iter()
        .zip(b)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Interior values of `u` in [`DofMap`] order.
pub fn interior_values(u: &FeFunction) -> Vec<f64> {
    DofMap::new(u.mesh()).restrict(u.values())
}
