/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef GRADED_FEM_H
#define GRADED_FEM_H



#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Result code of every fallible call.
typedef enum FemStatus {
  FEM_STATUS_OK = 0,
  FEM_STATUS_NULL_POINTER = 1,
  FEM_STATUS_INVALID_ARGUMENT = 2,
  FEM_STATUS_GEOMETRY = 3,
  FEM_STATUS_MESH = 4,
  FEM_STATUS_REFINE = 5,
  FEM_STATUS_EXPRESSION = 6,
  FEM_STATUS_SOLVER = 7,
  FEM_STATUS_NORMS = 8,
  FEM_STATUS_IO = 9,
  FEM_STATUS_CONFIG = 10,
  FEM_STATUS_PANIC = 99,
} FemStatus;

// A polygon with its grading parameters.
typedef struct FemDomain FemDomain;

// A triangulation, possibly carrying refinement history.
typedef struct FemMesh FemMesh;

// A discrete solution with solver statistics.
typedef struct FemSolution FemSolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next `fem_*` call on the same thread.
const char *fem_last_error(void);

// Static description of a status code.
const char *fem_status_name(enum FemStatus status);

// Frees a string returned by this library.
//
// # Safety
// `s` must be null or a string returned by this library, not yet freed.
void fem_string_free(char *s);

// Built-in domain (`square`, `triangle`, `lshape`, `octagon`, `plus`) with κ = 1/2.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be writable.
enum FemStatus fem_domain_named(const char *name, struct FemDomain **out);

// Domain from `{"vertices": [[x, y], ...], "grading": ...}`.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum FemStatus fem_domain_from_json(const char *json, struct FemDomain **out);

// Domain from `count` counter-clockwise vertices stored as `x0, y0, x1, y1, ...`.
//
// # Safety
// `xy` must point to `2 * count` readable doubles; `out` must be writable.
enum FemStatus fem_domain_from_vertices(const double *xy, size_t count, struct FemDomain **out);

// Sets the same κ at every singular vertex.
//
// # Safety
// `domain` must be a live handle.
enum FemStatus fem_domain_set_kappa(struct FemDomain *domain, double kappa);

// Sets κ at one vertex, keeping the others.
//
// # Safety
// `domain` must be a live handle.
enum FemStatus fem_domain_set_vertex_kappa(struct FemDomain *domain, size_t vertex, double kappa);

// Grades with κᵢ = 2^(−θ/a) at every singular vertex.
//
// # Safety
// `domain` must be a live handle.
enum FemStatus fem_domain_set_theta(struct FemDomain *domain, double theta, double a);

// # Safety
// `domain` must be a live handle; `out` must be writable.
enum FemStatus fem_domain_vertex_count(const struct FemDomain *domain, size_t *out);

// Interior angle, singularity flag and κ of one vertex.
//
// # Safety
// `domain` must be a live handle; the outputs must be writable.
enum FemStatus fem_domain_vertex(const struct FemDomain *domain,
                                 size_t vertex,
                                 double *angle,
                                 bool *singular,
                                 double *kappa);

// Expected H¹ and L² rates for the current grading.
//
// # Safety
// `domain` must be a live handle; the outputs must be writable.
enum FemStatus fem_domain_expected_rates(const struct FemDomain *domain, double *h1, double *l2);

// # Safety
// `domain` must be null or a live handle, freed at most once.
void fem_domain_free(struct FemDomain *domain);

// Initial triangulation of the domain.
//
// # Safety
// `domain` must be a live handle; `out` must be writable.
enum FemStatus fem_mesh_initial(const struct FemDomain *domain, struct FemMesh **out);

// Applies `levels` graded refinements using the domain's κ values.
//
// # Safety
// `domain` and `mesh` must be live handles; `out` must be writable.
enum FemStatus fem_mesh_refine(const struct FemDomain *domain,
                               const struct FemMesh *mesh,
                               uint32_t levels,
                               struct FemMesh **out);

// Node count, triangle count and refinement level.
//
// # Safety
// `mesh` must be a live handle; each output may be null to skip it.
enum FemStatus fem_mesh_sizes(const struct FemMesh *mesh,
                              size_t *nodes,
                              size_t *triangles,
                              uint32_t *level);

// Copies node coordinates as `x0, y0, x1, y1, ...` into `xy` (length `len`).
//
// # Safety
// `mesh` must be a live handle; `xy` must hold `len` writable doubles.
enum FemStatus fem_mesh_nodes(const struct FemMesh *mesh, double *xy, size_t len);

// Copies triangle corner indices, three per triangle, into `tri` (length `len`).
//
// # Safety
// `mesh` must be a live handle; `tri` must hold `len` writable entries.
enum FemStatus fem_mesh_triangles(const struct FemMesh *mesh, size_t *tri, size_t len);

// Copies boundary flags (1 on the boundary, 0 inside) into `flags`.
//
// # Safety
// `mesh` must be a live handle; `flags` must hold `len` writable bytes.
enum FemStatus fem_mesh_boundary_flags(const struct FemMesh *mesh, uint8_t *flags, size_t len);

// Runs the conformity checks. A non-conforming mesh gives `FEM_STATUS_MESH`
// with the violations in `fem_last_error()`.
//
// # Safety
// `mesh` must be a live handle.
enum FemStatus fem_mesh_validate(const struct FemMesh *mesh);

// Reads a mesh in the plain-text format. Loaded meshes carry no domain, so
// they cannot be refined.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
enum FemStatus fem_mesh_load(const char *path, struct FemMesh **out);

// # Safety
// `mesh` must be a live handle; `path` must be a NUL-terminated string.
enum FemStatus fem_mesh_save(const struct FemMesh *mesh, const char *path);

// # Safety
// `mesh` must be a live handle; `path` must be a NUL-terminated string.
enum FemStatus fem_mesh_export_svg(const struct FemMesh *mesh, const char *path);

// # Safety
// `mesh` must be null or a live handle, freed at most once.
void fem_mesh_free(struct FemMesh *mesh);

// Solves −Δu = f with u = 0 on the boundary. `quad_order` is 1, 2 or 3;
// `rel_tol` ≤ 0 selects the default 1e-12.
//
// # Safety
// `mesh` must be a live handle; `f` must be a NUL-terminated string; `out`
// must be writable.
enum FemStatus fem_solve(const struct FemMesh *mesh,
                         const char *f,
                         uint8_t quad_order,
                         double rel_tol,
                         struct FemSolution **out);

// Copies nodal values into `values` (length `len` ≥ node count).
//
// # Safety
// `solution` must be a live handle; `values` must hold `len` writable doubles.
enum FemStatus fem_solution_values(const struct FemSolution *solution, double *values, size_t len);

// Node count, CG iterations, relative residual and scaled Galerkin residual.
//
// # Safety
// `solution` must be a live handle; each output may be null to skip it.
enum FemStatus fem_solution_stats(const struct FemSolution *solution,
                                  size_t *nodes,
                                  size_t *iterations,
                                  double *relative_residual,
                                  double *galerkin_residual);

// # Safety
// `solution` must be a live handle; `path` must be a NUL-terminated string.
enum FemStatus fem_solution_export_vtk(const struct FemSolution *solution, const char *path);

// H¹ seminorm and L² norm of `fine − coarse`, where `fine` lives on a
// refinement of the mesh of `coarse`.
//
// # Safety
// Both solutions must be live handles; the outputs must be writable.
enum FemStatus fem_error_between_levels(const struct FemSolution *fine,
                                        const struct FemSolution *coarse,
                                        double *h1,
                                        double *l2);

// Writes the `count − 1` rates `log₂(eⱼ / eⱼ₊₁)` to `rates`.
//
// # Safety
// `errors` must hold `count` doubles and `rates` `count − 1` writable doubles.
enum FemStatus fem_convergence_rate(const double *errors, size_t count, double *rates);

// Runs the study described by the JSON file at `config_path` and returns
// its CSV table in `csv_out` (free with `fem_string_free`).
//
// # Safety
// `config_path` must be a NUL-terminated string; `csv_out` must be writable.
enum FemStatus fem_run_study(const char *config_path, char **csv_out);

// # Safety
// `solution` must be null or a live handle, freed at most once.
void fem_solution_free(struct FemSolution *solution);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GRADED_FEM_H */
