#pragma once

// Axisymmetric finite-difference eigensolver for
//
//   -(1/r) d/dr (r d/dr) + m^2/r^2 - d^2/dz^2 + F z
//
// on the cylinder 0 < r < r_max, 0 < z < d. Radial nodes are cell centered,
// r_i = (i + 1/2) h_r, so the axis needs no boundary row. Vertical nodes are
// z_j = j h_z. Dirichlet nodes are eliminated; Neumann rows use a reflected
// ghost value. The stored matrix is the similarity transform W^{1/2} H W^{-1/2}
// with W = diag(r_i h_r h_z w_j), w_0 = 1/2 on Neumann rows at z = 0, which
// is exactly symmetric.

#include <string>
#include <vector>

#include "stark/bracket.hpp"
#include "stark/kernels.hpp"
#include "stark/params.hpp"

namespace stark::fd2d {

struct CylGrid {
  int nr = 64;
  int nz = 64;
  double r_max = 1.0;
  double d = 1.0;

  double h_r() const { return r_max / nr; }
  double h_z() const { return d / nz; }
  double r(int i) const { return (i + 0.5) * h_r(); }
  double z(int j) const { return j * h_z(); }
  void validate() const;
};

enum class WindowKind {
  InnerDirichlet,  // r_max = a, Dirichlet at r = a
  InnerNeumann,    // r_max = a, Neumann at r = a
  TruncatedFull,   // r_max >= 4a, window at z = 0 for r <= a
};

const char* to_string(WindowKind kind);
WindowKind parse_window(const std::string& text);

struct WindowBC {
  WindowKind kind = WindowKind::TruncatedFull;
  int m = 0;
};

struct Operator {
  kernels::CsrMatrix matrix;  // symmetric, scaled
  CylGrid grid;
  WindowBC bc;
  WaveguideParams params;
  std::vector<int> node_i;  // radial index of each unknown
  std::vector<int> node_j;  // vertical index of each unknown

  int dimension() const { return matrix.rows; }
};

enum class InnerSolver {
  Cholesky,  // sparse LDL^T factorization of the shifted operator
  Cg,        // conjugate gradient, symmetric Gauss-Seidel preconditioner
};

struct EigOptions {
  InnerSolver solver = InnerSolver::Cholesky;
  int max_iterations = 400;
  double residual_tol = 1e-8;
  double cg_tol = 1e-13;  // relative residual of each inner solve
  int cg_max_iterations = 20000;
};

struct EigResult {
  std::vector<double> values;     // ascending
  std::vector<double> residuals;  // ||H psi - lambda psi|| / ||psi||, weighted norm
  CylGrid grid;
  WindowBC bc;
  int iterations = 0;
  double shift = 0.0;
  // Filled by the window solvers.
  bracket::SpectralWindow window;
  std::vector<double> error_estimates;  // |lambda_h - lambda_{2h}|
  std::vector<bool> below_edge;         // lambda < lambda_0^1
};

Operator assemble(const WaveguideParams& params, const CylGrid& grid, const WindowBC& bc);

// Number of non-Dirichlet nodes, counted directly from the geometry.
int interior_node_count(const WaveguideParams& params, const CylGrid& grid, const WindowBC& bc);

// k (<= 10) smallest eigenvalues by block shift-invert subspace iteration with
// shift 0.9 lambda_inf^1 and Rayleigh-Ritz on a block of k + 4 vectors. Stops
// once every eigenvalue changes by at most tol (relative) and every residual
// is at most options.residual_tol. Throws ConvergenceError past the cap.
EigResult lowest_eigs(const Operator& op, int k, double tol, const EigOptions& options = {});

// Vertical cells nz; radial cells per window radius, so the truncated problem
// uses nr * r_max / a cells and matches the inner-cylinder grids.
struct GridDensity {
  int nr = 64;
  int nz = 64;
};

// Inner-cylinder problem with r_max = a. Error estimates come from a second
// solve on the grid with halved density.
EigResult inner_cylinder(const WaveguideParams& params, WindowKind kind, const GridDensity& density,
                         int k = 1, int m = 0, const EigOptions& options = {});

// Lowest eigenvalues of the truncated windowed problem (r_max >= 4a), with the
// spectral window, a coarse-grid error estimate and the below-edge flags.
EigResult window_ground_state(const WaveguideParams& params, double r_max,
                              const GridDensity& density, int k = 1, int m = 0,
                              const EigOptions& options = {});

CylGrid matched_grid(const WaveguideParams& params, WindowKind kind, double r_max,
                     const GridDensity& density);

}  // namespace stark::fd2d
