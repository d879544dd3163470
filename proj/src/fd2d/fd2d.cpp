#include "stark/fd2d.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "stark/errors.hpp"
#include "stark/transverse.hpp"

namespace stark::fd2d {
namespace {

constexpr double kGeomTol = 1e-12;
constexpr int kMaxEigs = 10;
constexpr int kGuardVectors = 4;
constexpr int kMaxAngularOrder = 64;

bool z0_is_neumann(const CylGrid& grid, WindowKind kind, double a, int i) {
  if (kind != WindowKind::TruncatedFull) return true;
  return grid.r(i) <= a;
}

void check_inputs(const WaveguideParams& params, const CylGrid& grid, const WindowBC& bc) {
  params.validate();
  grid.validate();
  if (std::fabs(grid.d - params.width) > kGeomTol * params.width) {
    throw ValidationError("fd2d: grid height differs from the layer width");
  }
  if (bc.m < 0 || bc.m > kMaxAngularOrder) throw ValidationError("fd2d: angular order outside [0, 64]");
  if (!(params.radius > 0.0)) throw ValidationError("fd2d: window radius must be positive");
  if (bc.kind == WindowKind::TruncatedFull) {
    if (grid.r_max < 4.0 * params.radius * (1.0 - kGeomTol)) {
      throw ValidationError("fd2d: truncated problem needs r_max >= 4a");
    }
  } else if (std::fabs(grid.r_max - params.radius) > kGeomTol * params.radius) {
    throw ValidationError("fd2d: inner-cylinder problems need r_max = a");
  }
}

// Dense n x p block with orthonormal columns spanning y.
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

void apply(const kernels::CsrMatrix& a, const Eigen::MatrixXd& x, Eigen::MatrixXd& y) {
  y.resize(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    kernels::spmv(a, {x.col(c).data(), static_cast<std::size_t>(x.rows())},
                  {y.col(c).data(), static_cast<std::size_t>(y.rows())});
  }
}

// Solves (A - sigma I) x = b for a block of right-hand sides.
class ShiftedSolver {
 public:
  ShiftedSolver(const kernels::CsrMatrix& a, double sigma, const EigOptions& options)
      : options_(options), shifted_(a) {
    for (int i = 0; i < a.rows; ++i) {
      for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
        if (a.col[p] == i) shifted_.val[p] -= sigma;
      }
    }
    diag_.resize(a.rows);
    for (int i = 0; i < a.rows; ++i) diag_[i] = shifted_.diagonal(i);
    if (options.solver == InnerSolver::Cholesky) factorize();
  }

  // x holds the warm start on entry (used by CG only).
  void solve(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    if (options_.solver == InnerSolver::Cholesky) {
      x = ldlt_.solve(b);
      return;
    }
    cg(b, x);
  }

 private:
  void factorize() {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(shifted_.nnz());
    for (int i = 0; i < shifted_.rows; ++i) {
      for (int p = shifted_.row_ptr[i]; p < shifted_.row_ptr[i + 1]; ++p) {
        trip.emplace_back(i, shifted_.col[p], shifted_.val[p]);
      }
    }
    Eigen::SparseMatrix<double> m(shifted_.rows, shifted_.rows);
    m.setFromTriplets(trip.begin(), trip.end());
    ldlt_.compute(m);
    if (ldlt_.info() != Eigen::Success) throw SolverError("fd2d: sparse factorization failed");
    for (Eigen::Index i = 0; i < ldlt_.vectorD().size(); ++i) {
      if (!(ldlt_.vectorD()[i] > 0.0)) {
        throw SolverError("fd2d: shifted operator is not positive definite");
      }
    }
  }

  // z = M^{-1} r with M = (D + L) D^{-1} (D + U).
  void precondition(const std::vector<double>& r, std::vector<double>& z) const {
    const auto& a = shifted_;
    const int n = a.rows;
    for (int i = 0; i < n; ++i) {
      double s = r[i];
      for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1] && a.col[p] < i; ++p) s -= a.val[p] * z[a.col[p]];
      z[i] = s / diag_[i];
    }
    for (int i = 0; i < n; ++i) z[i] *= diag_[i];
    for (int i = n - 1; i >= 0; --i) {
      double s = z[i];
      for (int p = a.row_ptr[i + 1] - 1; p >= a.row_ptr[i] && a.col[p] > i; --p) s -= a.val[p] * z[a.col[p]];
      z[i] = s / diag_[i];
    }
  }

  void cg(const Eigen::VectorXd& b, Eigen::VectorXd& x) const {
    const std::size_t n = b.size();
    std::vector<double> r(n), z(n), p(n), q(n);
    std::span<const double> bs(b.data(), n);
    std::span<double> xs(x.data(), n);
    kernels::spmv(shifted_, xs, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double bnorm = std::sqrt(kernels::dot(bs, bs));
    if (bnorm == 0.0) {
      x.setZero();
      return;
    }
    precondition(r, z);
    p = z;
    double rz = kernels::dot(r, z);
    for (int it = 0; it < options_.cg_max_iterations; ++it) {
      if (std::sqrt(kernels::dot(r, r)) <= options_.cg_tol * bnorm) return;
      kernels::spmv(shifted_, p, q);
      const double alpha = rz / kernels::dot(p, q);
      kernels::axpy(alpha, p, xs);
      kernels::axpy(-alpha, q, r);
      precondition(r, z);
      const double rz_next = kernels::dot(r, z);
      const double beta = rz_next / rz;
      rz = rz_next;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    throw ConvergenceError("fd2d: conjugate gradient did not converge", 0.0,
                           std::sqrt(kernels::dot(r, r)) / bnorm);
  }

  EigOptions options_;
  kernels::CsrMatrix shifted_;
  std::vector<double> diag_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

GridDensity coarsen(const GridDensity& g) { return {std::max(8, g.nr / 2), std::max(8, g.nz / 2)}; }

}  // namespace

void CylGrid::validate() const {
  if (nr < 8 || nz < 8) throw ValidationError("fd2d: grid needs nr >= 8 and nz >= 8");
  if (!(r_max > 0.0) || !(d > 0.0)) throw ValidationError("fd2d: grid extents must be positive");
}

const char* to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::InnerDirichlet: return "inner-dirichlet";
    case WindowKind::InnerNeumann: return "inner-neumann";
    case WindowKind::TruncatedFull: return "truncated-full";
  }
  return "?";
}

WindowKind parse_window(const std::string& text) {
  if (text == "inner-dirichlet" || text == "InnerDirichlet") return WindowKind::InnerDirichlet;
  if (text == "inner-neumann" || text == "InnerNeumann") return WindowKind::InnerNeumann;
  if (text == "truncated-full" || text == "full" || text == "TruncatedFull") {
    return WindowKind::TruncatedFull;
  }
  throw ValidationError("unknown window kind '" + text + "'");
}

int interior_node_count(const WaveguideParams& params, const CylGrid& grid, const WindowBC& bc) {
  int count = 0;
  for (int i = 0; i < grid.nr; ++i) {
    count += grid.nz - 1;  // 0 < z_j < d
    if (z0_is_neumann(grid, bc.kind, params.radius, i)) ++count;
  }
  return count;
}

Operator assemble(const WaveguideParams& params, const CylGrid& grid, const WindowBC& bc) {
  check_inputs(params, grid, bc);
  Operator op{{}, grid, bc, params, {}, {}};
  const int nr = grid.nr, nz = grid.nz;
  const double hr = grid.h_r(), hz = grid.h_z();
  const double ihr2 = 1.0 / (hr * hr), ihz2 = 1.0 / (hz * hz);
  const double a = params.radius, f = params.field;
  const bool outer_dirichlet = bc.kind != WindowKind::InnerNeumann;

  // Unknown index of node (i, j); -1 for eliminated Dirichlet nodes.
  std::vector<int> index(static_cast<std::size_t>(nr) * nz, -1);
  auto at = [&](int i, int j) -> int& { return index[static_cast<std::size_t>(i) * nz + j]; };
  for (int i = 0; i < nr; ++i) {
    for (int j = 0; j < nz; ++j) {
      if (j == 0 && !z0_is_neumann(grid, bc.kind, a, i)) continue;
      at(i, j) = static_cast<int>(op.node_i.size());
      op.node_i.push_back(i);
      op.node_j.push_back(j);
    }
  }
  const int n = static_cast<int>(op.node_i.size());
  auto& mat = op.matrix;
  mat.rows = n;
  mat.row_ptr.assign(n + 1, 0);
  mat.col.reserve(static_cast<std::size_t>(n) * 5);
  mat.val.reserve(static_cast<std::size_t>(n) * 5);

  const double m2 = static_cast<double>(bc.m) * bc.m;
  for (int row = 0; row < n; ++row) {
    const int i = op.node_i[row], j = op.node_j[row];
    const double ri = grid.r(i);
    const double r_in = i * hr, r_out = (i + 1) * hr;
    // Couplings are computed by the symmetric formula from the lower index so
    // that (p, q) and (q, p) hold bit-identical values.
    auto radial = [&](int lo) { return -(lo + 1) * hr * ihr2 / std::sqrt(grid.r(lo) * grid.r(lo + 1)); };
    auto vertical = [&](int lo) { return lo == 0 ? -std::sqrt(2.0) * ihz2 : -ihz2; };

    double diag = 0.0;
    diag += r_in * ihr2 / ri;
    if (i + 1 < nr || outer_dirichlet) diag += (i + 1 < nr ? 1.0 : 2.0) * r_out * ihr2 / ri;
    diag += m2 / (ri * ri);
    diag += 2.0 * ihz2 + f * grid.z(j);

    std::vector<std::pair<int, double>> entries;
    entries.reserve(5);
    if (i > 0 && at(i - 1, j) >= 0) entries.emplace_back(at(i - 1, j), radial(i - 1));
    if (j > 0 && at(i, j - 1) >= 0) entries.emplace_back(at(i, j - 1), vertical(j - 1));
    entries.emplace_back(row, diag);
    if (j + 1 < nz && at(i, j + 1) >= 0) entries.emplace_back(at(i, j + 1), vertical(j));
    if (i + 1 < nr && at(i + 1, j) >= 0) entries.emplace_back(at(i + 1, j), radial(i));
    std::sort(entries.begin(), entries.end());
    for (const auto& [c, v] : entries) {
      mat.col.push_back(c);
      mat.val.push_back(v);
    }
    mat.row_ptr[row + 1] = static_cast<int>(mat.col.size());
  }
  return op;
}

EigResult lowest_eigs(const Operator& op, int k, double tol, const EigOptions& options) {
  const int n = op.dimension();
  if (k < 1 || k > kMaxEigs) throw ValidationError("lowest_eigs: k must be in [1, 10]");
  if (k > n) throw ValidationError("lowest_eigs: k exceeds the operator dimension");
  if (!(tol > 0.0)) throw ValidationError("lowest_eigs: tol must be positive");

  EigResult result;
  result.grid = op.grid;
  result.bc = op.bc;
  result.shift = 0.9 * transverse::level_value(op.params, BoundaryType::NeumannDirichlet, 1);
  const ShiftedSolver solver(op.matrix, result.shift, options);

  const int p = std::min(k + kGuardVectors, n);
  std::mt19937_64 rng(20240607);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (Eigen::Index c = 0; c < p; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) x(r, c) = uni(rng);
  }
  x = orthonormalize(x);
  Eigen::VectorXd theta = Eigen::VectorXd::Constant(p, result.shift + 1.0);
  Eigen::VectorXd prev = Eigen::VectorXd::Constant(p, std::numeric_limits<double>::infinity());
  Eigen::MatrixXd y(n, p), sq, sx;
  Eigen::VectorXd res(p);

  for (int it = 1; it <= options.max_iterations; ++it) {
    for (Eigen::Index c = 0; c < p; ++c) {
      Eigen::VectorXd col = x.col(c) / std::max(theta[c] - result.shift, 1e-12);
      solver.solve(x.col(c), col);
      y.col(c) = col;
    }
    const Eigen::MatrixXd q = orthonormalize(y);
    apply(op.matrix, q, sq);
    Eigen::MatrixXd t = q.transpose() * sq;
    t = 0.5 * (t + t.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    theta = es.eigenvalues();
    x = q * es.eigenvectors();
    sx = sq * es.eigenvectors();
    bool done = true;
    for (int c = 0; c < p; ++c) {
      res[c] = (sx.col(c) - theta[c] * x.col(c)).norm() / x.col(c).norm();
      if (c < k) {
        done = done && std::fabs(theta[c] - prev[c]) <= tol * std::max(1.0, std::fabs(theta[c])) &&
               res[c] <= options.residual_tol;
      }
    }
    prev = theta;
    result.iterations = it;
    if (done) {
      for (int c = 0; c < k; ++c) {
        result.values.push_back(theta[c]);
        result.residuals.push_back(res[c]);
      }
      return result;
    }
  }
  throw ConvergenceError("lowest_eigs: no convergence after " + std::to_string(options.max_iterations) +
                             " iterations",
                         theta[0], res[0]);
}

CylGrid matched_grid(const WaveguideParams& params, WindowKind kind, double r_max,
                     const GridDensity& density) {
  params.validate();
  if (!(params.radius > 0.0)) throw ValidationError("fd2d: window radius must be positive");
  CylGrid grid;
  grid.nz = density.nz;
  grid.d = params.width;
  if (kind == WindowKind::TruncatedFull) {
    if (!(r_max >= 4.0 * params.radius * (1.0 - kGeomTol))) {
      throw ValidationError("fd2d: truncated problem needs r_max >= 4a");
    }
    grid.r_max = r_max;
    grid.nr = static_cast<int>(std::lround(density.nr * r_max / params.radius));
  } else {
    grid.r_max = params.radius;
    grid.nr = density.nr;
  }
  grid.validate();
  return grid;
}

namespace {

EigResult solve_with_estimate(const WaveguideParams& params, WindowKind kind, double r_max,
                              const GridDensity& density, int k, int m, const EigOptions& options) {
  constexpr double kTol = 1e-12;
  const WindowBC bc{kind, m};
  const auto fine_op = assemble(params, matched_grid(params, kind, r_max, density), bc);
  EigResult fine = lowest_eigs(fine_op, k, kTol, options);
  const auto coarse_op = assemble(params, matched_grid(params, kind, r_max, coarsen(density)), bc);
  const EigResult coarse = lowest_eigs(coarse_op, k, kTol, options);
  fine.window = bracket::window(params);
  for (int c = 0; c < k; ++c) {
    fine.error_estimates.push_back(std::fabs(fine.values[c] - coarse.values[c]));
    fine.below_edge.push_back(fine.values[c] < fine.window.upper);
  }
  return fine;
}

}  // namespace

EigResult inner_cylinder(const WaveguideParams& params, WindowKind kind, const GridDensity& density,
                         int k, int m, const EigOptions& options) {
  if (kind == WindowKind::TruncatedFull) throw ValidationError("inner_cylinder: not an inner problem");
  return solve_with_estimate(params, kind, params.radius, density, k, m, options);
}

EigResult window_ground_state(const WaveguideParams& params, double r_max,
                              const GridDensity& density, int k, int m, const EigOptions& options) {
  return solve_with_estimate(params, WindowKind::TruncatedFull, r_max, density, k, m, options);
}

}  // namespace stark::fd2d
