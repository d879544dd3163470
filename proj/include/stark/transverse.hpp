#pragma once

// One-dimensional Stark operators h(F) = -d^2/dz^2 + F z on [0, d] with
// Dirichlet-Dirichlet (closed layer) or Neumann-Dirichlet (fully open
// window) boundary conditions.

#include <vector>

#include "stark/params.hpp"

namespace stark::transverse {

// Basis used for the eigenfunction coefficients. Airy: u = Ai(F^{1/3}(z - lambda/F)),
// v = Bi(same). Trig (F below the small-field cutoff): u = sin(sqrt(lambda) z),
// v = cos(sqrt(lambda) z). Local (weak field, where Airy phases at large
// negative argument lose digits): u, v solve chi'' = (F z - lambda) chi with
// u = 1, u' = 0, v = 0, v' = 1 at z = d/2, propagated by Taylor steps.
enum class Basis { Airy, Trig, Local };

struct TransverseLevel {
  int n = 1;  // 1-based, increasing lambda
  BoundaryType bc = BoundaryType::DirichletDirichlet;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Basis basis = Basis::Airy;
};

// Value and z-derivative of chi(z) = alpha u(z) + beta v(z).
struct ChiValue {
  double value;
  double derivative;
};

// True when F d^3 is small enough that the trigonometric spectrum is used.
bool uses_trig_limit(const WaveguideParams& params);

// Basis chosen for these parameters; fixed across all levels.
Basis basis_for(const WaveguideParams& params);

// First `count` (<= 100) eigenpairs, roots of the Airy determinant located to
// 1e-10 relative. Normalized so that ||chi||_{L2[0,d]} = 1 and chi(d/2) > 0
// for the ground state; for n > 1 the sign makes chi'(0) > 0 (Dirichlet) or
// chi(0) > 0 (Neumann).
std::vector<TransverseLevel> levels(const WaveguideParams& params, BoundaryType bc, int count);

// Convenience: the n-th eigenvalue only.
double level_value(const WaveguideParams& params, BoundaryType bc, int n);

ChiValue chi(const TransverseLevel& level, const WaveguideParams& params, double z);

// chi''(z) = (F z - lambda) chi(z), from the differential equation.
double chi1_second_derivative(const TransverseLevel& level, const WaveguideParams& params,
                              double z);

// Determinant whose zeros are the eigenvalues, as sign * e^{exponent} * mantissa.
struct ScaledDeterminant {
  double mantissa;
  double exponent;
};
ScaledDeterminant determinant(const WaveguideParams& params, BoundaryType bc, double lambda);

// Eigenvalues of the second-order central-difference discretization with
// `nodes` unknowns (Neumann via a ghost node), by Sturm-sequence bisection.
std::vector<double> fd_levels_oracle(const WaveguideParams& params, BoundaryType bc, int count,
                                     int nodes);

// Weak-field formulas in their published form. `n` is 1-based; for the
// Neumann-Dirichlet case the published 0-based index is n - 1.
double asymptotic_weak(const WaveguideParams& params, BoundaryType bc, int n);

struct StrongFieldEstimate {
  double published;  // [3 F pi / 2 (2n - 1/4)]^{2/3} or [3 F pi / 2 (2n + 3/4)]^{2/3}
  double airy_zero;         // |a_n| F^{2/3} (Dirichlet) or |a'_n| F^{2/3} (Neumann)
};

// Throws DomainError for F = 0.
StrongFieldEstimate asymptotic_strong(const WaveguideParams& params, BoundaryType bc, int n);

}  // namespace stark::transverse
