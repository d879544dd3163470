#pragma once

// Variational bound-state certificate. The trial function
//
//   Phi(r, z) = cutoff_tau(r) * [chi_1(z) + eps * bump(r)^2]
//
// gives Q[Phi] = Q_r[Phi] - lambda_0^1 ||Phi||^2 = A tau + B eps^2 - C eps with
// C > 0, so a small eps followed by a smaller tau makes Q negative, which
// proves an eigenvalue below the essential spectrum.
//
// bump(r)   = exp(-1 / (1 - ((2r - a)/a)^2)) on (0, a), zero elsewhere.
// cutoff(s) = 1 on [0, b], 1 - S(s - b) on [b, b + 1], 0 beyond, with the
//             quintic smoothstep S(t) = 6t^5 - 15t^4 + 10t^3.
// cutoff_tau(r) = cutoff(b + tau ln(r / b)) for r >= b, 1 below b.

#include <string>

#include "stark/bracket.hpp"
#include "stark/params.hpp"

namespace stark::certify {

struct TrialSpec {
  double plateau = 0.0;  // b > a
  double tau = 0.0;      // > 0
  double eps = 0.0;      // >= 0
  // Fixed profile families; kept as text so certificates are self-describing.
  std::string bump = "exp(-1/(1-((2r-a)/a)^2)) on (0,a)";
  std::string cutoff = "1 on [0,b]; 1-smoothstep5(s-b) on [b,b+1]; s=b+tau*ln(r/b)";

  void validate(const WaveguideParams& params) const;
};

struct Coefficients {
  double a = 0.0;  // tau coefficient, 2 pi ||cutoff'||^2_{L2(ds)}
  double b = 0.0;  // eps^2 coefficient
  double c = 0.0;  // -eps coefficient, > 0
};

struct Certificate {
  TrialSpec spec;
  double q_value = 0.0;
  Coefficients coeffs;
  bracket::SpectralWindow window;
  int shrink_steps = 0;
  bool valid() const { return q_value < 0.0; }
};

// Profile functions, exposed for tests.
double bump(double r, double a);
double bump_derivative(double r, double a);
double cutoff(double s, double b);
double cutoff_derivative(double s, double b);
double cutoff_tau(double r, double b, double tau);
double cutoff_tau_derivative(double r, double b, double tau);

// ||cutoff'||^2 in L2(ds); equals 10/7 for the quintic smoothstep.
double cutoff_energy();

// Q[Phi] by nested two-dimensional quadrature. The chi_1-only part of the
// integrand vanishes identically (||chi_1|| = 1, chi_1'' = (Fz - lambda) chi_1)
// and is dropped; the tail r >= b is integrated in the substituted variable s.
double q_functional(const WaveguideParams& params, const TrialSpec& spec);

// A, B, C from one-dimensional profile integrals and closed-form z integrals.
Coefficients coefficients(const WaveguideParams& params, const TrialSpec& spec);

// Builds (b, tau, eps) with Q < 0. Throws SolverError if 40 halvings fail.
Certificate certify(const WaveguideParams& params);

}  // namespace stark::certify
