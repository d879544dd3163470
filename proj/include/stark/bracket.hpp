#pragma once

// Analytic localization of the windowed operator's discrete spectrum from the
// inner-cylinder Dirichlet problem: lambda_{n,m,k} = (x_{m,k}/a)^2 + lambda_inf^n.
//
// Transverse indices are 1-based throughout: n = 1 is the ground level of the
// Neumann-Dirichlet operator.

#include <vector>

#include "stark/params.hpp"

namespace stark::bracket {

struct SpectralWindow {
  double lower = 0.0;  // lambda_inf^1
  double upper = 0.0;  // lambda_0^1, bottom of the essential spectrum
};

struct BracketEstimate {
  int n = 1;
  int m = 0;
  int k = 1;
  double lambda = 0.0;
  int multiplicity = 1;  // 2 for m >= 1 (e^{+-i m theta})
};

struct DiscLevels {
  std::vector<BracketEstimate> entries;  // ascending
  bool degenerate_window = false;        // a = 0: no inner cylinder
  bool higher_transverse_present = false;  // some entry has n >= 2
};

SpectralWindow window(const WaveguideParams& params);

// Every lambda_{n,m,k} < below with n <= n_max, m <= m_max, k <= k_max.
// These are upper bounds for the eigenvalues of the windowed operator.
DiscLevels dirichlet_disc_levels(const WaveguideParams& params, double below, int n_max,
                                 int m_max, int k_max);

// Number of lambda_{n,m,k} (with multiplicity) strictly below lambda_0^1.
int count_certified(const WaveguideParams& params);

// Radius a*_i = x(i) / sqrt(lambda_0^1 - lambda_inf^1), x(i) the i-th positive
// Bessel zero over all orders in increasing order.
double sufficient_radius(const WaveguideParams& params, int i);

struct FigureRow {
  double a;
  std::vector<double> curves;  // curve_i = (x(i)/a)^2 + lambda_inf^1
  double edge;                 // lambda_0^1
};

struct FigureTable {
  SpectralWindow window;
  std::vector<double> zeros;  // x(1) .. x(i_max)
  std::vector<FigureRow> rows;
};

// Rows on a uniform sweep a_min .. a_max (steps >= 2 points). With
// include_thresholds, rows at every a*_i inside the range are merged in.
FigureTable figure_curves(const WaveguideParams& params, double a_min, double a_max, int steps,
                          int i_max, bool include_thresholds = false);

// Same rows evaluated one at a time; reference for the parallel sweep.
FigureTable figure_curves_serial(const WaveguideParams& params, double a_min, double a_max,
                                 int steps, int i_max, bool include_thresholds = false);

}  // namespace stark::bracket
