#include "stark/bracket.hpp"

#include <algorithm>
#include <cmath>

#include "stark/errors.hpp"
#include "stark/specfun.hpp"
#include "stark/transverse.hpp"

namespace stark::bracket {
namespace {

constexpr int kMaxTransverse = 100;

FigureRow make_row(const FigureTable& table, double a) {
  FigureRow row{a, {}, table.window.upper};
  row.curves.reserve(table.zeros.size());
  for (double x : table.zeros) {
    const double q = x / a;
    row.curves.push_back(q * q + table.window.lower);
  }
  return row;
}

std::vector<double> sweep_points(const FigureTable& table, double a_min, double a_max, int steps,
                                 bool include_thresholds) {
  std::vector<double> points;
  points.reserve(steps + table.zeros.size());
  for (int j = 0; j < steps; ++j) {
    points.push_back(j + 1 == steps ? a_max : a_min + (a_max - a_min) * j / (steps - 1));
  }
  if (include_thresholds) {
    const double gap = std::sqrt(table.window.upper - table.window.lower);
    for (double x : table.zeros) {
      const double a_star = x / gap;
      if (a_star >= a_min && a_star <= a_max) points.push_back(a_star);
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
  }
  return points;
}

FigureTable prepare(const WaveguideParams& params, double a_min, double a_max, int steps,
                    int i_max) {
  params.validate();
  if (!(a_min > 0.0) || !(a_max > a_min)) throw ValidationError("figure: need 0 < a_min < a_max");
  if (steps < 2) throw ValidationError("figure: steps must be >= 2");
  if (i_max < 1) throw ValidationError("figure: i_max must be >= 1");
  FigureTable table;
  table.window = window(params);
  for (const auto& z : specfun::sorted_bessel_zeros(i_max)) table.zeros.push_back(z.x);
  return table;
}

}  // namespace

SpectralWindow window(const WaveguideParams& params) {
  params.validate();
  return {transverse::level_value(params, BoundaryType::NeumannDirichlet, 1),
          transverse::level_value(params, BoundaryType::DirichletDirichlet, 1)};
}

DiscLevels dirichlet_disc_levels(const WaveguideParams& params, double below, int n_max,
                                 int m_max, int k_max) {
  params.validate();
  if (n_max < 1 || m_max < 0 || k_max < 1) {
    throw ValidationError("dirichlet_disc_levels: caps must be positive");
  }
  if (n_max > kMaxTransverse) throw ValidationError("dirichlet_disc_levels: n_max above 100");
  DiscLevels out;
  if (params.radius == 0.0) {
    out.degenerate_window = true;
    return out;
  }
  const auto trans = transverse::levels(params, BoundaryType::NeumannDirichlet, n_max);
  for (const auto& level : trans) {
    if (level.lambda >= below) break;
    const double limit = params.radius * std::sqrt(below - level.lambda);
    for (int m = 0; m <= m_max && m < limit; ++m) {
      if (specfun::bessel_zero(m, 1) >= limit) break;
      for (int k = 1; k <= k_max; ++k) {
        const double x = specfun::bessel_zero(m, k);
        if (x >= limit) break;
        const double q = x / params.radius;
        out.entries.push_back({level.n, m, k, q * q + level.lambda, m == 0 ? 1 : 2});
        if (level.n >= 2) out.higher_transverse_present = true;
      }
    }
  }
  std::sort(out.entries.begin(), out.entries.end(),
            [](const BracketEstimate& a, const BracketEstimate& b) {
              if (a.lambda != b.lambda) return a.lambda < b.lambda;
              if (a.n != b.n) return a.n < b.n;
              if (a.m != b.m) return a.m < b.m;
              return a.k < b.k;
            });
  return out;
}

int count_certified(const WaveguideParams& params) {
  params.validate();
  if (params.radius == 0.0) return 0;
  const double edge = transverse::level_value(params, BoundaryType::DirichletDirichlet, 1);
  int total = 0;
  for (int n = 1; n <= kMaxTransverse; ++n) {
    const double inf_n = transverse::level_value(params, BoundaryType::NeumannDirichlet, n);
    if (inf_n >= edge) break;
    for (const auto& z : specfun::bessel_zeros_below(params.radius * std::sqrt(edge - inf_n))) {
      total += z.m == 0 ? 1 : 2;
    }
  }
  return total;
}

double sufficient_radius(const WaveguideParams& params, int i) {
  params.validate();
  if (i < 1) throw ValidationError("sufficient_radius: i must be >= 1");
  const auto w = window(params);
  const double x = specfun::sorted_bessel_zeros(i).back().x;
  return x / std::sqrt(w.upper - w.lower);
}

FigureTable figure_curves(const WaveguideParams& params, double a_min, double a_max, int steps,
                          int i_max, bool include_thresholds) {
  FigureTable table = prepare(params, a_min, a_max, steps, i_max);
  const auto points = sweep_points(table, a_min, a_max, steps, include_thresholds);
  table.rows.resize(points.size());
  const long count = static_cast<long>(points.size());
#pragma omp parallel for schedule(static)
  for (long j = 0; j < count; ++j) table.rows[j] = make_row(table, points[j]);
  return table;
}

FigureTable figure_curves_serial(const WaveguideParams& params, double a_min, double a_max,
                                 int steps, int i_max, bool include_thresholds) {
  FigureTable table = prepare(params, a_min, a_max, steps, i_max);
  for (double a : sweep_points(table, a_min, a_max, steps, include_thresholds)) {
    table.rows.push_back(make_row(table, a));
  }
  return table;
}

}  // namespace stark::bracket
