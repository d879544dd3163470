#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "stark/bracket.hpp"
#include "stark/errors.hpp"
#include "stark/transverse.hpp"

using namespace stark;

namespace {

constexpr double kPi = 3.141592653589793;

WaveguideParams make(double f, double d, double a) {
  WaveguideParams p;
  p.field = f;
  p.width = d;
  p.radius = a;
  return p;
}

// All Bessel zeros x_{m,k} below `limit` from the series oracle, sorted.
std::vector<double> oracle_zeros_below(double limit, int m_max) {
  std::vector<double> out;
  for (int m = 0; m <= m_max; ++m) {
    for (int k = 1;; ++k) {
      const double x = static_cast<double>(oracle::bessel_zero(m, k, limit + 4.0));
      if (!(x < limit)) break;
      out.push_back(x);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("Window at zero field is given by the trig levels") {
  auto w = bracket::window(make(0.0, kPi, 1.0));
  CHECK(w.lower == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.upper == doctest::Approx(1.0).epsilon(1e-12));
  w = bracket::window(make(0.0, 1.0, 1.0));
  CHECK(w.lower == doctest::Approx(kPi * kPi / 4).epsilon(1e-12));
  CHECK(w.upper == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("Window is ordered for every field") {
  for (double f : {0.0, 1e-6, 0.01, 1.0, 100.0, 1e4}) {
    for (double d : {0.5, 1.0, kPi}) {
      const auto w = bracket::window(make(f, d, 1.0));
      CHECK(w.lower > 0.0);
      CHECK(w.lower < w.upper);
    }
  }
}

TEST_CASE("Disc levels below the edge for a wide window") {
  const auto p = make(0.0, kPi, 10.0);
  const double edge = bracket::window(p).upper;
  const auto levels = bracket::dirichlet_disc_levels(p, edge, 10, 64, 1000);
  REQUIRE_FALSE(levels.entries.empty());
  const double x01 = static_cast<double>(oracle::bessel_zero(0, 1));
  CHECK(levels.entries.front().lambda == doctest::Approx(x01 * x01 / 100 + 0.25).epsilon(1e-12));
  CHECK(levels.entries.front().lambda == doctest::Approx(0.307832).epsilon(1e-6));
  CHECK_FALSE(levels.degenerate_window);
  // lambda_inf^2 = 2.25 > 1: only n = 1 can appear.
  CHECK_FALSE(levels.higher_transverse_present);

  // Same set from the zero oracle: (x/10)^2 + 0.25 < 1.
  const auto zeros = oracle_zeros_below(std::sqrt(0.75) * 10.0, 12);
  std::vector<double> expected;
  for (double x : zeros) expected.push_back(x * x / 100 + 0.25);
  REQUIRE(levels.entries.size() == expected.size());
  for (size_t i = 0; i < expected.size(); ++i) {
    CHECK(levels.entries[i].lambda == doctest::Approx(expected[i]).epsilon(1e-10));
    CHECK(levels.entries[i].n == 1);
    CHECK(levels.entries[i].multiplicity == (levels.entries[i].m == 0 ? 1 : 2));
    if (i > 0) CHECK(levels.entries[i - 1].lambda <= levels.entries[i].lambda);
    CHECK(levels.entries[i].lambda > 0.25);
    CHECK(levels.entries[i].lambda < edge);
  }
}

TEST_CASE("Disc levels are empty for a narrow window") {
  const auto p = make(0.0, kPi, 1.0);
  const auto levels = bracket::dirichlet_disc_levels(p, bracket::window(p).upper, 10, 64, 1000);
  CHECK(levels.entries.empty());
}

TEST_CASE("Disc levels include higher transverse levels when the cap allows") {
  const auto p = make(0.0, kPi, 10.0);
  // lambda_inf^2 = 2.25 < 3.
  const auto levels = bracket::dirichlet_disc_levels(p, 3.0, 10, 64, 1000);
  CHECK(levels.higher_transverse_present);
  for (const auto& e : levels.entries) {
    const double x = static_cast<double>(oracle::bessel_zero(e.m, e.k, 40.0));
    const double inf_n = (e.n - 0.5) * (e.n - 0.5);
    CHECK(e.lambda == doctest::Approx(x * x / 100 + inf_n).epsilon(1e-10));
    CHECK(e.lambda > inf_n);
  }
}

TEST_CASE("Disc levels increase in k and in m") {
  const auto p = make(1.0, 1.0, 4.0);
  const auto levels = bracket::dirichlet_disc_levels(p, 60.0, 1, 6, 6);
  auto find = [&](int m, int k) {
    for (const auto& e : levels.entries)
      if (e.m == m && e.k == k) return e.lambda;
    return std::numeric_limits<double>::quiet_NaN();
  };
  for (int m = 0; m <= 2; ++m) {
    for (int k = 1; k <= 2; ++k) {
      CHECK(find(m, k) < find(m, k + 1));
      CHECK(find(m, k) < find(m + 1, k));
    }
  }
}

TEST_CASE("Degenerate window without an inner cylinder") {
  const auto p = make(0.0, kPi, 0.0);
  const auto levels = bracket::dirichlet_disc_levels(p, 1.0, 10, 64, 1000);
  CHECK(levels.degenerate_window);
  CHECK(levels.entries.empty());
}

TEST_CASE("Certified count") {
  CHECK(bracket::count_certified(make(0.0, kPi, 1e-3)) == 0);
  CHECK(bracket::count_certified(make(0.0, kPi, 10.0)) >= 3);
  int previous = 0;
  for (double a = 0.5; a <= 20.0; a += 0.5) {
    const int c = bracket::count_certified(make(0.3, 2.0, a));
    CHECK(c >= previous);
    previous = c;
  }
  // Direct count at F = 0, d = pi, a = 10: zeros below sqrt(0.75) * 10.
  int expected = 0;
  for (int m = 0; m <= 12; ++m) {
    for (int k = 1;; ++k) {
      const double x = static_cast<double>(oracle::bessel_zero(m, k, 14.0));
      if (!(x < std::sqrt(0.75) * 10.0)) break;
      expected += m == 0 ? 1 : 2;
    }
  }
  CHECK(bracket::count_certified(make(0.0, kPi, 10.0)) == expected);
}

TEST_CASE("Sufficient radius") {
  const double x01 = static_cast<double>(oracle::bessel_zero(0, 1));
  const double x11 = static_cast<double>(oracle::bessel_zero(1, 1));
  const auto p = make(0.0, kPi, 1.0);
  CHECK(bracket::sufficient_radius(p, 1) == doctest::Approx(x01 / std::sqrt(0.75)).epsilon(1e-12));
  CHECK(bracket::sufficient_radius(p, 1) == doctest::Approx(2.77685).epsilon(1e-5));
  CHECK(bracket::sufficient_radius(p, 2) == doctest::Approx(x11 / std::sqrt(0.75)).epsilon(1e-12));
  for (int i = 1; i < 6; ++i) CHECK(bracket::sufficient_radius(p, i) < bracket::sufficient_radius(p, i + 1));
  for (double f : {0.01, 1.0, 100.0}) {
    const double a1 = bracket::sufficient_radius(make(f, 1.0, 1.0), 1);
    CHECK(std::isfinite(a1));
    CHECK(a1 > 0.0);
  }
  CHECK_THROWS_AS(bracket::sufficient_radius(p, 0), ValidationError);
}

TEST_CASE("Figure rows") {
  for (double f : {0.01, 100.0}) {
    const auto p = make(f, 1.0, 1.0);
    const auto table = bracket::figure_curves(p, 0.5, 10.0, 200, 3, true);
    const auto w = bracket::window(p);
    CHECK(table.window.lower == w.lower);
    CHECK(table.window.upper == w.upper);
    REQUIRE(table.zeros.size() == 3);
    for (size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      CHECK(row.edge == w.upper);
      REQUIRE(row.curves.size() == 3);
      for (size_t i = 0; i < 3; ++i) {
        CHECK(row.curves[i] > w.lower);
        const double x = table.zeros[i];
        CHECK(row.curves[i] == doctest::Approx(x * x / (row.a * row.a) + w.lower).epsilon(1e-14));
        if (i > 0) CHECK(row.curves[i - 1] <= row.curves[i]);
        if (r > 0) CHECK(row.curves[i] < table.rows[r - 1].curves[i]);
      }
      if (r > 0) CHECK(row.a > table.rows[r - 1].a);
    }
    // Threshold rows: curve_i = edge.
    for (int i = 1; i <= 3; ++i) {
      const double star = bracket::sufficient_radius(p, i);
      if (star < 0.5 || star > 10.0) continue;
      bool found = false;
      for (const auto& row : table.rows) {
        if (row.a == star) {
          found = true;
          CHECK(std::fabs(row.curves[i - 1] - row.edge) <= 1e-10 * row.edge);
        }
      }
      CHECK(found);
    }
  }
}

TEST_CASE("Figure row nearest the threshold is the closest crossing") {
  const auto p = make(0.01, 1.0, 1.0);
  const auto table = bracket::figure_curves(p, 0.5, 10.0, 200, 3);
  CHECK(table.rows.size() == 200);
  const double star = bracket::sufficient_radius(p, 1);
  size_t nearest = 0, closest = 0;
  for (size_t r = 0; r < table.rows.size(); ++r) {
    if (std::fabs(table.rows[r].a - star) < std::fabs(table.rows[nearest].a - star)) nearest = r;
    const auto gap = [&](size_t s) { return std::fabs(table.rows[s].curves[0] - table.rows[s].edge); };
    if (gap(r) < gap(closest)) closest = r;
  }
  CHECK(nearest == closest);
}

TEST_CASE("Parallel figure sweep matches the serial one") {
  const auto p = make(1.0, 1.0, 1.0);
  const auto a = bracket::figure_curves(p, 0.5, 10.0, 500, 5, true);
  const auto b = bracket::figure_curves_serial(p, 0.5, 10.0, 500, 5, true);
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t r = 0; r < a.rows.size(); ++r) {
    CHECK(a.rows[r].a == b.rows[r].a);
    CHECK(a.rows[r].curves == b.rows[r].curves);
    CHECK(a.rows[r].edge == b.rows[r].edge);
  }
}

TEST_CASE("Threshold shrinks as the field grows") {
  // The gap lambda_0^1 - lambda_inf^1 widens with F (like F^{2/3} for strong F).
  double previous = std::numeric_limits<double>::infinity();
  for (double f : {0.01, 1.0, 100.0, 1e4}) {
    const double a1 = bracket::sufficient_radius(make(f, 1.0, 1.0), 1);
    const auto w = bracket::window(make(f, 1.0, 1.0));
    CHECK(a1 == doctest::Approx(static_cast<double>(oracle::bessel_zero(0, 1)) / std::sqrt(w.upper - w.lower))
                    .epsilon(1e-12));
    CHECK(a1 < previous);
    previous = a1;
  }
}

TEST_CASE("Figure validation") {
  const auto p = make(1.0, 1.0, 1.0);
  CHECK_THROWS_AS(bracket::figure_curves(p, 2.0, 1.0, 10, 3), ValidationError);
  CHECK_THROWS_AS(bracket::figure_curves(p, 0.5, 1.0, 1, 3), ValidationError);
  CHECK_THROWS_AS(bracket::figure_curves(p, 0.0, 1.0, 10, 3), ValidationError);
  CHECK_THROWS_AS(bracket::dirichlet_disc_levels(make(1.0, 1.0, -1.0), 1.0, 1, 1, 1), ValidationError);
}
