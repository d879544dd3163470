#include <doctest.h>
#include <omp.h>

#include <cmath>
#include <random>
#include <vector>

#include "stark/kernels.hpp"

using stark::kernels::CsrMatrix;
namespace kernels = stark::kernels;

namespace {

// Random symmetric banded matrix with `n` rows.
CsrMatrix random_symmetric(int n, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::vector<double>> upper(n, std::vector<double>(band + 1));
  for (auto& row : upper)
    for (auto& v : row) v = dist(rng);
  CsrMatrix a;
  a.rows = n;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - band); j <= std::min(n - 1, i + band); ++j) {
      a.col.push_back(j);
      a.val.push_back(j >= i ? upper[i][j - i] : upper[j][i - j]);
    }
    a.row_ptr.push_back(static_cast<int>(a.col.size()));
  }
  return a;
}

std::vector<double> random_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

}  // namespace

TEST_CASE("Entry lookup") {
  const auto a = random_symmetric(5, 1, 1);
  CHECK(a.nnz() == 13);
  CHECK(a.at(0, 4) == 0.0);
  CHECK(a.at(1, 2) == a.at(2, 1));
  CHECK(a.diagonal(3) == a.at(3, 3));
}

TEST_CASE("Matrix-vector product matches the serial reference and a dense oracle") {
  const int n = 50000;
  const auto a = random_symmetric(n, 3, 7);
  const auto x = random_vector(n, 8);
  std::vector<double> y(n), z(n);
  kernels::spmv(a, x, y);
  kernels::spmv_serial(a, x, z);
  CHECK(y == z);
  for (int i : {0, 1, n / 2, n - 1}) {
    double s = 0.0;
    for (int j = std::max(0, i - 3); j <= std::min(n - 1, i + 3); ++j) s += a.at(i, j) * x[j];
    CHECK(y[i] == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("Dot product is independent of the thread count") {
  const int n = 100003;
  const auto x = random_vector(n, 1);
  const auto y = random_vector(n, 2);
  const double reference = kernels::dot_serial(x, y);
  long double plain = 0.0L;
  for (int i = 0; i < n; ++i) plain += static_cast<long double>(x[i]) * y[i];
  CHECK(reference == doctest::Approx(static_cast<double>(plain)).epsilon(1e-12));
  const int saved = omp_get_max_threads();
  for (int threads : {1, 2, 3, 8}) {
    omp_set_num_threads(threads);
    CHECK(kernels::dot(x, y) == reference);
  }
  omp_set_num_threads(saved);
}

TEST_CASE("Vector update matches the serial reference") {
  const int n = 70001;
  const auto x = random_vector(n, 3);
  auto y = random_vector(n, 4);
  auto z = y;
  kernels::axpy(-0.375, x, y);
  kernels::axpy_serial(-0.375, x, z);
  CHECK(y == z);
  CHECK(z[17] == doctest::Approx(random_vector(n, 4)[17] - 0.375 * x[17]).epsilon(1e-15));
}

TEST_CASE("Asymmetry") {
  auto a = random_symmetric(200, 2, 5);
  CHECK(kernels::asymmetry(a) == 0.0);
  // Perturb one off-diagonal entry.
  for (int p = a.row_ptr[10]; p < a.row_ptr[11]; ++p) {
    if (a.col[p] == 11) a.val[p] += 0.25;
  }
  CHECK(kernels::asymmetry(a) == doctest::Approx(0.25));
}
