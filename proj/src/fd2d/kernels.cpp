#include "stark/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stark::kernels {
namespace {

constexpr std::size_t kChunk = 4096;

void check_sizes(std::size_t a, std::size_t b) {
  if (a != b) throw std::invalid_argument("kernels: size mismatch");
}

double chunk_dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

}  // namespace

double CsrMatrix::at(int i, int j) const {
  const auto first = col.begin() + row_ptr[i];
  const auto last = col.begin() + row_ptr[i + 1];
  const auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? val[it - col.begin()] : 0.0;
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), static_cast<std::size_t>(a.rows));
  check_sizes(y.size(), static_cast<std::size_t>(a.rows));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) s += a.val[p] * x[a.col[p]];
    y[i] = s;
  }
}

void spmv_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), static_cast<std::size_t>(a.rows));
  check_sizes(y.size(), static_cast<std::size_t>(a.rows));
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) s += a.val[p] * x[a.col[p]];
    y[i] = s;
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size());
  const std::size_t n = x.size();
  const long chunks = static_cast<long>((n + kChunk - 1) / kChunk);
  std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
  for (long c = 0; c < chunks; ++c) {
    const std::size_t lo = c * kChunk;
    partial[c] = chunk_dot(x.data() + lo, y.data() + lo, std::min(kChunk, n - lo));
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

double dot_serial(std::span<const double> x, std::span<const double> y) {
  check_sizes(x.size(), y.size());
  const std::size_t n = x.size();
  double s = 0.0;
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    s += chunk_dot(x.data() + lo, y.data() + lo, std::min(kChunk, n - lo));
  }
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  const long n = static_cast<long>(x.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void axpy_serial(double alpha, std::span<const double> x, std::span<double> y) {
  check_sizes(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double asymmetry(const CsrMatrix& a) {
  double worst = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) {
      worst = std::max(worst, std::fabs(a.val[p] - a.at(a.col[p], i)));
    }
  }
  return worst;
}

}  // namespace stark::kernels
