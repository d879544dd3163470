#pragma once

// Sparse and vector kernels used by the 2-D eigensolver. Each parallel kernel
// has a serial twin with identical arithmetic, kept as the test reference.
// Reductions are chunked in a fixed order so results do not depend on the
// thread count.

#include <cstddef>
#include <span>
#include <vector>

namespace stark::kernels {

struct CsrMatrix {
  int rows = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<double> val;

  std::size_t nnz() const { return val.size(); }
  // Entry (i, j), zero when not stored.
  double at(int i, int j) const;
  double diagonal(int i) const { return at(i, i); }
};

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y);
void spmv_serial(const CsrMatrix& a, std::span<const double> x, std::span<double> y);

double dot(std::span<const double> x, std::span<const double> y);
double dot_serial(std::span<const double> x, std::span<const double> y);

// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy_serial(double alpha, std::span<const double> x, std::span<double> y);

// Largest |a_ij - a_ji| over stored entries.
double asymmetry(const CsrMatrix& a);

}  // namespace stark::kernels
