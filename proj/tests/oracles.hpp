#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library; everything is summed in long double from defining series or built
// from textbook discretizations.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using real = long double;

// Maclaurin series of the Airy equation y'' = x y, both fundamental solutions,
// each summed until terms drop below long-double round-off. Good for |x| <= 6.
struct AirySeries {
  real ai, aip, bi, bip;
};

inline AirySeries airy_series(real x) {
  const real c1 = 0.355028053887817239260063186004183176L;
  const real c2 = 0.258819403792806798405183560189203963L;
  // y = sum c_n x^n with c_{n+3} = c_n / ((n + 2)(n + 3)); f starts at c_0 = 1,
  // g at c_1 = 1.
  real f = 0, fp = 0, g = 0, gp = 0;
  real cf[3] = {1, 0, 0}, cg[3] = {0, 1, 0};
  real pw = 1, pw_prev = 0;  // x^n and x^{n-1}
  for (int n = 0; n < 1200; ++n) {
    const real a = cf[n % 3], b = cg[n % 3];
    f += a * pw;
    g += b * pw;
    if (n > 0) {
      fp += n * a * pw_prev;
      gp += n * b * pw_prev;
    }
    cf[n % 3] = a / ((n + 2) * static_cast<real>(n + 3));
    cg[n % 3] = b / ((n + 2) * static_cast<real>(n + 3));
    pw_prev = pw;
    pw *= x;
    if (n > 30 && n % 3 == 2) {
      // Remaining terms are bounded by the next coefficient of each class.
      real next = 0;
      for (int r = 0; r < 3; ++r) next = std::max(next, std::fabs(cf[r]) + std::fabs(cg[r]));
      if (next * std::fabs(pw) * std::max<real>(1, std::fabs(x * x)) * (n + 4) < 1e-40L) break;
    }
  }
  const real s3 = std::sqrt(static_cast<real>(3));
  return {c1 * f - c2 * g, c1 * fp - c2 * gp, s3 * (c1 * f + c2 * g), s3 * (c1 * fp + c2 * gp)};
}

inline real bisect(const std::function<real(real)>& f, real lo, real hi, int steps = 200) {
  real flo = f(lo);
  for (int i = 0; i < steps; ++i) {
    const real mid = 0.5L * (lo + hi);
    const real fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

// k-th zero of Ai, by scanning the series oracle and bisecting.
inline real airy_ai_zero(int k) {
  int found = 0;
  const real step = 0.01L;
  for (real x = 0; x > -6; x -= step) {
    const real a = airy_series(x).ai, b = airy_series(x - step).ai;
    if ((a < 0) != (b < 0) && ++found == k) {
      return bisect([](real t) { return airy_series(t).ai; }, x - step, x);
    }
  }
  return std::nanl("");
}

inline real airy_aip_zero(int k) {
  int found = 0;
  const real step = 0.01L;
  for (real x = 0; x > -6; x -= step) {
    const real a = airy_series(x).aip, b = airy_series(x - step).aip;
    if ((a < 0) != (b < 0) && ++found == k) {
      return bisect([](real t) { return airy_series(t).aip; }, x - step, x);
    }
  }
  return std::nanl("");
}

// Ascending series for J_m(x), fine for x up to ~20 in long double.
inline real bessel_series(int m, real x) {
  real term = 1;
  for (int i = 1; i <= m; ++i) term *= (x / 2) / i;
  real sum = 0;
  const real q = -(x * x) / 4;
  for (int k = 0; k < 500; ++k) {
    sum += term;
    term *= q / ((k + 1) * static_cast<real>(k + 1 + m));
    if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
  }
  return sum;
}

// k-th positive zero of J_m below x_max, by scan + bisection on the series.
inline real bessel_zero(int m, int k, real x_max = 20) {
  int found = 0;
  const real step = 0.05L;
  for (real x = step; x < x_max; x += step) {
    const real a = bessel_series(m, x), b = bessel_series(m, x + step);
    if ((a < 0) != (b < 0) && ++found == k) {
      return bisect([m](real t) { return bessel_series(m, t); }, x, x + step);
    }
  }
  return std::nanl("");
}

// Eigenvalues of a symmetric tridiagonal matrix (diag, off[i] couples i and
// i+1) counted by the Sturm sequence and isolated by bisection.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  int count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double o = i == 0 ? 0.0 : off[i - 1];
    q = diag[i] - x - (i == 0 ? 0.0 : o * o / q);
    if (q == 0.0) q = 1e-300;
    if (q < 0.0) ++count;
  }
  return count;
}

inline std::vector<double> tridiagonal_lowest(const std::vector<double>& diag,
                                              const std::vector<double>& off, int count) {
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::fabs(off[i - 1]);
    if (i + 1 < diag.size()) radius += std::fabs(off[i]);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) {
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::fabs(a)); ++it) {
      const double mid = 0.5 * (a + b);
      if (sturm_count(diag, off, mid) >= k) b = mid; else a = mid;
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

// Vertical second difference of -u'' + F z u on z_j = j h, h = d / nz, with
// Neumann at z = 0 (reflected ghost, symmetrized) and Dirichlet at z = d.
inline std::vector<double> vertical_fd(double f, double d, int nz, int count) {
  const double h = d / nz;
  std::vector<double> diag(nz), off(nz - 1, -1.0 / (h * h));
  for (int j = 0; j < nz; ++j) diag[j] = 2.0 / (h * h) + f * j * h;
  off[0] = -std::sqrt(2.0) / (h * h);
  return tridiagonal_lowest(diag, off, count);
}

// Cell-centered radial operator -(1/r)(r u')' + m^2/r^2 on (0, R), nr cells,
// Dirichlet (ghost -u) or Neumann (zero flux) at r = R, written out from the
// finite-volume balance of each cell and symmetrized by sqrt(r_i).
inline std::vector<double> radial_fd(double radius, int nr, int m, bool dirichlet, int count) {
  const double h = radius / nr;
  std::vector<double> diag(nr), off(nr - 1);
  for (int i = 0; i < nr; ++i) {
    const double ri = (i + 0.5) * h, west = i * h, east = (i + 1) * h;
    double flux = west;
    if (i + 1 < nr) flux += east;
    else if (dirichlet) flux += 2.0 * east;
    diag[i] = flux / (ri * h * h) + m * m / (ri * ri);
    if (i + 1 < nr) off[i] = -east / (h * h * std::sqrt(ri * (ri + h)));
  }
  return tridiagonal_lowest(diag, off, count);
}

}  // namespace oracle
