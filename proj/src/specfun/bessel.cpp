#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "stark/errors.hpp"
#include "stark/specfun.hpp"

namespace stark::specfun {
namespace {

constexpr double kPi = std::numbers::pi;

void check_order(int m) {
  if (m < 0 || m > tolerances::kMaxBesselOrder) {
    throw UnsupportedOrderError("bessel: order " + std::to_string(m) + " outside [0, " +
                                std::to_string(tolerances::kMaxBesselOrder) + "]");
  }
}

double series(int m, double x) {
  // sum_k (-1)^k (x/2)^{2k+m} / (k! (k+m)!)
  const long double h = 0.5L * x;
  long double term = 1.0L;
  for (int i = 1; i <= m; ++i) term *= h / i;
  long double sum = term;
  const long double h2 = h * h;
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum) || term == 0.0L) break;
  }
  return static_cast<double>(sum);
}

// Miller's backward recurrence normalized by J_0 + 2 sum J_{2k} = 1.
std::pair<double, double> miller(int m, double x) {
  const double top = std::max<double>(m + 1, x);
  int start = static_cast<int>(top + 30.0 + std::sqrt(60.0 * top));
  start += start % 2;
  double jp1 = 0.0, j = 1e-300;
  double norm = 0.0, jm = 0.0, jm1 = 0.0;
  const double two_over_x = 2.0 / x;
  for (int n = start; n > 0; --n) {
    const double jn1 = n * two_over_x * j - jp1;  // J_{n-1}
    jp1 = j;
    j = jn1;
    if (n - 1 == m) jm = j;
    if (n - 1 == m + 1) jm1 = j;
    if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0 * j;
    if (std::fabs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      jm *= 1e-250;
      jm1 *= 1e-250;
    }
  }
  norm += j;  // J_0
  return {jm / norm, jm1 / norm};
}

}  // namespace

std::pair<double, double> bessel_j_pair(int m, double x) {
  check_order(m);
  if (!(x >= 0.0) || x > tolerances::kMaxBesselArgument) {
    throw ValidationError("bessel: argument must lie in [0, 1e4]");
  }
  if (x == 0.0) return {m == 0 ? 1.0 : 0.0, 0.0};
  if (x <= tolerances::kBesselSeriesLimit) return {series(m, x), series(m + 1, x)};
  return miller(m, x);
}

double bessel_j(int m, double x) { return bessel_j_pair(m, x).first; }

namespace {

// Root of J_m inside (lo, hi) where it is known to be unique.
double refine_zero(int m, double lo, double hi, double guess) {
  auto f = [m](double x) { return bessel_j(m, x); };
  double flo = f(lo);
  const double fhi = f(hi);
  if (flo * fhi > 0) {
    throw SolverError("bessel_zero: bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] shows no sign change for order " + std::to_string(m));
  }
  double x = (guess > lo && guess < hi) ? guess : 0.5 * (lo + hi);
  for (int it = 0; it < 300; ++it) {
    const auto [jm, jm1] = bessel_j_pair(m, x);
    if (jm == 0.0) return x;
    if ((jm < 0) == (flo < 0)) {
      lo = x;
      flo = jm;
    } else {
      hi = x;
    }
    // J_m'(x) = (m/x) J_m - J_{m+1}
    const double deriv = m / x * jm - jm1;
    double next = x - jm / deriv;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) < 1e-15 * x || hi - lo < 1e-15 * x) return next;
    x = next;
  }
  return x;
}

double mcmahon(int m, int k) {
  const double mu = 4.0 * m * m;
  const double beta = (k + 0.5 * m - 0.25) * kPi;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e);
}

}  // namespace

double BesselZeroTable::get(int m, int k) {
  check_order(m);
  if (k < 1 || k > tolerances::kMaxBesselZeroIndex + tolerances::kMaxBesselOrder + 1) {
    throw UnsupportedOrderError("bessel_zero: index " + std::to_string(k) + " outside [1, " +
                                std::to_string(tolerances::kMaxBesselZeroIndex) + "]");
  }
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find({m, k}); it != entries_.end()) return it->second;
  }
  const double value = compute(m, k);
  std::lock_guard lock(mutex_);
  entries_.emplace(std::make_pair(m, k), value);
  return value;
}

double BesselZeroTable::compute(int m, int k) {
  if (m == 0) {
    const double guess = mcmahon(0, k);
    return refine_zero(0, guess - 0.5, guess + 0.5, guess);
  }
  // Interlacing: x_{m-1,k} < x_{m,k} < x_{m-1,k+1}, exactly one zero inside.
  const double lo = get(m - 1, k);
  const double hi = get(m - 1, k + 1);
  return refine_zero(m, lo, hi, mcmahon(m, k));
}

std::map<std::pair<int, int>, double> BesselZeroTable::snapshot() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

void BesselZeroTable::clear() {
  std::lock_guard lock(mutex_);
  entries_.clear();
}

BesselZeroTable& bessel_zero_table() {
  static BesselZeroTable table;
  return table;
}

double bessel_zero(int m, int k) {
  check_order(m);
  if (k < 1 || k > tolerances::kMaxBesselZeroIndex) {
    throw UnsupportedOrderError("bessel_zero: index " + std::to_string(k) + " outside [1, " +
                                std::to_string(tolerances::kMaxBesselZeroIndex) + "]");
  }
  return bessel_zero_table().get(m, k);
}

std::vector<OrderedZero> bessel_zeros_below(double limit) {
  std::vector<OrderedZero> out;
  for (int m = 0;; ++m) {
    // x_{m,1} > m, so orders beyond the limit contribute nothing.
    if (m > limit) break;
    if (m > tolerances::kMaxBesselOrder) {
      throw UnsupportedOrderError("bessel zeros below " + std::to_string(limit) +
                                  " require orders above the cap");
    }
    if (bessel_zero(m, 1) >= limit) {
      // Zeros increase with order for fixed k, so no higher order qualifies.
      break;
    }
    for (int k = 1;; ++k) {
      if (k > tolerances::kMaxBesselZeroIndex) {
        throw UnsupportedOrderError("bessel zeros below limit exceed the index cap");
      }
      const double x = bessel_zero(m, k);
      if (x >= limit) break;
      out.push_back({x, m, k});
    }
  }
  std::sort(out.begin(), out.end(), [](const OrderedZero& a, const OrderedZero& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.m < b.m;
  });
  return out;
}

std::vector<OrderedZero> sorted_bessel_zeros(int count) {
  if (count < 1) return {};
  double limit = 4.0;
  for (;;) {
    auto zeros = bessel_zeros_below(limit);
    if (static_cast<int>(zeros.size()) >= count) {
      zeros.resize(count);
      return zeros;
    }
    limit *= 1.5;
  }
}

}  // namespace stark::specfun
