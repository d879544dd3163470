#pragma once

// Special-function kernel: Airy functions, Bessel functions of the first
// kind and their zeros, and adaptive Simpson quadrature.

#include <functional>
#include <map>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

namespace stark::specfun {

// Accuracy constants of this module. Everything downstream is calibrated
// against these.
namespace tolerances {
inline constexpr double kAiryRelative = 1e-10;
inline constexpr double kBesselRelative = 1e-10;
inline constexpr double kBesselZeroAbsolute = 1e-10;
inline constexpr int kMaxBesselOrder = 64;
inline constexpr int kMaxBesselZeroIndex = 1000;
inline constexpr double kMaxBesselArgument = 1e4;
inline constexpr int kQuadratureMaxDepth = 50;
inline constexpr long kQuadratureMaxEvaluations = 4'000'000;
// Seams between the Airy evaluation regimes.
inline constexpr double kAiryAsymptoticSeam = 8.0;
inline constexpr double kAiryDecayingSeam = 2.5;
// Ascending Bessel series is used at or below this argument.
inline constexpr double kBesselSeriesLimit = 12.0;
}  // namespace tolerances

// Values of Ai, Ai', Bi, Bi' at x. For x > 0 the decaying pair is stored
// multiplied by e^{scale_exp} and the growing pair multiplied by
// e^{-scale_exp}, with scale_exp = (2/3) x^{3/2}. For x <= 0, scale_exp = 0
// and the raw values are stored.
struct AiryPair {
  double x = 0.0;
  double ai = 0.0;
  double aip = 0.0;
  double bi = 0.0;
  double bip = 0.0;
  double scale_exp = 0.0;

  // Unscaled values; may underflow/overflow for large x.
  double raw_ai() const;
  double raw_aip() const;
  double raw_bi() const;
  double raw_bip() const;
};

AiryPair airy(double x);

// k-th zero (k >= 1) of Ai and of Ai', both negative reals.
double airy_ai_zero(int k);
double airy_aip_zero(int k);

// J_m(x) for 0 <= m <= 64, x >= 0.
double bessel_j(int m, double x);

// J_m(x) and J_{m+1}(x) from a single evaluation.
std::pair<double, double> bessel_j_pair(int m, double x);

// k-th positive zero of J_m. Memoized in the process-wide table.
double bessel_zero(int m, int k);

// Thread-safe memo of Bessel zeros. Correctness never depends on hits.
class BesselZeroTable {
 public:
  double get(int m, int k);
  std::map<std::pair<int, int>, double> snapshot() const;
  void clear();

 private:
  double compute(int m, int k);

  mutable std::mutex mutex_;
  std::map<std::pair<int, int>, double> entries_;
};

BesselZeroTable& bessel_zero_table();

// All positive zeros of J_m (every order m) merged and sorted ascending;
// ties go to the smaller order. Returns the first `count` as (x, m, k).
struct OrderedZero {
  double x;
  int m;
  int k;
};
std::vector<OrderedZero> sorted_bessel_zeros(int count);

// Zeros x_{m,k} < limit over all orders, sorted as above. Throws
// UnsupportedOrderError when the limit needs an order above the cap.
std::vector<OrderedZero> bessel_zeros_below(double limit);

// Adaptive composite Simpson with Richardson correction. `breakpoints`
// inside (lo, hi) split the interval where f has kinks. Absolute error
// target `tol`. Throws QuadratureError (carrying the best estimate) when
// the depth cap is hit.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol, std::span<const double> breakpoints = {});

// Composite 10-point Gauss-Legendre on `panels` equal panels. Non-adaptive;
// used where the integrand carries evaluation noise an adaptive rule would chase.
double integrate_fixed(const std::function<double(double)>& f, double lo, double hi, int panels);

}  // namespace stark::specfun
