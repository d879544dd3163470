#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "stark/errors.hpp"
#include "stark/specfun.hpp"

namespace stark::specfun {
namespace {

struct Panel {
  double lo, hi, flo, fmid, fhi, whole;
};

class Simpson {
 public:
  explicit Simpson(const std::function<double(double)>& f) : f_(f) {}

  double run(const Panel& p, double tol, int depth) {
    const double mid = 0.5 * (p.lo + p.hi);
    const double lm = 0.5 * (p.lo + mid), rm = 0.5 * (mid + p.hi);
    const double flm = f_(lm), frm = f_(rm);
    const double h = p.hi - p.lo;
    const double left = h / 12.0 * (p.flo + 4.0 * flm + p.fmid);
    const double right = h / 12.0 * (p.fmid + 4.0 * frm + p.fhi);
    const double both = left + right;
    const double diff = both - p.whole;
    if (std::fabs(diff) <= 15.0 * tol || h < 1e-14 * (std::fabs(p.lo) + std::fabs(p.hi))) {
      return both + diff / 15.0;
    }
    evaluations_ += 2;
    if (depth >= tolerances::kQuadratureMaxDepth ||
        evaluations_ > tolerances::kQuadratureMaxEvaluations) {
      failed_ = true;
      return both + diff / 15.0;
    }
    return run({p.lo, mid, p.flo, flm, p.fmid, left}, 0.5 * tol, depth + 1) +
           run({mid, p.hi, p.fmid, frm, p.fhi, right}, 0.5 * tol, depth + 1);
  }

  bool failed() const { return failed_; }

 private:
  const std::function<double(double)>& f_;
  bool failed_ = false;
  long evaluations_ = 0;
};

// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes, weights;
};

GaussRule gauss_legendre(int n) {
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi, double tol,
                 std::span<const double> breakpoints) {
  if (!(lo < hi)) throw ValidationError("integrate: require lo < hi");
  if (!(tol > 0.0)) throw ValidationError("integrate: tolerance must be positive");
  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());

  // Four starting panels per segment so symmetric integrands cannot fool the
  // first error estimate.
  constexpr int kStartPanels = 4;
  Simpson simpson(f);
  double total = 0.0;
  const double span_len = hi - lo;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s], b = cuts[s + 1];
    const double w = (b - a) / kStartPanels;
    double fa = f(a);
    for (int p = 0; p < kStartPanels; ++p) {
      const double pl = a + p * w;
      const double ph = (p + 1 == kStartPanels) ? b : a + (p + 1) * w;
      const double pm = 0.5 * (pl + ph);
      const double fm = f(pm), fb = f(ph);
      const double whole = (ph - pl) / 6.0 * (fa + 4.0 * fm + fb);
      total += simpson.run({pl, ph, fa, fm, fb, whole}, tol * (ph - pl) / span_len, 0);
      fa = fb;
    }
  }
  if (simpson.failed()) {
    throw QuadratureError("integrate: depth cap reached before tolerance", total);
  }
  return total;
}

double integrate_fixed(const std::function<double(double)>& f, double lo, double hi, int panels) {
  if (!(lo < hi)) throw ValidationError("integrate_fixed: require lo < hi");
  if (panels < 1) throw ValidationError("integrate_fixed: panels must be positive");
  static const GaussRule rule = gauss_legendre(10);
  const double w = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * w;
    double part = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      part += rule.weights[i] * f(mid + 0.5 * w * rule.nodes[i]);
    }
    total += 0.5 * w * part;
  }
  return total;
}

}  // namespace stark::specfun
