#include <cmath>
#include <numbers>

#include "stark/errors.hpp"
#include "stark/specfun.hpp"

namespace stark::specfun {
namespace {

constexpr long double kAi0 = 0.355028053887817239260063186004183176L;
constexpr long double kAip0 = 0.258819403792806798405183560189203963L;  // -Ai'(0)
constexpr long double kSqrt3 = 1.732050807568877293527446341505872367L;
constexpr double kPi = std::numbers::pi;

struct Raw {
  double ai, aip, bi, bip;
};

// Power series of the two standard solutions f, g of y'' = x y with
// f(0) = 1, f'(0) = 0, g(0) = 0, g'(0) = 1, summed in long double.
Raw maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;
  long double f = 1.0L, fp = 0.0L, g = x, gp = 1.0L;
  long double tf = 1.0L, tfp = x * x / 2.0L, tg = x, tgp = 1.0L;
  fp = tfp;
  for (int k = 1; k < 400; ++k) {
    const long double k3 = 3.0L * k;
    tf *= x3 / ((k3 - 1.0L) * k3);
    tg *= x3 / (k3 * (k3 + 1.0L));
    tgp *= x3 / (k3 * (k3 - 2.0L));
    f += tf;
    g += tg;
    gp += tgp;
    if (k >= 2) {
      tfp *= x3 / ((k3 - 1.0L) * (k3 - 3.0L));
      fp += tfp;
    }
    const long double mag = std::fabs(tf) + std::fabs(tg) + std::fabs(tgp) + std::fabs(tfp);
    const long double ref = std::fabs(f) + std::fabs(g) + std::fabs(gp) + std::fabs(fp);
    if (k > 3 && mag < 1e-22L * ref) break;
  }
  Raw r;
  r.ai = static_cast<double>(kAi0 * f - kAip0 * g);
  r.aip = static_cast<double>(kAi0 * fp - kAip0 * gp);
  r.bi = static_cast<double>(kSqrt3 * (kAi0 * f + kAip0 * g));
  r.bip = static_cast<double>(kSqrt3 * (kAi0 * fp + kAip0 * gp));
  return r;
}

// Scaled K_{1/3}(t) e^t and K_{4/3}(t) e^t for t >= 2 by Steed's continued
// fraction (Temme's CF2 form).
std::pair<double, double> scaled_k_third(double t) {
  constexpr double mu = 1.0 / 3.0;
  const double a1 = 0.25 - mu * mu;
  double b = 2.0 * (1.0 + t);
  double d = 1.0 / b;
  double delh = d, h = d;
  double q1 = 0.0, q2 = 1.0;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::fabs(dels / s) < 1e-17) break;
  }
  h *= a1;
  const double kmu = std::sqrt(kPi / (2.0 * t)) / s;
  const double k1 = kmu * (mu + t + 0.5 - h) / t;
  return {kmu, k1};
}

// Coefficients u_k of the exponential/oscillatory asymptotic series and the
// companions v_k used for the derivatives.
struct AsymptoticSums {
  double u_even = 0, u_odd = 0, v_even = 0, v_odd = 0;  // alternating in pairs
  double u_plus = 0, u_minus = 0, v_plus = 0, v_minus = 0;
};

AsymptoticSums asymptotic_sums(double zeta) {
  AsymptoticSums s;
  double u = 1.0, v = 1.0, p = 1.0;  // p = zeta^{-k}
  double prev = INFINITY;
  for (int k = 0; k < 200; ++k) {
    if (k > 0) {
      const double kk = k;
      u *= (6 * kk - 5) * (6 * kk - 3) * (6 * kk - 1) / ((2 * kk - 1) * 216 * kk);
      v = -(6 * kk + 1) / (6 * kk - 1) * u;
      p /= zeta;
    }
    const double tu = u * p, tv = v * p;
    const double mag = std::fabs(tu) + std::fabs(tv);
    if (k > 2 && mag > prev) break;  // past the smallest term
    prev = mag;
    const double sgn_k = (k % 2 == 0) ? 1.0 : -1.0;
    s.u_plus += tu;
    s.v_plus += tv;
    s.u_minus += sgn_k * tu;
    s.v_minus += sgn_k * tv;
    const double sgn_pair = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      s.u_even += sgn_pair * tu;
      s.v_even += sgn_pair * tv;
    } else {
      s.u_odd += sgn_pair * tu;
      s.v_odd += sgn_pair * tv;
    }
    if (mag < 1e-18) break;
  }
  return s;
}

}  // namespace

double AiryPair::raw_ai() const { return ai * std::exp(-scale_exp); }
double AiryPair::raw_aip() const { return aip * std::exp(-scale_exp); }
double AiryPair::raw_bi() const { return bi * std::exp(scale_exp); }
double AiryPair::raw_bip() const { return bip * std::exp(scale_exp); }

AiryPair airy(double x) {
  using namespace tolerances;
  AiryPair p;
  p.x = x;
  if (x < -kAiryAsymptoticSeam) {
    const double z = -x;
    const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
    const double z14 = std::sqrt(std::sqrt(z));
    const auto s = asymptotic_sums(zeta);
    const double th = zeta - kPi / 4.0;
    const double c = std::cos(th), sn = std::sin(th);
    const double amp = 1.0 / (std::sqrt(kPi) * z14);
    const double damp = z14 / std::sqrt(kPi);
    p.ai = amp * (c * s.u_even + sn * s.u_odd);
    p.aip = damp * (sn * s.v_even - c * s.v_odd);
    p.bi = amp * (-sn * s.u_even + c * s.u_odd);
    p.bip = damp * (c * s.v_even + sn * s.v_odd);
    return p;
  }
  if (x <= 0.0) {
    const Raw r = maclaurin(x);
    p.ai = r.ai;
    p.aip = r.aip;
    p.bi = r.bi;
    p.bip = r.bip;
    return p;
  }
  const double sq = std::sqrt(x);
  const double zeta = 2.0 / 3.0 * x * sq;
  p.scale_exp = zeta;
  if (x > kAiryAsymptoticSeam) {
    const double x14 = std::sqrt(sq);
    const auto s = asymptotic_sums(zeta);
    const double rpi = std::sqrt(kPi);
    p.ai = s.u_minus / (2.0 * rpi * x14);
    p.aip = -x14 * s.v_minus / (2.0 * rpi);
    p.bi = s.u_plus / (rpi * x14);
    p.bip = x14 * s.v_plus / rpi;
    return p;
  }
  const Raw r = maclaurin(x);
  const double grow = std::exp(-zeta);
  p.bi = r.bi * grow;
  p.bip = r.bip * grow;
  if (x <= kAiryDecayingSeam) {
    const double decay = std::exp(zeta);
    p.ai = r.ai * decay;
    p.aip = r.aip * decay;
  } else {
    // Ai(x) = sqrt(x/3) K_{1/3}(zeta) / pi, Ai'(x) = -x K_{2/3}(zeta) / (pi sqrt 3)
    const auto [k13, k43] = scaled_k_third(zeta);
    const double k23 = k43 - 2.0 / (3.0 * zeta) * k13;
    p.ai = std::sqrt(x / 3.0) * k13 / kPi;
    p.aip = -x * k23 / (kPi * std::sqrt(3.0));
  }
  return p;
}

namespace {

// Newton on a smooth function started from an asymptotic guess, kept inside
// a bracket that is widened until it shows a sign change.
template <class F, class DF>
double polish_root(F f, DF df, double guess, double half_width) {
  double lo = guess - half_width, hi = guess + half_width;
  double flo = f(lo), fhi = f(hi);
  for (int i = 0; i < 20 && flo * fhi > 0; ++i) {
    half_width *= 1.5;
    lo = guess - half_width;
    hi = guess + half_width;
    flo = f(lo);
    fhi = f(hi);
  }
  if (flo * fhi > 0) throw SolverError("airy zero: no sign change near asymptotic guess");
  double x = guess;
  for (int it = 0; it < 200; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx < 0) == (flo < 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    double next = x - fx / df(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * std::max(1.0, std::fabs(x))) return next;
    x = next;
  }
  return x;
}

}  // namespace

double airy_ai_zero(int k) {
  if (k < 1) throw ValidationError("airy_ai_zero: index must be >= 1");
  const double t = 3.0 * kPi / 8.0 * (4.0 * k - 1.0);
  const double t2 = 1.0 / (t * t);
  const double guess = -std::cbrt(t * t) * (1.0 + 5.0 / 48.0 * t2 - 5.0 / 36.0 * t2 * t2);
  return polish_root([](double x) { return airy(x).raw_ai(); },
                     [](double x) { return airy(x).raw_aip(); }, guess, 0.3);
}

double airy_aip_zero(int k) {
  if (k < 1) throw ValidationError("airy_aip_zero: index must be >= 1");
  const double t = 3.0 * kPi / 8.0 * (4.0 * k - 3.0);
  const double t2 = 1.0 / (t * t);
  const double guess = -std::cbrt(t * t) * (1.0 - 7.0 / 48.0 * t2 + 35.0 / 288.0 * t2 * t2);
  return polish_root([](double x) { return airy(x).raw_aip(); },
                     [](double x) { return x * airy(x).raw_ai(); }, guess, 0.3);
}

}  // namespace stark::specfun
