#include "stark/certify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "stark/errors.hpp"
#include "stark/specfun.hpp"
#include "stark/transverse.hpp"

namespace stark::certify {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxShrink = 40;

transverse::TransverseLevel ground_state(const WaveguideParams& params) {
  return transverse::levels(params, BoundaryType::DirichletDirichlet, 1).front();
}

}  // namespace

void TrialSpec::validate(const WaveguideParams& params) const {
  if (!(params.radius > 0.0)) throw ValidationError("trial: window radius must be positive");
  if (!(plateau > params.radius)) throw ValidationError("trial: plateau b must exceed a");
  if (!(tau > 0.0)) throw ValidationError("trial: tau must be positive");
  if (!(eps >= 0.0)) throw ValidationError("trial: eps must be non-negative");
}

double bump(double r, double a) {
  if (r <= 0.0 || r >= a) return 0.0;
  const double t = (2.0 * r - a) / a;
  const double q = 1.0 - t * t;
  return std::exp(-1.0 / q);
}

double bump_derivative(double r, double a) {
  if (r <= 0.0 || r >= a) return 0.0;
  const double t = (2.0 * r - a) / a;
  const double q = 1.0 - t * t;
  return -std::exp(-1.0 / q) * 4.0 * t / (a * q * q);
}

double cutoff(double s, double b) {
  const double u = s - b;
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double cutoff_derivative(double s, double b) {
  const double u = s - b;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return -30.0 * u * u * (1.0 - u) * (1.0 - u);
}

double cutoff_tau(double r, double b, double tau) {
  if (r <= b) return 1.0;
  return cutoff(b + tau * std::log(r / b), b);
}

double cutoff_tau_derivative(double r, double b, double tau) {
  if (r <= b) return 0.0;
  return cutoff_derivative(b + tau * std::log(r / b), b) * tau / r;
}

double cutoff_energy() {
  // The profile is a fixed shape on [b, b + 1]; evaluate it at b = 0.
  auto f = [](double s) {
    const double v = cutoff_derivative(s, 0.0);
    return v * v;
  };
  return specfun::integrate(f, 0.0, 1.0, 1e-14);
}

double q_functional(const WaveguideParams& params, const TrialSpec& spec) {
  params.validate();
  spec.validate(params);
  const auto level = ground_state(params);
  const double a = params.radius, d = params.width, f = params.field;
  const double lam = level.lambda, eps = spec.eps;

  // Tail r >= b in s = b + tau ln(r/b): |cutoff_tau'|^2 r dr = tau |cutoff'(s)|^2 ds,
  // times ||chi_1||^2 = 1.
  auto tail_integrand = [&](double s) {
    const double v = cutoff_derivative(s, spec.plateau);
    return spec.tau * v * v;
  };
  const double tail = specfun::integrate(tail_integrand, spec.plateau, spec.plateau + 1.0, 1e-14);

  if (eps == 0.0) return kTwoPi * tail;

  std::unordered_map<double, double> chi_cache;
  auto chi_at = [&](double z) {
    auto it = chi_cache.find(z);
    if (it != chi_cache.end()) return it->second;
    const double v = transverse::chi(level, params, z).value;
    chi_cache.emplace(z, v);
    return v;
  };

  // Scale of the integrand, for relative tolerances.
  const double zc = specfun::integrate_fixed(
      [&](double z) { return std::fabs((f * z - lam) * chi_at(z)); }, 0.0, d, 64);
  const double zl = specfun::integrate_fixed([&](double z) { return std::fabs(f * z - lam); },
                                             0.0, d, 8);
  auto magnitude_at = [&](double r) {
    const double phi = bump(r, a), dphi = bump_derivative(r, a);
    const double psi = phi * phi, dpsi = 2.0 * phi * dphi;
    return eps * eps * dpsi * dpsi * d + 2.0 * eps * psi * zc + eps * eps * psi * psi * zl;
  };
  const double magnitude =
      specfun::integrate_fixed([&](double r) { return r * magnitude_at(r); }, 0.0, a, 64);

  auto slice = [&](double r) {
    const double phi = bump(r, a), dphi = bump_derivative(r, a);
    const double psi = phi * phi, dpsi = 2.0 * phi * dphi;
    if (psi == 0.0 && dpsi == 0.0) return 0.0;
    auto g = [&](double z) {
      const double pot = f * z - lam;
      return eps * eps * dpsi * dpsi + 2.0 * eps * psi * pot * chi_at(z) +
             eps * eps * psi * psi * pot;
    };
    const double tol = 1e-13 * std::max(magnitude_at(r), 1e-300);
    return r * specfun::integrate(g, 0.0, d, tol);
  };
  const double body = specfun::integrate(slice, 0.0, a, 1e-11 * magnitude);
  return kTwoPi * (spec.tau == 0.0 ? body : tail + body);
}

Coefficients coefficients(const WaveguideParams& params, const TrialSpec& spec) {
  params.validate();
  spec.validate(params);
  const auto level = ground_state(params);
  const double a = params.radius, d = params.width, f = params.field, lam = level.lambda;

  auto weighted = [a](auto&& g) {
    auto h = [&](double r) { return r * g(bump(r, a), bump_derivative(r, a)); };
    const double scale = specfun::integrate_fixed([&](double r) { return std::fabs(h(r)); }, 0.0, a, 32);
    return specfun::integrate(h, 0.0, a, 1e-14 * std::max(scale, 1e-300));
  };
  const double p2 = weighted([](double p, double) { return p * p; });
  const double p4 = weighted([](double p, double) { return p * p * p * p; });
  const double pp = weighted([](double p, double dp) { return p * p * dp * dp; });

  const double slope_gap =
      transverse::chi(level, params, 0.0).derivative - transverse::chi(level, params, d).derivative;

  Coefficients out;
  out.a = kTwoPi * cutoff_energy();
  // |d/dr (eps phi^2)|^2 = 4 eps^2 phi^2 phi'^2, integrated over z in [0, d];
  // (F z - lambda) eps^2 phi^4 with int_0^d (F z - lambda) dz = F d^2 / 2 - lambda d.
  out.b = kTwoPi * (4.0 * d * pp + (0.5 * f * d * d - lam * d) * p4);
  // Cross term 2 eps phi^2 int (F z - lambda) chi_1 dz = 2 eps phi^2 (chi_1'(d) - chi_1'(0)).
  out.c = 2.0 * slope_gap * kTwoPi * p2;
  return out;
}

Certificate certify(const WaveguideParams& params) {
  params.validate();
  if (!(params.radius > 0.0)) throw ValidationError("certify: window radius must be positive");
  Certificate cert;
  cert.window = bracket::window(params);
  cert.spec.plateau = 2.0 * params.radius;
  cert.spec.tau = 1.0;
  cert.coeffs = coefficients(params, cert.spec);
  const auto& k = cert.coeffs;
  if (!(k.c > 0.0) || !(k.a > 0.0)) {
    throw SolverError("certify: coefficient signs violate A > 0, C > 0 (A=" + std::to_string(k.a) +
                      ", C=" + std::to_string(k.c) + ")");
  }
  double eps = k.b > 0.0 ? k.c / (2.0 * k.b) : 1.0;
  const double gain = k.c * eps - k.b * eps * eps;
  double tau = 0.5 * std::min(1.0, gain / (2.0 * k.a));
  for (int step = 0; step <= kMaxShrink; ++step) {
    cert.spec.eps = eps;
    cert.spec.tau = tau;
    cert.q_value = q_functional(params, cert.spec);
    cert.shrink_steps = step;
    if (cert.q_value < 0.0) return cert;
    eps *= 0.5;
    tau *= 0.5;
  }
  throw SolverError("certify: no negative trial value after 40 halvings (A=" + std::to_string(k.a) +
                    ", B=" + std::to_string(k.b) + ", C=" + std::to_string(k.c) + ")");
}

}  // namespace stark::certify
