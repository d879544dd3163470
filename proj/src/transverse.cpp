#include "stark/transverse.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "stark/errors.hpp"
#include "stark/specfun.hpp"

namespace stark::transverse {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxCount = 100;
constexpr double kSmallFieldCutoff = 1e-8;  // in units of (pi/d)^3
constexpr double kRootRelative = 1e-13;
// F^{2/3} below this multiple of (pi/d)^2 selects the local Taylor basis.
constexpr double kLocalBasisCutoff = 1e-3;

// c * m * e^{e} without intermediate overflow.
double scaled_product(double c, double m, double e) {
  const double cm = c * m;
  if (cm == 0.0) return 0.0;
  if (std::fabs(e) < 600.0) return cm * std::exp(e);
  return std::copysign(std::exp(std::log(std::fabs(cm)) + e), cm);
}

struct AiryArgs {
  double cube_root_f;  // F^{1/3}
  double x0;           // argument at z = 0: -lambda / F^{2/3}
};

AiryArgs airy_args(const WaveguideParams& p, double lambda) {
  const double c = std::cbrt(p.field);
  return {c, -lambda / (c * c)};
}

double trig_level(const WaveguideParams& p, BoundaryType bc, int n) {
  const double k = bc == BoundaryType::DirichletDirichlet ? n * kPi / p.width
                                                          : (2.0 * n - 1.0) * kPi / (2.0 * p.width);
  return k * k;
}

// Solution pair (u, v) of chi'' = (F z - lambda) chi normalized at z = d/2.
struct LocalPair {
  double u, up, v, vp;
};

// One Taylor step of y'' = (F z - lambda) y from zc with y(zc) = y0, y'(zc) = y1.
void taylor_step(double f, double q, double t, double& y0, double& y1) {
  double ck_2 = 0.0, ck_1 = y0, ck = y1;  // c_{k-2}, c_{k-1}, c_k at k = 1
  double tp = t;                          // t^k
  double val = y0 + y1 * t, der = y1;
  for (int k = 1; k < 80; ++k) {
    // c_{k+1} = (q c_{k-1} + F c_{k-2}) / (k (k + 1))
    const double next = (q * ck_1 + f * ck_2) / (k * (k + 1.0));
    const double term_d = (k + 1.0) * next * tp;
    tp *= t;
    const double term_v = next * tp;
    val += term_v;
    der += term_d;
    ck_2 = ck_1;
    ck_1 = ck;
    ck = next;
    if (k > 4 && std::fabs(term_v) + std::fabs(term_d * t) <= 1e-18 * (std::fabs(val) + std::fabs(der * t))) {
      break;
    }
  }
  y0 = val;
  y1 = der;
}

LocalPair local_pair(const WaveguideParams& p, double lambda, double z) {
  const double f = p.field, zc = 0.5 * p.width;
  const double qmax = std::max(std::fabs(lambda), std::fabs(f * p.width - lambda)) + 1.0 / (p.width * p.width);
  const double span = z - zc;
  const int steps = std::max(1, static_cast<int>(std::ceil(std::fabs(span) * std::sqrt(qmax))));
  const double h = span / steps;
  double u = 1.0, up = 0.0, v = 0.0, vp = 1.0;
  for (int s = 0; s < steps; ++s) {
    const double zs = zc + s * h;
    const double q = f * zs - lambda;
    taylor_step(f, q, h, u, up);
    taylor_step(f, q, h, v, vp);
  }
  return {u, up, v, vp};
}

void check_count(int count) {
  if (count < 1 || count > kMaxCount) {
    throw ValidationError("transverse: count must lie in [1, 100]");
  }
}

ChiValue evaluate(const TransverseLevel& level, const WaveguideParams& params, double alpha,
                  double beta, double z) {
  if (level.basis == Basis::Trig) {
    const double k = std::sqrt(level.lambda);
    const double s = std::sin(k * z), c = std::cos(k * z);
    return {alpha * s + beta * c, k * (alpha * c - beta * s)};
  }
  if (level.basis == Basis::Local) {
    const auto l = local_pair(params, level.lambda, z);
    return {alpha * l.u + beta * l.v, alpha * l.up + beta * l.vp};
  }
  const auto args = airy_args(params, level.lambda);
  const auto p = specfun::airy(args.cube_root_f * z + args.x0);
  const double value =
      scaled_product(alpha, p.ai, -p.scale_exp) + scaled_product(beta, p.bi, p.scale_exp);
  const double deriv =
      scaled_product(alpha, p.aip, -p.scale_exp) + scaled_product(beta, p.bip, p.scale_exp);
  return {value, args.cube_root_f * deriv};
}

// Residual of the boundary condition at the end opposite to the one used to
// build the coefficients, relative to the function's peak.
double end_residual(const TransverseLevel& level, const WaveguideParams& params, double alpha,
                    double beta, bool built_at_zero, double peak) {
  if (built_at_zero) return std::fabs(evaluate(level, params, alpha, beta, params.width).value) / peak;
  const auto at0 = evaluate(level, params, alpha, beta, 0.0);
  if (level.bc == BoundaryType::DirichletDirichlet) return std::fabs(at0.value) / peak;
  return std::fabs(at0.derivative) / (peak * std::max(1.0, std::sqrt(level.lambda)));
}

double sampled_peak(const TransverseLevel& level, const WaveguideParams& params, double alpha,
                    double beta) {
  double peak = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double z = params.width * i / 256.0;
    peak = std::max(peak, std::fabs(evaluate(level, params, alpha, beta, z).value));
  }
  return peak;
}

// Coefficients annihilating one boundary condition exactly, normalized in L2.
// Both ends are tried and the one leaving the smaller residual at the other
// end is kept: for strong fields the growing Bi component makes the z = 0
// construction exponentially sensitive to the root's last digits.
TransverseLevel build_level(const WaveguideParams& params, BoundaryType bc, int n, double lambda,
                            Basis basis) {
  TransverseLevel level{n, bc, lambda, 0.0, 0.0, basis};
  double alpha, beta;
  if (basis == Basis::Trig) {
    alpha = bc == BoundaryType::DirichletDirichlet ? 1.0 : 0.0;
    beta = bc == BoundaryType::DirichletDirichlet ? 0.0 : 1.0;
  } else if (basis == Basis::Local) {
    const auto l0 = local_pair(params, lambda, 0.0);
    const auto ld = local_pair(params, lambda, params.width);
    double a0 = l0.v, b0 = -l0.u;
    if (bc == BoundaryType::NeumannDirichlet) {
      a0 = l0.vp;
      b0 = -l0.up;
    }
    const double r0 = end_residual(level, params, a0, b0, true, sampled_peak(level, params, a0, b0));
    const double rd = end_residual(level, params, ld.v, -ld.u, false, sampled_peak(level, params, ld.v, -ld.u));
    alpha = r0 <= rd ? a0 : ld.v;
    beta = r0 <= rd ? b0 : -ld.u;
  } else {
    const auto args = airy_args(params, lambda);
    const auto p0 = specfun::airy(args.x0);  // x0 < 0: raw values
    double a0 = p0.bi, b0 = -p0.ai;
    if (bc == BoundaryType::NeumannDirichlet) {
      a0 = p0.bip;
      b0 = -p0.aip;
    }
    // From chi(d) = 0, scaled by e^{-xi_d}.
    const auto pd = specfun::airy(args.x0 + args.cube_root_f * params.width);
    const double ad = pd.bi, bd = -pd.ai * std::exp(-2.0 * pd.scale_exp);
    const double peak0 = sampled_peak(level, params, a0, b0);
    const double peakd = sampled_peak(level, params, ad, bd);
    const double r0 = peak0 > 0 ? end_residual(level, params, a0, b0, true, peak0) : INFINITY;
    const double rd = peakd > 0 ? end_residual(level, params, ad, bd, false, peakd) : INFINITY;
    if (r0 <= rd) {
      alpha = a0;
      beta = b0;
    } else {
      alpha = ad;
      beta = bd;
    }
  }
  const double d = params.width;
  const double peak = sampled_peak(level, params, alpha, beta);
  if (!(peak > 0.0)) throw SolverError("transverse: eigenfunction vanished identically");
  alpha /= peak;
  beta /= peak;
  auto sq = [&](double z) {
    const double v = evaluate(level, params, alpha, beta, z).value;
    return v * v;
  };
  // Fixed rule: at tiny F the Airy phases carry ~1e-8 noise that an adaptive
  // rule would chase. Panels resolve n half-waves and the Airy decay scale.
  const int panels = 8 * (n + 4) + static_cast<int>(8.0 * std::cbrt(params.field) * d);
  const double norm2 = specfun::integrate_fixed(sq, 0.0, d, panels);
  const double inv = 1.0 / std::sqrt(norm2);
  alpha *= inv;
  beta *= inv;

  double gauge = 0.0;
  if (n == 1) gauge = evaluate(level, params, alpha, beta, 0.5 * d).value;
  if (gauge == 0.0) {
    const auto at0 = evaluate(level, params, alpha, beta, 0.0);
    gauge = bc == BoundaryType::DirichletDirichlet ? at0.derivative : at0.value;
  }
  if (gauge < 0.0) {
    alpha = -alpha;
    beta = -beta;
  }
  level.alpha = alpha;
  level.beta = beta;
  return level;
}

double bisect_root(const WaveguideParams& params, BoundaryType bc, double lo, double hi) {
  double mlo = determinant(params, bc, lo).mantissa;
  double mhi = determinant(params, bc, hi).mantissa;
  while (hi - lo > kRootRelative * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double mm = determinant(params, bc, mid).mantissa;
    if (mm == 0.0) return mid;
    if ((mm < 0) == (mlo < 0)) {
      lo = mid;
      mlo = mm;
    } else {
      hi = mid;
      mhi = mm;
    }
  }
  // Secant polish inside the final bracket.
  if (mhi != mlo) {
    const double s = lo - mlo * (hi - lo) / (mhi - mlo);
    if (s >= lo && s <= hi) return s;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

bool uses_trig_limit(const WaveguideParams& params) {
  const double unit = kPi / params.width;
  return params.field < kSmallFieldCutoff * unit * unit * unit;
}

Basis basis_for(const WaveguideParams& params) {
  if (uses_trig_limit(params)) return Basis::Trig;
  const double unit = kPi / params.width;
  const double cube_root = std::cbrt(params.field);
  return cube_root * cube_root < kLocalBasisCutoff * unit * unit ? Basis::Local : Basis::Airy;
}

ScaledDeterminant determinant(const WaveguideParams& params, BoundaryType bc, double lambda) {
  if (uses_trig_limit(params)) {
    const double k = std::sqrt(std::max(lambda, 0.0));
    const double kd = k * params.width;
    return {bc == BoundaryType::DirichletDirichlet ? -std::sin(kd) : std::cos(kd), 0.0};
  }
  if (basis_for(params) == Basis::Local) {
    const auto l0 = local_pair(params, lambda, 0.0);
    const auto ld = local_pair(params, lambda, params.width);
    if (bc == BoundaryType::DirichletDirichlet) return {l0.u * ld.v - ld.u * l0.v, 0.0};
    return {l0.up * ld.v - l0.vp * ld.u, 0.0};
  }
  const auto args = airy_args(params, lambda);
  const auto p0 = specfun::airy(args.x0);
  const auto pd = specfun::airy(args.x0 + args.cube_root_f * params.width);
  const double spread = pd.scale_exp - p0.scale_exp;  // >= 0
  const double damp = std::exp(-2.0 * spread);
  if (bc == BoundaryType::DirichletDirichlet) {
    // Ai(x0) Bi(xd) - Ai(xd) Bi(x0)
    return {p0.ai * pd.bi - pd.ai * p0.bi * damp, spread};
  }
  // Ai'(x0) Bi(xd) - Bi'(x0) Ai(xd)
  return {p0.aip * pd.bi - p0.bip * pd.ai * damp, spread};
}

std::vector<TransverseLevel> levels(const WaveguideParams& params, BoundaryType bc, int count) {
  params.validate();
  check_count(count);
  std::vector<TransverseLevel> out;
  out.reserve(count);
  if (uses_trig_limit(params)) {
    for (int n = 1; n <= count; ++n) {
      out.push_back(build_level(params, bc, n, trig_level(params, bc, n), Basis::Trig));
    }
    return out;
  }
  const Basis basis = basis_for(params);
  const double box = (kPi / params.width) * (kPi / params.width);
  const double cube_root = std::cbrt(params.field);
  const double step = std::max(box, cube_root * cube_root) / 16.0;
  // The potential is bounded by F d, so lambda_n <= (n pi / d)^2 + F d.
  const double limit = (count + 1.0) * (count + 1.0) * box + params.field * params.width + step;
  double lo = 0.0;
  double mlo = determinant(params, bc, lo).mantissa;
  int n = 0;
  while (n < count && lo < limit) {
    const double hi = lo + step;
    const double mhi = determinant(params, bc, hi).mantissa;
    if (mhi == 0.0 || (mhi < 0) != (mlo < 0)) {
      const double root = mhi == 0.0 ? hi : bisect_root(params, bc, lo, hi);
      ++n;
      out.push_back(build_level(params, bc, n, root, basis));
    }
    lo = hi;
    mlo = mhi;
  }
  if (n < count) {
    std::ostringstream msg;
    msg << "transverse: found " << n << " of " << count << " roots while scanning lambda in [0, "
        << limit << "]";
    throw SolverError(msg.str());
  }
  return out;
}

double level_value(const WaveguideParams& params, BoundaryType bc, int n) {
  return levels(params, bc, n).back().lambda;
}

ChiValue chi(const TransverseLevel& level, const WaveguideParams& params, double z) {
  return evaluate(level, params, level.alpha, level.beta, z);
}

double chi1_second_derivative(const TransverseLevel& level, const WaveguideParams& params,
                              double z) {
  return (params.field * z - level.lambda) * chi(level, params, z).value;
}

std::vector<double> fd_levels_oracle(const WaveguideParams& params, BoundaryType bc, int count,
                                     int nodes) {
  params.validate();
  if (nodes < 100) throw ValidationError("fd_levels_oracle: nodes must be >= 100");
  if (count < 1 || count > nodes) throw ValidationError("fd_levels_oracle: bad count");
  const double d = params.width;
  const bool dirichlet = bc == BoundaryType::DirichletDirichlet;
  const double h = dirichlet ? d / (nodes + 1) : d / nodes;
  const double ih2 = 1.0 / (h * h);
  std::vector<double> diag(nodes), off(nodes - 1, -ih2);
  for (int j = 0; j < nodes; ++j) {
    const double z = dirichlet ? (j + 1) * h : j * h;
    diag[j] = 2.0 * ih2 + params.field * z;
  }
  // Ghost node u_{-1} = u_1, symmetrized by the half weight of the boundary node.
  if (!dirichlet) off[0] = -std::sqrt(2.0) * ih2;

  auto count_below = [&](double x) {
    int negatives = 0;
    double q = diag[0] - x;
    if (q < 0) ++negatives;
    for (int j = 1; j < nodes; ++j) {
      if (q == 0.0) q = 1e-300;
      q = diag[j] - x - off[j - 1] * off[j - 1] / q;
      if (q < 0) ++negatives;
    }
    return negatives;
  };

  double gmin = 0.0, gmax = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double r = (j > 0 ? std::fabs(off[j - 1]) : 0.0) + (j + 1 < nodes ? std::fabs(off[j]) : 0.0);
    gmin = std::min(gmin, diag[j] - r);
    gmax = std::max(gmax, diag[j] + r);
  }
  std::vector<double> out;
  out.reserve(count);
  for (int k = 1; k <= count; ++k) {
    double lo = out.empty() ? gmin : out.back(), hi = gmax;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::fabs(hi)); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (count_below(mid) >= k) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

double asymptotic_weak(const WaveguideParams& params, BoundaryType bc, int n) {
  params.validate();
  if (n < 1) throw ValidationError("asymptotic_weak: n must be >= 1");
  const double d = params.width;
  const double d3f = d * d * d * params.field;
  double lead;
  if (bc == BoundaryType::DirichletDirichlet) {
    lead = n * kPi;
  } else {
    const int n0 = n - 1;  // published 0-based index
    lead = (2.0 * n0 + 1.0) * kPi / 2.0;
  }
  const double root = (lead + std::sqrt(lead * lead + d3f)) / (2.0 * d);
  return root * root;
}

StrongFieldEstimate asymptotic_strong(const WaveguideParams& params, BoundaryType bc, int n) {
  params.validate();
  if (n < 1) throw ValidationError("asymptotic_strong: n must be >= 1");
  if (!(params.field > 0.0)) throw DomainError("asymptotic_strong: requires F > 0");
  const double f = params.field;
  const double f23 = std::cbrt(f * f);
  StrongFieldEstimate out{};
  if (bc == BoundaryType::DirichletDirichlet) {
    out.published = std::cbrt(std::pow(1.5 * f * kPi * (2.0 * n - 0.25), 2.0));
    out.airy_zero = -specfun::airy_ai_zero(n) * f23;
  } else {
    const int n0 = n - 1;  // published 0-based index
    out.published = std::cbrt(std::pow(1.5 * f * kPi * (2.0 * n0 + 0.75), 2.0));
    out.airy_zero = -specfun::airy_aip_zero(n) * f23;
  }
  return out;
}

}  // namespace stark::transverse
