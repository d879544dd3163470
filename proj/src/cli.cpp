#include "stark/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stark/bracket.hpp"
#include "stark/certify.hpp"
#include "stark/errors.hpp"
#include "stark/fd2d.hpp"
#include "stark/specfun.hpp"
#include "stark/transverse.hpp"

namespace stark::cli {
namespace {

using nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";

struct Output {
  std::string method;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  ordered_json result;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void require_range(int value, int lo, int hi, const char* name) {
  require(value >= lo && value <= hi, std::string("--") + name + " must be in [" + std::to_string(lo) +
                                          ", " + std::to_string(hi) + "]");
}

fd2d::InnerSolver parse_solver(const std::string& text) {
  if (text == "cholesky") return fd2d::InnerSolver::Cholesky;
  if (text == "cg") return fd2d::InnerSolver::Cg;
  throw ValidationError("--solver must be cholesky or cg");
}

ordered_json params_json(const WaveguideParams& p) {
  return {{"F", p.field}, {"d", p.width}, {"a", p.radius}};
}

ordered_json config_json(const RunConfig& c) {
  ordered_json j;
  j["command"] = c.command;
  j["params"] = params_json(c.params);
  j["bc"] = c.bc;
  j["count"] = c.count;
  j["method"] = c.method;
  j["nodes"] = c.nodes;
  j["below"] = c.below ? ordered_json(*c.below) : ordered_json(nullptr);
  j["n_max"] = c.n_max;
  j["m_max"] = c.m_max;
  j["k_max"] = c.k_max;
  j["i"] = c.i;
  j["window"] = c.window;
  j["nr"] = c.nr;
  j["nz"] = c.nz;
  j["r_max"] = c.r_max ? ordered_json(*c.r_max) : ordered_json(nullptr);
  j["m"] = c.m;
  j["k"] = c.k;
  j["solver"] = c.solver;
  j["max_iterations"] = c.max_iterations;
  j["a_min"] = c.a_min;
  j["a_max"] = c.a_max;
  j["steps"] = c.steps;
  j["i_max"] = c.i_max;
  j["thresholds"] = c.thresholds;
  j["format"] = c.format;
  j["out"] = c.out;
  return j;
}

ordered_json tolerances_json() {
  namespace t = specfun::tolerances;
  return {{"version", kVersion},
          {"airy_relative", t::kAiryRelative},
          {"bessel_relative", t::kBesselRelative},
          {"bessel_zero_absolute", t::kBesselZeroAbsolute},
          {"transverse_root_relative", 1e-10},
          {"fd2d_residual", fd2d::EigOptions{}.residual_tol},
          {"fd2d_eigenvalue_change", 1e-12},
          {"certify_quadrature_relative", 1e-10}};
}

Output run_levels(const RunConfig& c) {
  Output out;
  out.method = c.method;
  const BoundaryType bc = parse_boundary(c.bc);
  ordered_json rows = ordered_json::array();
  if (c.method == "exact") {
    out.header = {"n", "lambda"};
    for (const auto& level : transverse::levels(c.params, bc, c.count)) {
      out.rows.push_back({std::to_string(level.n), format_double(level.lambda)});
      rows.push_back({{"n", level.n},
                      {"lambda", level.lambda},
                      {"alpha", level.alpha},
                      {"beta", level.beta},
                      {"basis", level.basis == transverse::Basis::Airy ? "airy" : "trig"}});
    }
  } else if (c.method == "fd") {
    out.header = {"n", "lambda"};
    const auto values = transverse::fd_levels_oracle(c.params, bc, c.count, c.nodes);
    for (std::size_t n = 0; n < values.size(); ++n) {
      out.rows.push_back({std::to_string(n + 1), format_double(values[n])});
      rows.push_back({{"n", n + 1}, {"lambda", values[n]}});
    }
  } else if (c.method == "asymptotic-weak") {
    out.header = {"n", "lambda"};
    for (int n = 1; n <= c.count; ++n) {
      const double v = transverse::asymptotic_weak(c.params, bc, n);
      out.rows.push_back({std::to_string(n), format_double(v)});
      rows.push_back({{"n", n}, {"lambda", v}});
    }
  } else {
    out.header = {"n", "published", "airy_zero", "exact", "ratio_published_to_exact"};
    const auto exact = transverse::levels(c.params, bc, c.count);
    for (int n = 1; n <= c.count; ++n) {
      const auto s = transverse::asymptotic_strong(c.params, bc, n);
      const double ex = exact[n - 1].lambda;
      out.rows.push_back({std::to_string(n), format_double(s.published), format_double(s.airy_zero),
                          format_double(ex), format_double(s.published / ex)});
      rows.push_back({{"n", n},
                      {"published", s.published},
                      {"airy_zero", s.airy_zero},
                      {"exact", ex},
                      {"ratio_published_to_exact", s.published / ex}});
    }
    out.result["published_convention"] = true;
  }
  out.result["bc"] = std::string(to_string(bc));
  out.result["levels"] = rows;
  return out;
}

Output run_bracket(const RunConfig& c) {
  Output out;
  out.method = "exact";
  const auto w = bracket::window(c.params);
  const double below = c.below.value_or(w.upper);
  const auto levels = bracket::dirichlet_disc_levels(c.params, below, c.n_max, c.m_max, c.k_max);
  out.header = {"n", "m", "k", "lambda", "multiplicity"};
  ordered_json entries = ordered_json::array();
  for (const auto& e : levels.entries) {
    out.rows.push_back({std::to_string(e.n), std::to_string(e.m), std::to_string(e.k), format_double(e.lambda),
                        std::to_string(e.multiplicity)});
    entries.push_back({{"n", e.n}, {"m", e.m}, {"k", e.k}, {"lambda", e.lambda}, {"multiplicity", e.multiplicity}});
  }
  out.result["window"] = {{"lower", w.lower}, {"upper", w.upper}};
  out.result["below"] = below;
  out.result["degenerate_window"] = levels.degenerate_window;
  out.result["higher_transverse_present"] = levels.higher_transverse_present;
  out.result["count_certified"] = bracket::count_certified(c.params);
  out.result["entries"] = entries;
  return out;
}

Output run_threshold(const RunConfig& c) {
  Output out;
  out.method = "exact";
  const double a_star = bracket::sufficient_radius(c.params, c.i);
  const auto zero = specfun::sorted_bessel_zeros(c.i).back();
  out.header = {"i", "a_star"};
  out.rows.push_back({std::to_string(c.i), format_double(a_star)});
  const auto w = bracket::window(c.params);
  out.result = {{"i", c.i},
                {"a_star", a_star},
                {"zero", {{"x", zero.x}, {"m", zero.m}, {"k", zero.k}}},
                {"window", {{"lower", w.lower}, {"upper", w.upper}}}};
  return out;
}

Output run_certify(const RunConfig& c) {
  Output out;
  out.method = "quadrature";
  const auto cert = certify::certify(c.params);
  out.header = {"F", "d", "a", "b", "tau", "eps", "q_value", "A", "B", "C", "shrink_steps", "valid"};
  out.rows.push_back({format_double(c.params.field), format_double(c.params.width), format_double(c.params.radius),
                      format_double(cert.spec.plateau), format_double(cert.spec.tau), format_double(cert.spec.eps),
                      format_double(cert.q_value), format_double(cert.coeffs.a), format_double(cert.coeffs.b),
                      format_double(cert.coeffs.c), std::to_string(cert.shrink_steps),
                      cert.valid() ? "true" : "false"});
  out.result = {{"q_value", cert.q_value},
                {"valid", cert.valid()},
                {"trial",
                 {{"b", cert.spec.plateau},
                  {"tau", cert.spec.tau},
                  {"eps", cert.spec.eps},
                  {"bump", cert.spec.bump},
                  {"cutoff", cert.spec.cutoff}}},
                {"coefficients", {{"A", cert.coeffs.a}, {"B", cert.coeffs.b}, {"C", cert.coeffs.c}}},
                {"decomposition", cert.coeffs.a * cert.spec.tau + cert.coeffs.b * cert.spec.eps * cert.spec.eps -
                                      cert.coeffs.c * cert.spec.eps},
                {"shrink_steps", cert.shrink_steps},
                {"window", {{"lower", cert.window.lower}, {"upper", cert.window.upper}}}};
  return out;
}

Output run_solve2d(const RunConfig& c) {
  Output out;
  out.method = "fd";
  const auto kind = fd2d::parse_window(c.window);
  fd2d::EigOptions options;
  options.solver = parse_solver(c.solver);
  options.max_iterations = c.max_iterations;
  const fd2d::GridDensity density{c.nr, c.nz};
  fd2d::EigResult r;
  if (kind == fd2d::WindowKind::TruncatedFull) {
    r = fd2d::window_ground_state(c.params, c.r_max.value_or(8.0 * c.params.radius), density, c.k, c.m, options);
  } else {
    require(!c.r_max || *c.r_max == c.params.radius, "--r-max must equal --a for inner-cylinder problems");
    r = fd2d::inner_cylinder(c.params, kind, density, c.k, c.m, options);
  }
  out.header = {"k", "lambda", "residual", "error_estimate", "below_edge"};
  ordered_json values = ordered_json::array();
  for (std::size_t q = 0; q < r.values.size(); ++q) {
    const bool below = r.below_edge[q];
    out.rows.push_back({std::to_string(q + 1), format_double(r.values[q]), format_double(r.residuals[q]),
                        format_double(r.error_estimates[q]), below ? "true" : "false"});
    values.push_back({{"k", q + 1},
                      {"lambda", r.values[q]},
                      {"residual", r.residuals[q]},
                      {"error_estimate", r.error_estimates[q]},
                      {"below_edge", below}});
  }
  out.result = {{"window_kind", fd2d::to_string(kind)},
                {"grid", {{"nr", r.grid.nr}, {"nz", r.grid.nz}, {"r_max", r.grid.r_max}, {"d", r.grid.d}}},
                {"m", c.m},
                {"shift", r.shift},
                {"iterations", r.iterations},
                {"window", {{"lower", r.window.lower}, {"upper", r.window.upper}}},
                {"eigenvalues", values}};
  return out;
}

Output run_figure(const RunConfig& c) {
  Output out;
  out.method = "exact";
  const auto table = bracket::figure_curves(c.params, c.a_min, c.a_max, c.steps, c.i_max, c.thresholds);
  out.header.push_back("a");
  for (int q = 1; q <= c.i_max; ++q) out.header.push_back("curve" + std::to_string(q));
  out.header.push_back("edge");
  ordered_json rows = ordered_json::array();
  for (const auto& row : table.rows) {
    std::vector<std::string> line{format_double(row.a)};
    for (double v : row.curves) line.push_back(format_double(v));
    line.push_back(format_double(row.edge));
    out.rows.push_back(std::move(line));
    rows.push_back({{"a", row.a}, {"curves", row.curves}, {"edge", row.edge}});
  }
  out.result = {{"window", {{"lower", table.window.lower}, {"upper", table.window.upper}}},
                {"zeros", table.zeros},
                {"rows", rows}};
  return out;
}

Output dispatch(const RunConfig& c) {
  if (c.command == "levels") return run_levels(c);
  if (c.command == "bracket") return run_bracket(c);
  if (c.command == "threshold") return run_threshold(c);
  if (c.command == "certify") return run_certify(c);
  if (c.command == "solve2d") return run_solve2d(c);
  return run_figure(c);
}

std::string to_csv(const Output& o) {
  std::ostringstream s;
  auto line = [&s](const std::vector<std::string>& cells) {
    for (std::size_t q = 0; q < cells.size(); ++q) s << (q ? "," : "") << cells[q];
    s << '\n';
  };
  line(o.header);
  for (const auto& row : o.rows) line(row);
  return s.str();
}

std::string failure_report(const RunConfig& c, const SolverError& e) {
  double best = std::nan(""), residual = std::nan("");
  if (const auto* ce = dynamic_cast<const ConvergenceError*>(&e)) {
    best = ce->best_value();
    residual = ce->residual();
  } else if (const auto* qe = dynamic_cast<const QuadratureError*>(&e)) {
    best = qe->best_estimate();
  }
  if (c.format == "json") {
    ordered_json j;
    j["status"] = "failure";
    j["error"] = e.what();
    j["best_value"] = std::isnan(best) ? ordered_json(nullptr) : ordered_json(best);
    j["residual"] = std::isnan(residual) ? ordered_json(nullptr) : ordered_json(residual);
    j["config"] = config_json(c);
    j["tolerances"] = tolerances_json();
    return j.dump(2) + "\n";
  }
  std::string msg = e.what();
  for (char& ch : msg) {
    if (ch == ',' || ch == '\n') ch = ';';
  }
  return "status,error,best_value,residual\nfailure," + msg + "," +
         (std::isnan(best) ? "" : format_double(best)) + "," + (std::isnan(residual) ? "" : format_double(residual)) +
         "\n";
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw ValidationError("cannot open --out path '" + c.out + "'");
  file << text;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void RunConfig::validate() const {
  static const std::vector<std::string> commands{"levels", "bracket", "threshold", "certify", "solve2d", "figure"};
  require(std::find(commands.begin(), commands.end(), command) != commands.end(), "unknown command '" + command + "'");
  params.validate();
  require(format == "csv" || format == "json", "--format must be csv or json");
  if (command == "levels") {
    parse_boundary(bc);
    require(method == "exact" || method == "fd" || method == "asymptotic-weak" || method == "asymptotic-strong",
            "--method must be exact, fd, asymptotic-weak or asymptotic-strong");
    require_range(count, 1, 100, "count");
    require_range(nodes, 100, 1'000'000, "nodes");
  } else if (command == "bracket") {
    require_range(n_max, 1, 100, "n-max");
    require_range(m_max, 0, specfun::tolerances::kMaxBesselOrder, "m-max");
    require_range(k_max, 1, specfun::tolerances::kMaxBesselZeroIndex, "k-max");
    require(!below || std::isfinite(*below), "--below must be finite");
  } else if (command == "threshold") {
    require_range(i, 1, 1000, "i");
  } else if (command == "certify") {
    require(params.radius > 0.0, "--a must be positive");
  } else if (command == "solve2d") {
    require(params.radius > 0.0, "--a must be positive");
    fd2d::parse_window(window);
    parse_solver(solver);
    require_range(nr, 8, 4096, "nr");
    require_range(nz, 8, 4096, "nz");
    require_range(m, 0, 64, "m");
    require_range(k, 1, 10, "k");
    require_range(max_iterations, 1, 100000, "max-iterations");
    require(!r_max || (std::isfinite(*r_max) && *r_max > 0.0), "--r-max must be positive");
  } else {
    require(a_min > 0.0 && std::isfinite(a_max) && a_max > a_min, "need 0 < --a-min < --a-max");
    require_range(steps, 2, 1'000'000, "steps");
    require_range(i_max, 1, 1000, "i-max");
  }
}

std::optional<RunConfig> parse(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig c;
  CLI::App app{"Bound states of a Stark-perturbed layer with a Neumann window"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--F", c.params.field, "field intensity F >= 0");
  app.add_option("--d", c.params.width, "layer width d > 0");
  app.add_option("--a", c.params.radius, "window radius a >= 0");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "write output to this path");

  auto* levels = app.add_subcommand("levels", "transverse eigenvalues");
  levels->add_option("--bc", c.bc, "dirichlet or neumann");
  levels->add_option("--count", c.count, "number of levels (<= 100)");
  levels->add_option("--method", c.method, "exact, fd, asymptotic-weak, asymptotic-strong");
  levels->add_option("--nodes", c.nodes, "finite-difference nodes for --method fd");

  auto* bracket = app.add_subcommand("bracket", "inner-cylinder Dirichlet levels below a cut");
  bracket->add_option("--below", c.below, "energy cut (default: essential-spectrum edge)");
  bracket->add_option("--n-max", c.n_max, "transverse index cap");
  bracket->add_option("--m-max", c.m_max, "angular order cap");
  bracket->add_option("--k-max", c.k_max, "radial index cap");

  auto* threshold = app.add_subcommand("threshold", "sufficient window radius a*_i");
  threshold->add_option("--i", c.i, "index of the sorted Bessel zero");

  app.add_subcommand("certify", "variational bound-state certificate");

  auto* solve2d = app.add_subcommand("solve2d", "axisymmetric finite-difference eigenvalues");
  solve2d->add_option("--window", c.window, "inner-dirichlet, inner-neumann or truncated-full");
  solve2d->add_option("--nr", c.nr, "radial cells per window radius");
  solve2d->add_option("--nz", c.nz, "vertical cells");
  solve2d->add_option("--r-max", c.r_max, "truncation radius (default 8a)");
  solve2d->add_option("--m", c.m, "angular order");
  solve2d->add_option("--k", c.k, "number of eigenvalues (<= 10)");
  solve2d->add_option("--solver", c.solver, "cholesky or cg");
  solve2d->add_option("--max-iterations", c.max_iterations, "subspace iteration cap");

  auto* figure = app.add_subcommand("figure", "threshold curves against the window radius");
  figure->add_option("--a-min", c.a_min, "smallest radius");
  figure->add_option("--a-max", c.a_max, "largest radius");
  figure->add_option("--steps", c.steps, "sweep points (>= 2)");
  figure->add_option("--i-max", c.i_max, "number of curves");
  figure->add_flag("--thresholds", c.thresholds, "also emit rows at each a*_i");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ValidationError(e.what());
  }
  for (auto* sub : app.get_subcommands()) c.command = sub->get_name();
  c.validate();
  return c;
}

std::string execute(const RunConfig& c) {
  c.validate();
  Output o = dispatch(c);
  if (c.format == "csv") return to_csv(o);
  ordered_json j;
  j["status"] = "ok";
  j["config"] = config_json(c);
  j["method"] = o.method;
  j["tolerances"] = tolerances_json();
  j["result"] = std::move(o.result);
  return j.dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
  const auto doc = ordered_json::parse(text);
  const auto& j = doc.at("config");
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  c.params.field = j.at("params").at("F").get<double>();
  c.params.width = j.at("params").at("d").get<double>();
  c.params.radius = j.at("params").at("a").get<double>();
  c.bc = j.at("bc").get<std::string>();
  c.count = j.at("count").get<int>();
  c.method = j.at("method").get<std::string>();
  c.nodes = j.at("nodes").get<int>();
  if (!j.at("below").is_null()) c.below = j.at("below").get<double>();
  c.n_max = j.at("n_max").get<int>();
  c.m_max = j.at("m_max").get<int>();
  c.k_max = j.at("k_max").get<int>();
  c.i = j.at("i").get<int>();
  c.window = j.at("window").get<std::string>();
  c.nr = j.at("nr").get<int>();
  c.nz = j.at("nz").get<int>();
  if (!j.at("r_max").is_null()) c.r_max = j.at("r_max").get<double>();
  c.m = j.at("m").get<int>();
  c.k = j.at("k").get<int>();
  c.solver = j.at("solver").get<std::string>();
  c.max_iterations = j.at("max_iterations").get<int>();
  c.a_min = j.at("a_min").get<double>();
  c.a_max = j.at("a_max").get<double>();
  c.steps = j.at("steps").get<int>();
  c.i_max = j.at("i_max").get<int>();
  c.thresholds = j.at("thresholds").get<bool>();
  c.format = j.at("format").get<std::string>();
  c.out = j.at("out").get<std::string>();
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::optional<RunConfig> config;
  try {
    config = parse(args, out);
    if (!config) return 0;
    emit(*config, execute(*config), out);
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    try {
      emit(*config, failure_report(*config, e), out);
    } catch (const ValidationError& io) {
      err << "error: " << io.what() << '\n';
    }
    return 1;
  }
}

}  // namespace stark::cli
