#pragma once

// Command-line front end. Commands: levels, bracket, threshold, certify,
// solve2d, figure. Exit status 0 on success, 1 on solver failure (a failure
// report is still written), 2 on invalid input.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "stark/params.hpp"

namespace stark::cli {

struct RunConfig {
  std::string command;
  WaveguideParams params;

  // levels
  std::string bc = "dirichlet";
  int count = 5;
  std::string method = "exact";  // exact | fd | asymptotic-weak | asymptotic-strong
  int nodes = 4000;

  // bracket
  std::optional<double> below;  // default lambda_0^1
  int n_max = 10;
  int m_max = 64;
  int k_max = 1000;

  // threshold
  int i = 1;

  // solve2d
  std::string window = "truncated-full";
  int nr = 64;  // radial cells per window radius
  int nz = 64;
  std::optional<double> r_max;  // default 8a for the truncated problem
  int m = 0;
  int k = 1;
  std::string solver = "cholesky";
  int max_iterations = 400;

  // figure
  double a_min = 0.5;
  double a_max = 10.0;
  int steps = 200;
  int i_max = 3;
  bool thresholds = false;

  std::string format = "csv";
  std::string out;

  // Throws ValidationError on out-of-range options.
  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

// Parses argv (argv[0] is the program name). Throws ValidationError on bad
// flags. Returns nullopt when help was requested and printed to `out`.
std::optional<RunConfig> parse(const std::vector<std::string>& args, std::ostream& out);

// Runs a validated config and returns the serialized output.
std::string execute(const RunConfig& config);

// Rebuilds the RunConfig carried in a JSON document produced by `execute`.
RunConfig config_from_json(const std::string& text);

// Full pipeline with exit codes; writes to `out` or the --out file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

}  // namespace stark::cli
