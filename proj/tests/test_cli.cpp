#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "stark/cli.hpp"
#include "stark/errors.hpp"

using namespace stark;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "stark");
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kPiText = "3.141592653589793";

}  // namespace

TEST_CASE("Levels example") {
  const auto r = invoke({"levels", "--F", "0", "--d", kPiText, "--bc", "dirichlet", "--count", "3"});
  REQUIRE(r.status == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0] == std::vector<std::string>{"n", "lambda"});
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::stoi(rows[n][0]) == n);
    CHECK(std::stod(rows[n][1]) == doctest::Approx(n * n).epsilon(1e-12));
  }
}

TEST_CASE("Threshold example") {
  const auto r = invoke({"threshold", "--F", "0", "--d", kPiText, "--i", "1"});
  REQUIRE(r.status == 0);
  const auto rows = csv(r.out);
  REQUIRE(rows.size() == 2);
  const double expected = static_cast<double>(oracle::bessel_zero(0, 1)) / std::sqrt(0.75);
  CHECK(std::stod(rows[1][1]) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rows[1][1].substr(0, 7) == "2.77685");
}

TEST_CASE("Certify example") {
  const auto r = invoke({"certify", "--F", "1", "--d", "1", "--a", "1", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("status") == "ok");
  CHECK(j.at("result").at("q_value").get<double>() < 0.0);
  CHECK(j.at("result").at("valid").get<bool>());
}

TEST_CASE("Strong-field asymptotics carry the published-convention flag") {
  const auto r = invoke({"levels", "--F", "10000", "--d", "1", "--count", "2", "--method",
                         "asymptotic-strong", "--format", "json"});
  REQUIRE(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("method") == "asymptotic-strong");
  CHECK(j.at("result").at("published_convention").get<bool>());
  const auto c = invoke({"levels", "--F", "10000", "--d", "1", "--count", "2", "--method", "asymptotic-strong"});
  CHECK(csv(c.out)[0] == std::vector<std::string>{"n", "published", "airy_zero", "exact", "ratio_published_to_exact"});
}

TEST_CASE("Other commands produce their tables") {
  auto r = invoke({"bracket", "--F", "0", "--d", kPiText, "--a", "10"});
  REQUIRE(r.status == 0);
  auto rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"n", "m", "k", "lambda", "multiplicity"});
  CHECK(std::stod(rows[1][3]) == doctest::Approx(0.307832).epsilon(1e-6));

  r = invoke({"solve2d", "--F", "1", "--d", "1", "--a", "1", "--nr", "8", "--nz", "8", "--k", "2"});
  REQUIRE(r.status == 0);
  rows = csv(r.out);
  CHECK(rows[0] == std::vector<std::string>{"k", "lambda", "residual", "error_estimate", "below_edge"});
  CHECK(rows.size() == 3);

  for (const auto& method : {"fd", "asymptotic-weak"}) {
    r = invoke({"levels", "--F", "0.01", "--d", "1", "--count", "2", "--method", method, "--format", "json"});
    CHECK(r.status == 0);
    CHECK(nlohmann::json::parse(r.out).at("method") == method);
  }
}

TEST_CASE("Figure sweeps") {
  for (const char* f : {"0.01", "100"}) {
    const auto r = invoke({"figure", "--F", f, "--d", "1", "--a-min", "0.5", "--a-max", "10", "--steps", "200"});
    REQUIRE(r.status == 0);
    const auto rows = csv(r.out);
    REQUIRE(rows.size() == 201);
    CHECK(rows[0] == std::vector<std::string>{"a", "curve1", "curve2", "curve3", "edge"});
    const double edge = std::stod(rows[1][4]);
    // Some curve starts above the edge and ends below it.
    bool crossing = false;
    for (int c = 1; c <= 3; ++c) {
      crossing = crossing || (std::stod(rows[1][c]) > edge && std::stod(rows.back()[c]) < edge);
    }
    CHECK(crossing);
    for (size_t i = 1; i < rows.size(); ++i) {
      CHECK(std::stod(rows[i][4]) == edge);
      for (int c = 1; c <= 3; ++c) {
        if (i > 1) CHECK(std::stod(rows[i][c]) < std::stod(rows[i - 1][c]));
      }
    }
  }
  // The strong-field gap is wider.
  auto gap = [](const char* f) {
    const auto rows = csv(invoke({"figure", "--F", f, "--d", "1", "--steps", "2"}).out);
    const double a = std::stod(rows[1][0]), curve = std::stod(rows[1][1]), edge = std::stod(rows[1][4]);
    const double x01 = static_cast<double>(oracle::bessel_zero(0, 1));
    return edge - (curve - x01 * x01 / (a * a));
  };
  CHECK(gap("100") > gap("0.01"));
}

TEST_CASE("Threshold rows in the figure") {
  const auto r = invoke({"figure", "--F", "1", "--d", "1", "--a-min", "0.5", "--a-max", "10", "--steps", "50",
                         "--thresholds"});
  REQUIRE(r.status == 0);
  const auto rows = csv(r.out);
  CHECK(rows.size() == 1 + 50 + 3);
  const auto star = csv(invoke({"threshold", "--F", "1", "--d", "1", "--i", "1"}).out);
  bool found = false;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == star[1][1]) {
      found = true;
      CHECK(std::fabs(std::stod(rows[i][1]) - std::stod(rows[i][4])) <= 1e-9 * std::stod(rows[i][4]));
    }
  }
  CHECK(found);
}

TEST_CASE("Outputs are deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"levels", "--F", "1", "--d", "1", "--count", "5", "--format", "json"},
           {"figure", "--F", "1", "--d", "1", "--steps", "20"},
           {"certify", "--F", "10", "--d", "1", "--a", "0.1"},
           {"solve2d", "--F", "1", "--d", "1", "--a", "1", "--nr", "8", "--nz", "8", "--format", "json"}}) {
    const auto a = invoke(args), b = invoke(args);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("JSON round trip reproduces the configuration") {
  const std::vector<std::vector<std::string>> cases = {
      {"levels", "--F", "0.3", "--d", "1.7", "--bc", "neumann", "--count", "4", "--method", "fd", "--nodes", "500"},
      {"bracket", "--F", "0.1", "--d", "2", "--a", "3.3", "--below", "5", "--n-max", "3", "--m-max", "7"},
      {"threshold", "--F", "2.5", "--d", "1", "--i", "3"},
      {"solve2d", "--F", "1", "--d", "1", "--a", "1", "--nr", "8", "--nz", "10", "--r-max", "5", "--m", "1"},
      {"figure", "--F", "0.01", "--d", "1", "--a-min", "0.25", "--a-max", "3", "--steps", "7", "--thresholds"}};
  for (auto args : cases) {
    args.push_back("--format");
    args.push_back("json");
    std::vector<std::string> argv = args;
    argv.insert(argv.begin(), "stark");
    std::ostringstream sink;
    const auto parsed = cli::parse(argv, sink);
    REQUIRE(parsed.has_value());
    const auto r = invoke(args);
    REQUIRE(r.status == 0);
    CHECK(cli::config_from_json(r.out) == *parsed);
  }
}

TEST_CASE("Invalid input exits with status 2") {
  for (const auto& args : std::vector<std::vector<std::string>>{{"levels", "--F", "-1"},
                                                                {"levels", "--d", "0"},
                                                                {"levels", "--count", "0"},
                                                                {"levels", "--bc", "robin"},
                                                                {"bracket", "--a", "-2"},
                                                                {"figure", "--a-min", "3", "--a-max", "1"},
                                                                {"solve2d", "--a", "1", "--nr", "2"},
                                                                {"levels", "--format", "xml"},
                                                                {"unknown"},
                                                                {"levels", "--bogus", "1"}}) {
    const auto r = invoke(args);
    CHECK(r.status == 2);
    CHECK_FALSE(r.err.empty());
  }
}

TEST_CASE("Solver failure exits with status 1 and a report") {
  auto r = invoke({"solve2d", "--F", "1", "--d", "1", "--a", "1", "--nr", "8", "--nz", "8", "--max-iterations", "1"});
  CHECK(r.status == 1);
  CHECK(r.out.rfind("status,error,best_value,residual\nfailure,", 0) == 0);
  r = invoke({"solve2d", "--F", "1", "--d", "1", "--a", "1", "--nr", "8", "--nz", "8", "--max-iterations", "1",
              "--format", "json"});
  CHECK(r.status == 1);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("status") == "failure");
}

TEST_CASE("Output file") {
  const auto path = (std::filesystem::temp_directory_path() / "stark_cli_test.csv").string();
  std::remove(path.c_str());
  const auto r = invoke({"levels", "--F", "0", "--d", kPiText, "--count", "2", "--out", path});
  REQUIRE(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str() == "n,lambda\n1,1\n2,4\n");
  std::remove(path.c_str());
  CHECK(invoke({"levels", "--out", "/nonexistent-dir/x.csv"}).status == 2);
}

TEST_CASE("Shortest round-trip formatting") {
  CHECK(cli::format_double(1.0) == "1");
  CHECK(cli::format_double(0.1) == "0.1");
  for (double x : {3.141592653589793, 1e-300, 2.776853366179491, -7.5e22}) {
    CHECK(std::stod(cli::format_double(x)) == x);
  }
}
