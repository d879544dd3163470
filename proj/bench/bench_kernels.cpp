// Serial references against the OpenMP kernels on a truncated windowed operator.

#include <benchmark/benchmark.h>

#include <vector>

#include "stark/bracket.hpp"
#include "stark/fd2d.hpp"
#include "stark/kernels.hpp"

namespace {

using namespace stark;

WaveguideParams params() {
  WaveguideParams p;
  p.field = 1.0;
  p.width = 3.141592653589793;
  p.radius = 3.0;
  return p;
}

// nr = nz = 128 per window radius, r_max = 8a: about 131k unknowns.
const fd2d::Operator& op() {
  static const fd2d::Operator o = [] {
    const auto p = params();
    const auto g = fd2d::matched_grid(p, fd2d::WindowKind::TruncatedFull, 8.0 * p.radius, {128, 128});
    return fd2d::assemble(p, g, {fd2d::WindowKind::TruncatedFull, 0});
  }();
  return o;
}

std::vector<double> ones(int n) { return std::vector<double>(n, 1.0); }

void BM_spmv_serial(benchmark::State& state) {
  const auto& a = op().matrix;
  const auto x = ones(a.rows);
  std::vector<double> y(a.rows);
  for (auto _ : state) {
    kernels::spmv_serial(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.nnz()));
}

void BM_spmv_parallel(benchmark::State& state) {
  const auto& a = op().matrix;
  const auto x = ones(a.rows);
  std::vector<double> y(a.rows);
  for (auto _ : state) {
    kernels::spmv(a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(a.nnz()));
}

void BM_dot_serial(benchmark::State& state) {
  const auto x = ones(op().matrix.rows);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_serial(x, x));
}

void BM_dot_parallel(benchmark::State& state) {
  const auto x = ones(op().matrix.rows);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot(x, x));
}

void BM_figure_serial(benchmark::State& state) {
  const auto p = params();
  for (auto _ : state) benchmark::DoNotOptimize(bracket::figure_curves_serial(p, 0.5, 10.0, 200000, 3));
}

void BM_figure_parallel(benchmark::State& state) {
  const auto p = params();
  for (auto _ : state) benchmark::DoNotOptimize(bracket::figure_curves(p, 0.5, 10.0, 200000, 3));
}

}  // namespace

BENCHMARK(BM_spmv_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_spmv_parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_dot_serial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_dot_parallel)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_figure_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_figure_parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
