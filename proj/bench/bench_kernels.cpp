// Parallel/fast kernels against their serial reference counterparts.

#include "pdcheb/cheb_core.hpp"
#include "pdcheb/perid_operator.hpp"
#include "pdcheb/reference.hpp"
#include "pdcheb/spacetime_solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

namespace {

using namespace pdcheb;

std::vector<double> random_samples(int len, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> out(len);
  for (auto& v : out) v = dist(rng);
  return out;
}

Eigen::MatrixXd gaussian_field(const ChebGrid& grid) {
  Eigen::MatrixXd u(grid.size(), grid.size());
  for (int n = 0; n < grid.size(); ++n) {
    for (int m = 0; m < grid.size(); ++m) u(n, m) = std::exp(-grid.node(n) * grid.node(n)) * (1.0 + 0.1 * grid.node(m));
  }
  return u;
}

void BM_forward_fftw(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)));
  const auto samples = random_samples(grid.size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(forward_1d(samples, grid));
}

void BM_forward_direct(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)));
  const auto samples = random_samples(grid.size(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::forward_1d_direct(samples, grid));
}

void BM_slices_batched(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)));
  const PeridynamicOperator op(Micromodulus::gaussian(0.1, false), grid);
  const Eigen::MatrixXd u = gaussian_field(grid);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply_slices(u));
}

void BM_slices_serial(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)));
  const PeridynamicOperator op(Micromodulus::gaussian(0.1, false), grid);
  const Eigen::MatrixXd u = gaussian_field(grid);
  for (auto _ : state) benchmark::DoNotOptimize(reference::apply_slices_serial(op.convolution(), u));
}

void BM_convolve_fast(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)));
  const ConvolutionOperator op(Micromodulus::gaussian(0.1, true), grid);
  const auto samples = random_samples(grid.size(), 2);
  const Coeffs1D coeffs = forward_1d(samples, grid);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_fast(op, coeffs));
}

void BM_convolve_direct(benchmark::State& state) {
  const ChebGrid grid(static_cast<int>(state.range(0)));
  const Micromodulus kernel = Micromodulus::gaussian(0.1, true);
  const auto samples = random_samples(grid.size(), 2);
  for (auto _ : state) benchmark::DoNotOptimize(convolve_direct(kernel, samples, grid));
}

void BM_spacetime_residual(benchmark::State& state) {
  ProblemSpec problem;
  problem.n_max = static_cast<int>(state.range(0));
  problem.kernel = Micromodulus::gaussian(0.1, false);
  problem.u0 = InitialData([](double x) { return std::exp(-x * x); });
  const SpaceTimeSystem system(problem);
  const NodalField2D field = initial_guess(problem);
  for (auto _ : state) benchmark::DoNotOptimize(system.residual(field));
}

}  // namespace

BENCHMARK(BM_forward_fftw)->RangeMultiplier(2)->Range(32, 1024);
BENCHMARK(BM_forward_direct)->RangeMultiplier(2)->Range(32, 1024);
BENCHMARK(BM_slices_batched)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_slices_serial)->RangeMultiplier(2)->Range(32, 256);
BENCHMARK(BM_convolve_fast)->RangeMultiplier(2)->Range(32, 128);
BENCHMARK(BM_convolve_direct)->RangeMultiplier(2)->Range(32, 128);
BENCHMARK(BM_spacetime_residual)->RangeMultiplier(2)->Range(32, 256);

BENCHMARK_MAIN();
