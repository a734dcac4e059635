#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "wobble/kernels.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

std::vector<double> positive_half_grid(std::size_t p) {
  std::vector<double> v(p + 1);
  for (std::size_t j = 0; j <= p; ++j) v[j] = std::exp(0.3 * std::cos(M_PI * j / p));
  return v;
}

template <double (*Fn)(int, const std::vector<double>&)>
void BM_FejerQuadrature(benchmark::State& state) {
  const auto phi = positive_half_grid(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Fn(1000, phi));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <std::vector<double> (*Fn)(double, const std::vector<double>&, const std::vector<double>&)>
void BM_CosineEval(benchmark::State& state) {
  const auto a = random_vector(static_cast<std::size_t>(state.range(0)), 1);
  std::vector<double> x(4096);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = M_PI * i / x.size();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(0.1, a, x));
  state.SetItemsProcessed(state.iterations() * state.range(0) * static_cast<long>(x.size()));
}

template <std::vector<double> (*Fn)(const std::vector<double>&, std::size_t)>
void BM_OuterSum(benchmark::State& state) {
  const std::size_t d = 4;
  const auto rows = random_vector(static_cast<std::size_t>(state.range(0)) * d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(rows, d));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_FejerQuadrature<wobble::kernels::serial::fejer_quadrature>)->Name("fejer_quadrature/serial")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_FejerQuadrature<wobble::kernels::omp::fejer_quadrature>)->Name("fejer_quadrature/omp")->Range(1 << 12, 1 << 20);
BENCHMARK(BM_CosineEval<wobble::kernels::serial::cosine_eval>)->Name("cosine_eval/serial")->Range(16, 1024);
BENCHMARK(BM_CosineEval<wobble::kernels::omp::cosine_eval>)->Name("cosine_eval/omp")->Range(16, 1024);
BENCHMARK(BM_OuterSum<wobble::kernels::serial::outer_sum>)->Name("outer_sum/serial")->Range(1 << 10, 1 << 16);
BENCHMARK(BM_OuterSum<wobble::kernels::omp::outer_sum>)->Name("outer_sum/omp")->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();
