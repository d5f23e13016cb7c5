#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "horncode/geometry.hpp"
#include "horncode/kernels.hpp"
#include "horncode/surfaces.hpp"

using namespace horncode;

namespace {

std::vector<double> cloud(std::size_t n, std::uint64_t seed, double shift) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> p(3 * n);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = g(rng) + (i % 3 == 0 ? shift : 0.0);
  return p;
}

void BM_MinPairSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = cloud(n, 1, 0.0), b = cloud(n, 2, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(serial::min_pair_distance(a, b, 3));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void BM_MinPairParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = cloud(n, 1, 0.0), b = cloud(n, 2, 3.0);
  for (auto _ : state) benchmark::DoNotOptimize(min_pair_distance(a, b, 3));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

const Mesh& strip() {
  static const Mesh m = make_strip(Rational(1, 2), 1.0, 100.0, 8, 400);
  return m;
}

void BM_LneSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(serial::lne_constant(strip(), static_cast<std::size_t>(state.range(0))));
}

void BM_LneParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lne_constant(strip(), static_cast<std::size_t>(state.range(0))));
}

}  // namespace

BENCHMARK(BM_MinPairSerial)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_MinPairParallel)->Arg(256)->Arg(1024)->Arg(4096);
BENCHMARK(BM_LneSerial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LneParallel)->Arg(2000)->Unit(benchmark::kMillisecond);

int main(int argc, char** argv) {
  apply_thread_cap_from_env();
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
