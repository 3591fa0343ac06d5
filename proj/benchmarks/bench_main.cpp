#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "safe/clustering.hpp"
#include "safe/reduction.hpp"

namespace {

safe::FeatureMatrix random_matrix(std::size_t n, std::size_t d, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<std::string> ids;
  std::vector<double> v(n * d);
  for (std::size_t i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
  for (auto& x : v) x = nd(gen);
  return safe::FeatureMatrix(ids, v, d);
}

void BM_DistanceMatrix(benchmark::State& state) {
  const auto x = random_matrix(std::size_t(state.range(0)), 256, 1);
  for (auto _ : state) benchmark::DoNotOptimize(safe::DistanceMatrix(x));
}
BENCHMARK(BM_DistanceMatrix)->Arg(250)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_Dbscan(benchmark::State& state) {
  const safe::DistanceMatrix dist(random_matrix(std::size_t(state.range(0)), 32, 2));
  const double eps = safe::k_distance_profile(dist, 4).epsilon;
  for (auto _ : state) benchmark::DoNotOptimize(safe::dbscan(dist, eps, 5));
}
BENCHMARK(BM_Dbscan)->Arg(250)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_FitPca(benchmark::State& state) {
  const auto x = random_matrix(600, std::size_t(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(safe::fit_pca(x, 64));
}
BENCHMARK(BM_FitPca)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Silhouette(benchmark::State& state) {
  const auto n = std::size_t(state.range(0));
  const safe::DistanceMatrix dist(random_matrix(n, 16, 4));
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = int(i % 5);
  for (auto _ : state) benchmark::DoNotOptimize(safe::silhouette(dist, labels));
}
BENCHMARK(BM_Silhouette)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
