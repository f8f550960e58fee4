#include <random>

#include <benchmark/benchmark.h>

#include "sras/assignment.hpp"

namespace {

void BM_SolveAssignment(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  sras::CostMatrix cost(n, n + n / 4);
  for (Eigen::Index i = 0; i < cost.size(); ++i) cost.data()[i] = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(sras::solve_assignment(cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveAssignment)->RangeMultiplier(2)->Range(4, 256)->Complexity(benchmark::oNCubed);

void BM_Associate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> pos(0, 1800), jitter(-4, 4);
  std::vector<sras::BBox> tracks, dets;
  for (int i = 0; i < n; ++i) {
    tracks.push_back({pos(rng), pos(rng) / 2, 40, 100});
    dets.push_back({tracks.back().left + jitter(rng), tracks.back().top + jitter(rng), 40, 100});
  }
  for (auto _ : state) benchmark::DoNotOptimize(sras::associate(tracks, dets, 0.8));
}
BENCHMARK(BM_Associate)->Arg(8)->Arg(32)->Arg(128);

}  // namespace
