#include <benchmark/benchmark.h>

#include "srkit/graph.hpp"
#include "srkit/rng.hpp"

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  srkit::SplitMix64 rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.next_double();
  return v;
}

void BM_BuildGridGraph(benchmark::State& state) {
  const int n = int(state.range(0));
  for (auto _ : state) {
    auto g = srkit::build_grid_graph(n, n, 4);
    benchmark::DoNotOptimize(g.edges.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGridGraph)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_LaplacianApply(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto g = srkit::build_grid_graph(n, n, 4);
  const auto v = random_vector(g.node_count(), 1);
  std::vector<double> out(g.node_count());
  for (auto _ : state) {
    srkit::laplacian_apply(g, v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LaplacianApply)->RangeMultiplier(2)->Range(32, 512)->Complexity();

void BM_SparseLaplacianMatvec(benchmark::State& state) {
  const int n = int(state.range(0));
  const auto l = srkit::laplacian(srkit::build_grid_graph(n, n, 4));
  const auto v = random_vector(std::size_t(n) * n, 2);
  std::vector<double> out(std::size_t(n) * n);
  for (auto _ : state) {
    l.matvec(v, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SparseLaplacianMatvec)->RangeMultiplier(2)->Range(32, 512)->Complexity();

}  // namespace
