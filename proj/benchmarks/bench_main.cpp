#include <benchmark/benchmark.h>

#include <bdheap/deposition.hpp>
#include <bdheap/heap_words.hpp>
#include <bdheap/hyperbolic_walk.hpp>
#include <bdheap/matrix_growth.hpp>
#include <bdheap/painleve.hpp>
#include <bdheap/rng.hpp>
#include <bdheap/toda.hpp>

using namespace bdheap;

namespace {

void BM_DepositHard(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  RngStream rng(1, 0);
  std::vector<std::int64_t> h(n, 0);
  for (auto _ : state) {
    deposit_hard_inplace(h, 1 + rng.uniform_index(n), Boundary::free);
  }
  benchmark::DoNotOptimize(h.data());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DepositHard)->Arg(64)->Arg(1024);

void BM_Simulate(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t t = 100 * n;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    RngStream rng(++seed, 0);
    benchmark::DoNotOptimize(simulate(n, t, rng).profile.max());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(t));
}
BENCHMARK(BM_Simulate)->Arg(128)->Arg(512);

void BM_NormalForm(benchmark::State& state) {
  RngStream rng(2, 0);
  Word w;
  w.n_generators = 16;
  for (std::int64_t k = 0; k < state.range(0); ++k) {
    w.letters.push_back({1 + static_cast<int>(rng.uniform_index(16)), 1});
  }
  for (auto _ : state) benchmark::DoNotOptimize(normal_form(w).size());
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_NormalForm)->Arg(256)->Arg(2048)->Arg(16384);

void BM_HeapRoundTrip(benchmark::State& state) {
  RngStream rng(3, 0);
  Word w;
  w.n_generators = 16;
  for (std::int64_t k = 0; k < state.range(0); ++k) {
    w.letters.push_back({1 + static_cast<int>(rng.uniform_index(16)), 1});
  }
  for (auto _ : state) benchmark::DoNotOptimize(heap_to_word(word_to_heap(w)).size());
}
BENCHMARK(BM_HeapRoundTrip)->Arg(4096);

void BM_ProductApply(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  RngStream rng(4, 0);
  const BlockMeasure measure{};
  ProductState s(dim);
  for (auto _ : state) s.apply(1 + rng.uniform_index(dim - 1), measure.sample(rng));
  benchmark::DoNotOptimize(radial_coords(s).front());
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ProductApply)->Arg(11)->Arg(41);

void BM_HyperbolicWalk(benchmark::State& state) {
  RngStream rng(5, 0);
  WalkState w;
  for (auto _ : state) w = walk_step(w, rng);
  benchmark::DoNotOptimize(w.mu);
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_HyperbolicWalk);

void BM_TodaStep(benchmark::State& state) {
  TodaState s;
  s.bc = TodaBoundary::periodic;
  RngStream rng(6, 0);
  for (std::int64_t j = 0; j < state.range(0); ++j) {
    s.mu.push_back(rng.uniform(-0.5, 0.5));
    s.p.push_back(rng.uniform(-0.5, 0.5));
  }
  for (auto _ : state) s = toda_evolve(s, 1e-3, 100);
  benchmark::DoNotOptimize(s.mu.front());
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_TodaStep)->Arg(16);

void BM_Yablonskii(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(yablonskii(static_cast<int>(state.range(0))).size());
}
BENCHMARK(BM_Yablonskii)->Arg(12);

} // namespace
BENCHMARK_MAIN();
