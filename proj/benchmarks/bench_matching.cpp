#include <benchmark/benchmark.h>

#include <vector>

#include "minorbit/matching.hpp"
#include "minorbit/rng.hpp"

using namespace minorbit;

namespace {

std::vector<Symbol> fair_word(std::uint64_t seed, std::size_t length) {
  const auto key = rng::stream_key(seed, 0, "bench-word");
  std::vector<Symbol> w(length);
  for (std::size_t i = 0; i < length; ++i) w[i] = static_cast<Symbol>(rng::draw(key, i) & 1u);
  return w;
}

void run(benchmark::State& state, MatchConstraint c, LcsAlgorithm algo) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = fair_word(1, n + 160);
  const auto y = fair_word(2, n + 160);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lcs_match(x, y, n, c, algo));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}

void BM_AllAutomaton(benchmark::State& s) {
  run(s, MatchConstraint::all(), LcsAlgorithm::SuffixAutomaton);
}
void BM_AllRollingHash(benchmark::State& s) {
  run(s, MatchConstraint::all(), LcsAlgorithm::RollingHash);
}
void BM_FarThirds(benchmark::State& s) {
  run(s, MatchConstraint::far_thirds(), LcsAlgorithm::Auto);
}
void BM_Diagonal(benchmark::State& s) {
  run(s, MatchConstraint::diagonal(), LcsAlgorithm::DiagonalScan);
}
void BM_Band(benchmark::State& s) {
  run(s, MatchConstraint::band(192), LcsAlgorithm::DiagonalScan);
}
void BM_OffBand(benchmark::State& s) {
  run(s, MatchConstraint::off_band(192), LcsAlgorithm::RollingHash);
}

}  // namespace

BENCHMARK(BM_AllAutomaton)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();
BENCHMARK(BM_AllRollingHash)->RangeMultiplier(4)->Range(1 << 10, 1 << 18)->Complexity();
BENCHMARK(BM_FarThirds)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Diagonal)->RangeMultiplier(4)->Range(1 << 10, 1 << 18);
BENCHMARK(BM_Band)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);
BENCHMARK(BM_OffBand)->RangeMultiplier(4)->Range(1 << 10, 1 << 16);

BENCHMARK_MAIN();
