#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "minorbit/rds_core.hpp"
#include "minorbit/rng.hpp"
#include "minorbit/transfer.hpp"

using namespace minorbit;
namespace tr = minorbit::transfer;

namespace {

void BM_Apply(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  const auto family = tr::CircleMapFamily::conformal({2, 3}, grid);
  std::vector<double> in(grid, 1.0), out(grid);
  for (auto _ : state) {
    family.apply(1, in, out);
    benchmark::DoNotOptimize(out.data());
  }
}

void BM_FiberMeasure(benchmark::State& state) {
  const auto grid = static_cast<std::size_t>(state.range(0));
  const std::size_t depth = 40;
  const auto family = tr::CircleMapFamily::cosine_perturbed_doubling(0.1, grid);
  const auto env = EnvPath::generate(rng::stream_key(1, 0, "env"), "bench-env", 1, -100, 100);
  const tr::TestFunction f = [](double x) { return std::cos(2.0 * std::numbers::pi * x); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(tr::fiber_measure(family, env, tr::FiberWindow{0, depth, depth}, f));
  }
}

}  // namespace

BENCHMARK(BM_Apply)->Arg(1024)->Arg(4096)->Arg(16384);
BENCHMARK(BM_FiberMeasure)->Arg(1024)->Arg(4096)->Unit(benchmark::kMillisecond);
