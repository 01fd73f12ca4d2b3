#include <benchmark/benchmark.h>

#include <vector>

#include "minorbit/circle_point.hpp"
#include "minorbit/matching.hpp"
#include "minorbit/rds_core.hpp"
#include "minorbit/rng.hpp"

using namespace minorbit;

namespace {

std::vector<CirclePoint> doubling_orbit(std::uint64_t seed, std::size_t n) {
  const std::size_t bits = CircleMaps({2}).precision_bits_for(n);
  CirclePoint p = CirclePoint::random(rng::stream_key(seed, 0, "bench-circle"), bits);
  std::vector<CirclePoint> orbit;
  orbit.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    orbit.push_back(p);
    p.multiply_mod1(2);
  }
  return orbit;
}

void BM_MultiplyMod1(benchmark::State& state) {
  const auto bits = static_cast<std::size_t>(state.range(0));
  CirclePoint p = CirclePoint::random(rng::stream_key(3, 0, "bench-mul"), bits);
  for (auto _ : state) {
    p.multiply_mod1(3);
    benchmark::DoNotOptimize(p);
  }
}

void BM_ExactOrbit(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(doubling_orbit(4, n));
}

void BM_NearestPairExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto xs = doubling_orbit(5, n);
  const auto ys = doubling_orbit(6, n);
  for (auto _ : state) benchmark::DoNotOptimize(min_dist_match(xs, ys, MatchConstraint::all()));
}

void BM_NearestPairDouble(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto kx = rng::stream_key(7, 0, "bench-double");
  const auto ky = rng::stream_key(8, 0, "bench-double");
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = rng::uniform(kx, i);
    ys[i] = rng::uniform(ky, i);
  }
  for (auto _ : state) benchmark::DoNotOptimize(min_dist_match(xs, ys, MatchConstraint::all()));
}

}  // namespace

BENCHMARK(BM_MultiplyMod1)->Arg(1024)->Arg(16384)->Arg(65536);
BENCHMARK(BM_ExactOrbit)->Arg(1 << 10)->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestPairExact)->Arg(1 << 10)->Arg(1 << 12)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NearestPairDouble)->Arg(1 << 12)->Arg(1 << 16);
