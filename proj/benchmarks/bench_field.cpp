#include <benchmark/benchmark.h>

#include <random>

#include "etdr/gf2.hpp"

using namespace etdr;

static void BM_GfMul(benchmark::State& state) {
  const unsigned degree = static_cast<unsigned>(state.range(0));
  const gf2::ReductionPoly poly = gf2::irreducible_poly(degree);
  std::mt19937_64 rng(degree);
  const std::uint64_t mask = gf2::degree_mask(degree);
  std::uint64_t a = rng() & mask, b = rng() & mask;
  for (auto _ : state) {
    a = gf2::mul_raw(a, b, poly) ^ 1;
    benchmark::DoNotOptimize(a);
  }
}
BENCHMARK(BM_GfMul)->Arg(8)->Arg(32)->Arg(50)->Arg(64);
