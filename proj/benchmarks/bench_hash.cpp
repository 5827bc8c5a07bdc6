#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "etdr/hash.hpp"

using namespace etdr;

namespace {

std::vector<std::uint8_t> random_bytes(std::size_t n) {
  std::mt19937_64 rng(n);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

}  // namespace

// Single key over a message of range(0) bytes.
static void BM_HashSingleKey(benchmark::State& state) {
  const auto data = random_bytes(static_cast<std::size_t>(state.range(0)));
  const unsigned l = 20;
  for (auto _ : state) {
    PolyHasher h(gf2::FieldElem(0x5A5A5, l));
    h.update_bytes(data);
    benchmark::DoNotOptimize(h.finish());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_HashSingleKey)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20);

// All N subkeys of a hash vector in one pass.
static void BM_HashVector(benchmark::State& state) {
  const auto data = random_bytes(1 << 16);
  const unsigned l = 20;
  std::vector<gf2::FieldElem> keys;
  for (std::int64_t i = 0; i < state.range(0); ++i) keys.emplace_back(0x1234 + 977 * i, l);
  for (auto _ : state) {
    MultiPolyHasher h(keys, l);
    h.update_bytes(data);
    benchmark::DoNotOptimize(h.finish());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * (1 << 16));
}
BENCHMARK(BM_HashVector)->Arg(48)->Arg(264);
