#include <benchmark/benchmark.h>

#include <filesystem>

#include "etdr/runner.hpp"

using namespace etdr;

// Equality test plus dispute over the in-memory carrier, keygen excluded.
static void BM_HonestSession(benchmark::State& state) {
  const Params p = derive_params(static_cast<std::uint64_t>(state.range(0)), pow2(-8));
  const auto dir = std::filesystem::temp_directory_path() / "etdr-bench-store";
  std::uint64_t i = 0;
  for (auto _ : state) {
    state.PauseTiming();
    SeededEntropy rng(9, i++);
    KeyBundle kb = keygen(p, rng);
    Message m;
    for (std::uint64_t done = 0; done < p.r; done += 64) {
      const unsigned c = static_cast<unsigned>(std::min<std::uint64_t>(64, p.r - done));
      m.append(rng.bits(c), c);
    }
    SessionStore store(dir, kb.ttp.store_key);
    state.ResumeTiming();
    LocalSession s(std::move(kb), store);
    benchmark::DoNotOptimize(s.run_equality_test(m, m));
    benchmark::DoNotOptimize(s.run_dispute(m, m));
  }
  std::filesystem::remove_all(dir);
}
BENCHMARK(BM_HonestSession)->Arg(256)->Arg(1 << 12);
