#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace etdr {

class EntropySource {
 public:
  virtual ~EntropySource() = default;
  virtual void fill(std::span<std::uint8_t> out) = 0;

  std::uint64_t next_u64();
  /// Uniform in [0, bound), rejection sampled. bound must be > 0.
  std::uint64_t uniform(std::uint64_t bound);
  /// Uniform value of `count` bits (count <= 64).
  std::uint64_t bits(unsigned count);
};

/// getrandom(2); the only source keygen should see outside of tests.
class SystemEntropy final : public EntropySource {
 public:
  void fill(std::span<std::uint8_t> out) override;
};

/// Deterministic stream for tests and reproducible experiments. Not for
/// production keys.
class SeededEntropy final : public EntropySource {
 public:
  explicit SeededEntropy(std::uint64_t seed, std::uint64_t stream = 0);
  void fill(std::span<std::uint8_t> out) override;

 private:
  std::mt19937_64 engine_;
};

}  // namespace etdr
