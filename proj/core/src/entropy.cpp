#include "etdr/entropy.hpp"

#include <sys/random.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "etdr/error.hpp"

namespace etdr {

std::uint64_t EntropySource::next_u64() {
  std::uint8_t buf[8];
  fill(buf);
  std::uint64_t v = 0;
  for (std::uint8_t b : buf) v = (v << 8) | b;
  return v;
}

std::uint64_t EntropySource::uniform(std::uint64_t bound) {
  if (bound == 0) fail(ErrorKind::Entropy, "uniform: empty range");
  // Largest multiple of bound representable; values above it are rejected.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
  for (;;) {
    const std::uint64_t v = next_u64();
    if (v <= limit) return v % bound;
  }
}

std::uint64_t EntropySource::bits(unsigned count) {
  if (count == 0) return 0;
  const std::uint64_t v = next_u64();
  return count >= 64 ? v : v >> (64 - count);
}

void SystemEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    const ssize_t got = getrandom(out.data() + done, out.size() - done, 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      fail(ErrorKind::Entropy, std::string("getrandom failed: ") + std::strerror(errno));
    }
    done += static_cast<std::size_t>(got);
  }
}

SeededEntropy::SeededEntropy(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  engine_.seed(seq);
}

void SeededEntropy::fill(std::span<std::uint8_t> out) {
  std::size_t i = 0;
  while (i < out.size()) {
    std::uint64_t v = engine_();
    for (int b = 0; b < 8 && i < out.size(); ++b, ++i) {
      out[i] = static_cast<std::uint8_t>(v >> 56);
      v <<= 8;
    }
  }
}

}  // namespace etdr
