#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "etdr/bits.hpp"
#include "etdr/gf2.hpp"
#include "etdr/rational.hpp"

namespace etdr {

using Message = BitString;
using Digest = gf2::FieldElem;

/// Splits `m` into ceil(r/l) l-bit blocks from the front; the last block is
/// zero-padded on its tail. The first bit of a block is the coefficient of
/// x^(l-1).
std::vector<gf2::FieldElem> chunk(const Message& m, unsigned l);

/// Almost-universal polynomial hash f(k, m) = sum_{i=1..c} m_i k^(i-1) over
/// GF(2^l). For c = 1 the digest is the zero-padded message for every key.
Digest hash_f(gf2::FieldElem key, const Message& m, unsigned l);

/// q = ceil(r/l - 1) * 2^-l, the key-averaged collision probability bound.
Rational collision_bound(std::uint64_t r, unsigned l);

/// One-pass evaluation of hash_f with O(l) state. Input may arrive in
/// arbitrary bit-sized pieces.
class PolyHasher {
 public:
  explicit PolyHasher(gf2::FieldElem key);

  void update(const BitString& bits);
  void update_bytes(std::span<const std::uint8_t> bytes);
  /// Pads a partial trailing block and returns the digest. Further updates
  /// are rejected.
  Digest finish();

  std::uint64_t bits_consumed() const noexcept { return consumed_; }

 private:
  void feed(std::uint64_t value, unsigned count);
  void absorb(std::uint64_t block);

  gf2::ReductionPoly poly_;
  std::uint64_t key_;
  std::uint64_t power_ = 1;
  std::uint64_t acc_ = 0;
  std::uint64_t pending_ = 0;
  unsigned pending_bits_ = 0;
  std::uint64_t consumed_ = 0;
  bool finished_ = false;
};

/// Evaluates hash_f under many keys of the same degree in a single pass over
/// the message; block extraction is shared across keys.
class MultiPolyHasher {
 public:
  MultiPolyHasher(std::span<const gf2::FieldElem> keys, unsigned l);

  void update(const BitString& bits);
  void update_bytes(std::span<const std::uint8_t> bytes);
  std::vector<Digest> finish();

  std::uint64_t bits_consumed() const noexcept { return consumed_; }

 private:
  void feed(std::uint64_t value, unsigned count);
  void absorb(std::uint64_t block);

  gf2::ReductionPoly poly_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> powers_;
  std::vector<std::uint64_t> accs_;
  std::uint64_t pending_ = 0;
  unsigned pending_bits_ = 0;
  std::uint64_t consumed_ = 0;
  bool finished_ = false;
};

}  // namespace etdr
