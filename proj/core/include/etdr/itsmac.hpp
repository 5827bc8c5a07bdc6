#pragma once

#include <cstdint>

#include "etdr/bits.hpp"
#include "etdr/gf2.hpp"
#include "etdr/rational.hpp"

namespace etdr {

/// One-time pad with a monotone consumption offset. Every pad bit is used at
/// most once.
class OtpPad {
 public:
  OtpPad() = default;
  explicit OtpPad(BitString bits) : bits_(std::move(bits)) {}

  const BitString& bits() const noexcept { return bits_; }
  std::size_t size() const noexcept { return bits_.size(); }
  std::size_t consumed() const noexcept { return offset_; }
  std::size_t remaining() const noexcept { return bits_.size() - offset_; }

  /// Returns the next `count` pad bits and advances the offset.
  BitString take(std::size_t count);
  /// Restores a previously persisted offset; it may only move forward.
  void advance_to(std::size_t offset);

 private:
  BitString bits_;
  std::size_t offset_ = 0;
};

/// XORs `plaintext` with the next pad bits. Decryption is the same call on a
/// mirror of the pad.
BitString otp_encrypt(OtpPad& pad, const BitString& plaintext);

/// Single-use MAC key k = (k1, k2), each of `tag_bits` bits.
class MacKey {
 public:
  MacKey() = default;
  MacKey(gf2::FieldElem k1, gf2::FieldElem k2);

  unsigned tag_bits() const noexcept { return k1_.degree(); }
  const gf2::FieldElem& k1() const noexcept { return k1_; }
  const gf2::FieldElem& k2() const noexcept { return k2_; }

  bool consumed() const noexcept { return consumed_; }
  void mark_consumed() noexcept { consumed_ = true; }

 private:
  gf2::FieldElem k1_;
  gf2::FieldElem k2_;
  bool consumed_ = false;
};

struct MacTag {
  gf2::FieldElem value;

  unsigned bits() const noexcept { return value.degree(); }
  friend bool operator==(const MacTag&, const MacTag&) = default;
};

/// Carter-Wegman tag k1 * f(k1, context || message) XOR k2 over GF(2^d),
/// where f is the almost-universal polynomial hash. Consumes the key.
MacTag mac_tag(MacKey& key, const BitString& message, const BitString& context);

/// Recomputes the tag without consuming the key.
bool mac_verify(const MacKey& key, const BitString& message, const MacTag& tag,
                const BitString& context);

/// Tag computation without the single-use bookkeeping; exposed for the
/// exhaustive forgery games.
MacTag compute_tag(const MacKey& key, const BitString& input);

/// Nominal bound ceil(r'/d - 1) * 2^-d used for parameter budgeting.
Rational forgery_bound(std::uint64_t msg_bits, unsigned tag_bits);

/// Substitution bound actually achieved by mac_tag: ceil(r'/d) * 2^-d.
Rational achieved_forgery_bound(std::uint64_t msg_bits, unsigned tag_bits);

}  // namespace etdr
