#include "etdr/itsmac.hpp"

#include <string>

#include "etdr/error.hpp"
#include "etdr/hash.hpp"

namespace etdr {

BitString OtpPad::take(std::size_t count) {
  if (count > remaining()) {
    fail(ErrorKind::KeyExhausted, "one-time pad exhausted: need " + std::to_string(count) +
                                      " bits, " + std::to_string(remaining()) + " left");
  }
  BitString out = bits_.slice(offset_, count);
  offset_ += count;
  return out;
}

void OtpPad::advance_to(std::size_t offset) {
  if (offset < offset_ || offset > bits_.size()) {
    fail(ErrorKind::KeyExhausted, "one-time pad offset may only move forward");
  }
  offset_ = offset;
}

BitString otp_encrypt(OtpPad& pad, const BitString& plaintext) {
  return plaintext ^ pad.take(plaintext.size());
}

MacKey::MacKey(gf2::FieldElem k1, gf2::FieldElem k2) : k1_(k1), k2_(k2) {
  if (k1.degree() != k2.degree()) fail(ErrorKind::DegreeMismatch, "MacKey halves differ in length");
}

MacTag compute_tag(const MacKey& key, const BitString& input) {
  const auto poly = gf2::irreducible_poly(key.tag_bits());
  PolyHasher h(key.k1());
  h.update(input);
  const Digest d = h.finish();
  const std::uint64_t v = gf2::mul_raw(d.value(), key.k1().value(), poly) ^ key.k2().value();
  return MacTag{gf2::FieldElem(v, key.tag_bits())};
}

namespace {

MacTag tag_of(const MacKey& key, const BitString& message, const BitString& context) {
  BitString input = context;
  input.append(message);
  return compute_tag(key, input);
}

}  // namespace

MacTag mac_tag(MacKey& key, const BitString& message, const BitString& context) {
  if (key.consumed()) fail(ErrorKind::KeyExhausted, "MAC key already used");
  key.mark_consumed();
  return tag_of(key, message, context);
}

bool mac_verify(const MacKey& key, const BitString& message, const MacTag& tag,
                const BitString& context) {
  if (tag.bits() != key.tag_bits()) return false;
  return tag_of(key, message, context) == tag;
}

Rational forgery_bound(std::uint64_t msg_bits, unsigned tag_bits) {
  if (tag_bits == 0) fail(ErrorKind::ParamDomain, "forgery_bound: tag length must be >= 1");
  if (msg_bits == 0) return Rational(0);
  return collision_bound(msg_bits, tag_bits);
}

Rational achieved_forgery_bound(std::uint64_t msg_bits, unsigned tag_bits) {
  if (tag_bits == 0) fail(ErrorKind::ParamDomain, "forgery bound: tag length must be >= 1");
  const BigInt blocks = ceil_div(BigInt(std::to_string(msg_bits)), BigInt(tag_bits));
  return Rational(blocks) * pow2(-static_cast<long>(tag_bits));
}

}  // namespace etdr
