#include "etdr/hash.hpp"

#include <string>

#include "etdr/error.hpp"

namespace etdr {

namespace {

void require_fresh(bool finished) {
  if (finished) fail(ErrorKind::ProtocolState, "hasher already finished");
}

// Feeds `bits` to `sink(value, count)` in pieces of at most 64 bits.
template <typename Sink>
void for_each_word(const BitString& bits, Sink&& sink) {
  for (std::size_t off = 0; off < bits.size(); off += 64) {
    const auto n = static_cast<unsigned>(bits.size() - off < 64 ? bits.size() - off : 64);
    sink(bits.read(off, n), n);
  }
}

// Splits (value, count) across l-bit block boundaries; absorb(block) is
// called for every completed block.
template <typename Absorb>
void feed_blocks(std::uint64_t value, unsigned count, unsigned l, std::uint64_t& pending,
                 unsigned& pending_bits, Absorb&& absorb) {
  while (count > 0) {
    const unsigned room = l - pending_bits;
    const unsigned take = count < room ? count : room;
    const std::uint64_t part =
        (value >> (count - take)) & (take == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << take) - 1);
    pending = take == 64 ? part : (pending << take) | part;
    pending_bits += take;
    count -= take;
    if (pending_bits == l) {
      absorb(pending);
      pending = 0;
      pending_bits = 0;
    }
  }
}

}  // namespace

std::vector<gf2::FieldElem> chunk(const Message& m, unsigned l) {
  if (l < gf2::kMinDegree || l > gf2::kMaxDegree) {
    fail(ErrorKind::ParamDomain, "chunk: block length " + std::to_string(l) + " outside [1, 64]");
  }
  std::vector<gf2::FieldElem> blocks;
  const std::size_t count = (m.size() + l - 1) / l;
  blocks.reserve(count == 0 ? 1 : count);
  for (std::size_t i = 0; i < count; ++i) {
    blocks.emplace_back(m.read(i * l, l), l);
  }
  if (blocks.empty()) blocks.push_back(gf2::FieldElem::zero(l));
  return blocks;
}

Digest hash_f(gf2::FieldElem key, const Message& m, unsigned l) {
  if (key.degree() != l) fail(ErrorKind::DegreeMismatch, "hash_f: key degree differs from l");
  PolyHasher h(key);
  h.update(m);
  return h.finish();
}

Rational collision_bound(std::uint64_t r, unsigned l) {
  if (r == 0 || l == 0) fail(ErrorKind::ParamDomain, "collision_bound: r and l must be >= 1");
  // ceil(r/l - 1) = ceil(r/l) - 1
  const BigInt blocks = ceil_div(BigInt(std::to_string(r)), BigInt(l));
  return Rational(blocks - 1) * pow2(-static_cast<long>(l));
}

PolyHasher::PolyHasher(gf2::FieldElem key)
    : poly_(gf2::irreducible_poly(key.degree())), key_(key.value()) {}

void PolyHasher::absorb(std::uint64_t block) {
  acc_ ^= gf2::mul_raw(block, power_, poly_);
  power_ = gf2::mul_raw(power_, key_, poly_);
}

void PolyHasher::feed(std::uint64_t value, unsigned count) {
  feed_blocks(value, count, poly_.degree, pending_, pending_bits_,
              [this](std::uint64_t b) { absorb(b); });
  consumed_ += count;
}

void PolyHasher::update(const BitString& bits) {
  require_fresh(finished_);
  for_each_word(bits, [this](std::uint64_t v, unsigned n) { feed(v, n); });
}

void PolyHasher::update_bytes(std::span<const std::uint8_t> bytes) {
  require_fresh(finished_);
  for (std::uint8_t b : bytes) feed(b, 8);
}

Digest PolyHasher::finish() {
  require_fresh(finished_);
  finished_ = true;
  if (pending_bits_ > 0) {
    absorb(pending_ << (poly_.degree - pending_bits_));
    pending_ = 0;
    pending_bits_ = 0;
  }
  return Digest(acc_, poly_.degree);
}

MultiPolyHasher::MultiPolyHasher(std::span<const gf2::FieldElem> keys, unsigned l)
    : poly_(gf2::irreducible_poly(l)),
      powers_(keys.size(), 1),
      accs_(keys.size(), 0) {
  keys_.reserve(keys.size());
  for (const auto& k : keys) {
    if (k.degree() != l) fail(ErrorKind::DegreeMismatch, "MultiPolyHasher: key degree differs from l");
    keys_.push_back(k.value());
  }
}

void MultiPolyHasher::absorb(std::uint64_t block) {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    accs_[i] ^= gf2::mul_raw(block, powers_[i], poly_);
    powers_[i] = gf2::mul_raw(powers_[i], keys_[i], poly_);
  }
}

void MultiPolyHasher::feed(std::uint64_t value, unsigned count) {
  feed_blocks(value, count, poly_.degree, pending_, pending_bits_,
              [this](std::uint64_t b) { absorb(b); });
  consumed_ += count;
}

void MultiPolyHasher::update(const BitString& bits) {
  require_fresh(finished_);
  for_each_word(bits, [this](std::uint64_t v, unsigned n) { feed(v, n); });
}

void MultiPolyHasher::update_bytes(std::span<const std::uint8_t> bytes) {
  require_fresh(finished_);
  for (std::uint8_t b : bytes) feed(b, 8);
}

std::vector<Digest> MultiPolyHasher::finish() {
  require_fresh(finished_);
  finished_ = true;
  if (pending_bits_ > 0) {
    absorb(pending_ << (poly_.degree - pending_bits_));
    pending_bits_ = 0;
  }
  std::vector<Digest> out;
  out.reserve(accs_.size());
  for (std::uint64_t a : accs_) out.emplace_back(a, poly_.degree);
  return out;
}

}  // namespace etdr
