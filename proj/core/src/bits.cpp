#include "etdr/bits.hpp"

#include <stdexcept>

namespace etdr {

namespace {
std::size_t bytes_for(std::size_t bits) { return (bits + 7) / 8; }
}  // namespace

BitString::BitString(std::size_t bit_count)
    : bytes_(bytes_for(bit_count), 0), bits_(bit_count) {}

BitString::BitString(std::vector<std::uint8_t> bytes, std::size_t bit_count)
    : bytes_(std::move(bytes)), bits_(bit_count) {
  if (bytes_.size() != bytes_for(bit_count)) {
    throw std::invalid_argument("BitString: byte buffer does not match bit count");
  }
  clear_tail();
}

BitString BitString::from_bytes(std::span<const std::uint8_t> bytes) {
  return BitString(std::vector<std::uint8_t>(bytes.begin(), bytes.end()), bytes.size() * 8);
}

BitString BitString::from_binary(std::string_view text) {
  BitString out(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') {
      throw std::invalid_argument("BitString: expected only '0' and '1'");
    }
    out.set(i, text[i] == '1');
  }
  return out;
}

bool BitString::get(std::size_t index) const {
  if (index >= bits_) throw std::out_of_range("BitString::get");
  return (bytes_[index / 8] >> (7 - index % 8)) & 1U;
}

void BitString::set(std::size_t index, bool value) {
  if (index >= bits_) throw std::out_of_range("BitString::set");
  const auto mask = static_cast<std::uint8_t>(0x80U >> (index % 8));
  if (value) {
    bytes_[index / 8] |= mask;
  } else {
    bytes_[index / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

std::uint64_t BitString::read(std::size_t offset, unsigned count) const {
  if (count > 64) throw std::invalid_argument("BitString::read: count > 64");
  std::uint64_t out = 0;
  std::size_t pos = offset;
  unsigned left = count;
  // Byte-at-a-time when aligned, bit-at-a-time otherwise.
  while (left > 0) {
    if (pos >= bits_) {
      out <<= left;
      break;
    }
    const std::size_t byte = pos / 8;
    const unsigned in_byte = static_cast<unsigned>(pos % 8);
    const unsigned avail = 8 - in_byte;
    const unsigned take = left < avail ? left : avail;
    const unsigned shift = avail - take;
    const std::uint64_t chunk = (bytes_[byte] >> shift) & ((1U << take) - 1U);
    out = (out << take) | chunk;
    pos += take;
    left -= take;
  }
  return out;
}

void BitString::append(std::uint64_t value, unsigned count) {
  if (count > 64) throw std::invalid_argument("BitString::append: count > 64");
  const std::size_t start = bits_;
  bits_ += count;
  bytes_.resize(bytes_for(bits_), 0);
  for (unsigned i = 0; i < count; ++i) {
    const bool bit = (value >> (count - 1 - i)) & 1U;
    if (bit) set(start + i, true);
  }
}

void BitString::append(const BitString& other) {
  if (bits_ % 8 == 0) {
    bytes_.insert(bytes_.end(), other.bytes_.begin(), other.bytes_.end());
    bits_ += other.bits_;
    return;
  }
  for (std::size_t off = 0; off < other.bits_; off += 64) {
    const auto n = static_cast<unsigned>(other.bits_ - off < 64 ? other.bits_ - off : 64);
    append(other.read(off, n), n);
  }
}

BitString BitString::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > bits_) throw std::out_of_range("BitString::slice");
  BitString out;
  for (std::size_t off = 0; off < count; off += 64) {
    const auto n = static_cast<unsigned>(count - off < 64 ? count - off : 64);
    out.append(read(offset + off, n), n);
  }
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.bits_ != bits_) throw std::invalid_argument("BitString: xor of unequal lengths");
  for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

std::string BitString::to_binary() const {
  std::string out(bits_, '0');
  for (std::size_t i = 0; i < bits_; ++i) {
    if (get(i)) out[i] = '1';
  }
  return out;
}

void BitString::clear_tail() {
  if (bits_ % 8 != 0 && !bytes_.empty()) {
    bytes_.back() &= static_cast<std::uint8_t>(0xFFU << (8 - bits_ % 8));
  }
}

BitString operator^(BitString lhs, const BitString& rhs) {
  lhs ^= rhs;
  return lhs;
}

}  // namespace etdr
