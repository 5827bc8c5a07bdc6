#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace etdr {

/// Packed bit string. Bit 0 is the most significant bit of byte 0; unused
/// trailing bits of the last byte are always zero.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t bit_count);
  BitString(std::vector<std::uint8_t> bytes, std::size_t bit_count);

  static BitString from_bytes(std::span<const std::uint8_t> bytes);
  /// Parses a string of '0'/'1' characters; throws std::invalid_argument otherwise.
  static BitString from_binary(std::string_view text);

  std::size_t size() const noexcept { return bits_; }
  bool empty() const noexcept { return bits_ == 0; }
  std::size_t byte_size() const noexcept { return bytes_.size(); }

  bool get(std::size_t index) const;
  void set(std::size_t index, bool value);

  /// Reads `count` (<= 64) bits starting at `offset`, first bit most significant.
  /// Bits past the end read as zero.
  std::uint64_t read(std::size_t offset, unsigned count) const;
  /// Appends the low `count` bits of `value`, most significant first.
  void append(std::uint64_t value, unsigned count);
  void append(const BitString& other);

  BitString slice(std::size_t offset, std::size_t count) const;
  BitString& operator^=(const BitString& other);

  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::string to_binary() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  void clear_tail();

  std::vector<std::uint8_t> bytes_;
  std::size_t bits_ = 0;
};

BitString operator^(BitString lhs, const BitString& rhs);

}  // namespace etdr
