#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "etdr/itsmac.hpp"
#include "etdr/keys.hpp"

namespace etdr::transport {

// Frame layout (big-endian, bit-exact):
//
//   offset  size  field
//   0       1     version (=1)
//   1       1     msg_type
//   2       16    session id
//   18      4     payload_len (bytes)
//   22      2     tag_bits (n+l)
//   24      P     payload
//   24+P    T     tag, ceil(tag_bits/8) bytes, MSB first, zero-padded tail
//
// The MAC covers  link byte || header (24 bytes) || payload  under the
// round's single-use key; the link byte names the direction of travel.

inline constexpr std::uint8_t kFrameVersion = 1;
inline constexpr std::size_t kHeaderBytes = 24;

enum class MsgType : std::uint8_t {
  EtSubmitA = 1,
  EtSubmitB = 2,
  EtAnnounce = 3,
  DrClaimA = 4,
  DrClaimB = 5,
  DrAnnounce = 6,
  Error = 7,
};

const char* to_string(MsgType type) noexcept;

/// Direction of travel; also the MAC domain-separation byte.
enum class Link : std::uint8_t { AliceToTtp = 1, TtpToAlice = 2, BobToTtp = 3, TtpToBob = 4 };

Link uplink(Role party);
Link downlink(Role party);
Role party_of(Link link);
bool is_uplink(Link link);

/// Reason codes carried by an Error frame.
enum class AbortReason : std::uint8_t { MacFailure = 1, ProtocolState = 2, Malformed = 3 };

struct Frame {
  std::uint8_t version = kFrameVersion;
  MsgType type = MsgType::Error;
  SessionId session;
  std::vector<std::uint8_t> payload;
  MacTag tag;

  std::array<std::uint8_t, kHeaderBytes> header() const;
  friend bool operator==(const Frame&, const Frame&) = default;
};

std::vector<std::uint8_t> encode_frame(const Frame& f);
/// Rejects truncation, trailing bytes, unknown versions/types, tag lengths
/// outside [1, 64] and nonzero tag padding with Error{Malformed}.
Frame decode_frame(std::span<const std::uint8_t> bytes);
/// Total frame length implied by a complete header.
std::size_t frame_size(std::span<const std::uint8_t, kHeaderBytes> header);

/// Bits the MAC covers: link byte, header, payload.
BitString mac_context(Link link, const Frame& f);

/// Builds and tags a frame; consumes `key`.
Frame seal(MsgType type, const SessionId& session, std::vector<std::uint8_t> payload, Link link,
           MacKey& key);
bool verify(const Frame& f, Link link, const MacKey& key);

/// Payload bits that carry protocol content for this message type (hash
/// ciphertexts, 2-bit announcements, claims), excluding byte padding.
std::uint64_t semantic_payload_bits(MsgType type, const Params& params);

// Payload codecs.
std::vector<std::uint8_t> pack_bits(const BitString& bits);
BitString unpack_bits(std::span<const std::uint8_t> bytes, std::uint64_t bit_count);
std::vector<std::uint8_t> code_payload(std::uint8_t code);
std::uint8_t payload_code(const Frame& f);

}  // namespace etdr::transport
