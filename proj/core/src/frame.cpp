#include "etdr/frame.hpp"

#include <string>

#include "etdr/error.hpp"
#include "etdr/wire.hpp"

namespace etdr::transport {

const char* to_string(MsgType type) noexcept {
  switch (type) {
    case MsgType::EtSubmitA: return "EtSubmitA";
    case MsgType::EtSubmitB: return "EtSubmitB";
    case MsgType::EtAnnounce: return "EtAnnounce";
    case MsgType::DrClaimA: return "DrClaimA";
    case MsgType::DrClaimB: return "DrClaimB";
    case MsgType::DrAnnounce: return "DrAnnounce";
    case MsgType::Error: return "Error";
  }
  return "?";
}

Link uplink(Role party) {
  if (party == Role::Ttp) fail(ErrorKind::ProtocolState, "no uplink for the TTP");
  return party == Role::Alice ? Link::AliceToTtp : Link::BobToTtp;
}

Link downlink(Role party) {
  if (party == Role::Ttp) fail(ErrorKind::ProtocolState, "no downlink for the TTP");
  return party == Role::Alice ? Link::TtpToAlice : Link::TtpToBob;
}

Role party_of(Link link) {
  return link == Link::AliceToTtp || link == Link::TtpToAlice ? Role::Alice : Role::Bob;
}

bool is_uplink(Link link) { return link == Link::AliceToTtp || link == Link::BobToTtp; }

std::array<std::uint8_t, kHeaderBytes> Frame::header() const {
  wire::Writer w;
  w.u8(version);
  w.u8(static_cast<std::uint8_t>(type));
  w.bytes(session.bytes);
  w.u32(static_cast<std::uint32_t>(payload.size()));
  w.u16(static_cast<std::uint16_t>(tag.bits()));
  std::array<std::uint8_t, kHeaderBytes> out{};
  std::copy(w.data().begin(), w.data().end(), out.begin());
  return out;
}

namespace {

std::size_t tag_bytes(unsigned bits) { return (bits + 7) / 8; }

bool known_type(std::uint8_t t) { return t >= 1 && t <= 7; }

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& f) {
  if (f.tag.bits() == 0 || f.tag.bits() > 64) fail(ErrorKind::Malformed, "tag length outside [1, 64]");
  wire::Writer w;
  w.bytes(f.header());
  w.bytes(f.payload);
  BitString tag;
  tag.append(f.tag.value.value(), f.tag.bits());
  w.bytes(tag.bytes());
  return w.take();
}

std::size_t frame_size(std::span<const std::uint8_t, kHeaderBytes> header) {
  wire::Reader r(header, ErrorKind::Malformed);
  r.bytes(18);
  const std::uint32_t payload_len = r.u32();
  const std::uint16_t tag_bits = r.u16();
  return kHeaderBytes + payload_len + tag_bytes(tag_bits);
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes, ErrorKind::Malformed);
  Frame f;
  f.version = r.u8();
  if (f.version != kFrameVersion) {
    fail(ErrorKind::Malformed, "unknown frame version " + std::to_string(f.version));
  }
  const std::uint8_t type = r.u8();
  if (!known_type(type)) fail(ErrorKind::Malformed, "unknown message type " + std::to_string(type));
  f.type = static_cast<MsgType>(type);
  const auto id = r.bytes(16);
  std::copy(id.begin(), id.end(), f.session.bytes.begin());
  const std::uint32_t payload_len = r.u32();
  const std::uint16_t tag_bits = r.u16();
  if (tag_bits == 0 || tag_bits > 64) fail(ErrorKind::Malformed, "tag length outside [1, 64]");
  if (r.remaining() != static_cast<std::size_t>(payload_len) + tag_bytes(tag_bits)) {
    fail(ErrorKind::Malformed, "frame length does not match its header");
  }
  const auto payload = r.bytes(payload_len);
  f.payload.assign(payload.begin(), payload.end());
  const auto tag = r.bytes(tag_bytes(tag_bits));
  const BitString tag_bits_str(std::vector<std::uint8_t>(tag.begin(), tag.end()), tag_bits);
  if (!std::equal(tag.begin(), tag.end(), tag_bits_str.bytes().begin())) {
    fail(ErrorKind::Malformed, "nonzero tag padding");
  }
  f.tag = MacTag{gf2::FieldElem(tag_bits_str.read(0, tag_bits), tag_bits)};
  r.expect_end("frame");
  return f;
}

BitString mac_context(Link link, const Frame& f) {
  BitString ctx;
  ctx.append(static_cast<std::uint8_t>(link), 8);
  for (std::uint8_t b : f.header()) ctx.append(b, 8);
  return ctx;
}

Frame seal(MsgType type, const SessionId& session, std::vector<std::uint8_t> payload, Link link,
           MacKey& key) {
  Frame f;
  f.type = type;
  f.session = session;
  f.payload = std::move(payload);
  // The header declares the tag length, so set it before computing the tag.
  f.tag = MacTag{gf2::FieldElem::zero(key.tag_bits())};
  f.tag = mac_tag(key, BitString::from_bytes(f.payload), mac_context(link, f));
  return f;
}

bool verify(const Frame& f, Link link, const MacKey& key) {
  if (f.tag.bits() != key.tag_bits()) return false;
  return mac_verify(key, BitString::from_bytes(f.payload), f.tag, mac_context(link, f));
}

std::uint64_t semantic_payload_bits(MsgType type, const Params& params) {
  switch (type) {
    case MsgType::EtSubmitA:
    case MsgType::EtSubmitB: return params.hash_vector_bits();
    case MsgType::DrClaimA:
    case MsgType::DrClaimB: return params.r;
    case MsgType::EtAnnounce:
    case MsgType::DrAnnounce:
    case MsgType::Error: return 2;
  }
  return 0;
}

std::vector<std::uint8_t> pack_bits(const BitString& bits) {
  return std::vector<std::uint8_t>(bits.bytes().begin(), bits.bytes().end());
}

BitString unpack_bits(std::span<const std::uint8_t> bytes, std::uint64_t bit_count) {
  if (bytes.size() != (bit_count + 7) / 8) {
    fail(ErrorKind::Malformed, "payload has " + std::to_string(bytes.size()) + " bytes, expected " +
                                   std::to_string((bit_count + 7) / 8));
  }
  BitString out(std::vector<std::uint8_t>(bytes.begin(), bytes.end()), bit_count);
  if (!std::equal(bytes.begin(), bytes.end(), out.bytes().begin())) {
    fail(ErrorKind::Malformed, "nonzero payload padding");
  }
  return out;
}

std::vector<std::uint8_t> code_payload(std::uint8_t code) {
  if (code > 3) fail(ErrorKind::Malformed, "announcement codes are 2 bits");
  return {code};
}

std::uint8_t payload_code(const Frame& f) {
  if (f.payload.size() != 1 || f.payload[0] > 3) fail(ErrorKind::Malformed, "bad announcement payload");
  return f.payload[0];
}

}  // namespace etdr::transport
