#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "etdr/keys.hpp"

namespace etdr {

// Key files, big-endian throughout:
//
//   "ETDR" | version u8 (=1) | role u8 (0 alice, 1 bob, 2 ttp) | session id [16]
//   | r u64 | eps_num u64 | eps_den u64 | n u32 | l u32 | N u32
//
// party file:  key block
// ttp file:    omega: n x u32 (sorted, 0-based) | alice key block | bob key block
//              | store key [32]
//
// A key block is a bit stream, padded with zero bits to a byte boundary:
// N et subkeys (l bits each, index-ascending), the OTP pad (N*l bits), then
// the four MAC keys in slot order, each k1 then k2 (n+l bits each). Every
// l-bit value is written most significant bit first. Experimental parameter
// sets are stored with eps = 0/1.

inline constexpr std::uint8_t kKeyFileVersion = 1;

std::vector<std::uint8_t> encode_party_keys(const PartyKeys& keys);
PartyKeys decode_party_keys(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_ttp_secret(const TtpSecret& secret);
TtpSecret decode_ttp_secret(std::span<const std::uint8_t> bytes);

void write_party_keys(const std::filesystem::path& path, const PartyKeys& keys);
PartyKeys read_party_keys(const std::filesystem::path& path);
void write_ttp_secret(const std::filesystem::path& path, const TtpSecret& secret);
TtpSecret read_ttp_secret(const std::filesystem::path& path);

/// Sidecar `<keyfile>.used` recording which single-use components a party
/// process has already spent, so a later process never reuses them.
struct KeyLedger {
  std::size_t otp_consumed = 0;
  std::array<bool, kMacSlots> mac_consumed{};

  static KeyLedger capture(const PartyKeys& keys);
  /// Marks the recorded components as consumed in `keys`.
  void apply(PartyKeys& keys) const;
};

std::filesystem::path ledger_path(const std::filesystem::path& key_file);
KeyLedger read_ledger(const std::filesystem::path& key_file);
void write_ledger(const std::filesystem::path& key_file, const KeyLedger& ledger);

/// Whole-file helpers used by the store and the CLI.
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
/// Writes via a temporary file and rename.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace etdr
