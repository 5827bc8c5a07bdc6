#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "etdr/entropy.hpp"
#include "etdr/gf2.hpp"
#include "etdr/itsmac.hpp"
#include "etdr/params.hpp"

namespace etdr {

enum class Role : std::uint8_t { Alice = 0, Bob = 1, Ttp = 2 };

const char* to_string(Role role) noexcept;
Role peer(Role party);

/// Per-party MAC key slots, one per round the party takes part in.
enum class MacSlot : std::uint8_t { EtSubmit = 0, EtAnnounce = 1, DrClaim = 2, DrAnnounce = 3 };
inline constexpr std::size_t kMacSlots = 4;

struct SessionId {
  std::array<std::uint8_t, 16> bytes{};

  std::string hex() const;
  static SessionId from_hex(const std::string& hex);
  friend bool operator==(const SessionId&, const SessionId&) = default;
};

/// Key material held by Alice or Bob (and mirrored by the TTP).
struct PartyKeys {
  Role role = Role::Alice;
  SessionId session;
  Params params;
  std::vector<gf2::FieldElem> et_keys;  // N subkeys of l bits
  OtpPad otp;                           // N*l bits: exactly one hash vector
  std::array<MacKey, kMacSlots> mac;    // 2(n+l) bits each

  MacKey& mac_key(MacSlot slot) { return mac[static_cast<std::size_t>(slot)]; }
  const MacKey& mac_key(MacSlot slot) const { return mac[static_cast<std::size_t>(slot)]; }

  std::uint64_t et_key_bits() const;
  std::uint64_t sc_key_bits() const;
};

using StoreKey = std::array<std::uint8_t, 32>;

/// Everything the TTP keeps: Omega, both parties' keys, and a local key that
/// authenticates the session store.
struct TtpSecret {
  SessionId session;
  Params params;
  std::vector<unsigned> omega;  // sorted, 0-based indices into [N]
  PartyKeys alice;
  PartyKeys bob;
  StoreKey store_key{};

  const PartyKeys& keys(Role party) const;
  PartyKeys& keys(Role party);
  bool in_omega(unsigned index) const;
};

struct KeyBundle {
  PartyKeys alice;
  PartyKeys bob;
  TtpSecret ttp;
};

/// Key-distribution phase. Omega is a uniform n-subset of [N] (partial
/// Fisher-Yates); k^A is uniform, k^B equals k^A on Omega and is fresh
/// elsewhere; secure-communication keys are independent per party.
/// Requires n + l <= 64 (MAC field degree).
KeyBundle keygen(const Params& params, EntropySource& entropy);

/// Exchanges the Alice/Bob labels of a bundle (keys and TTP mirrors).
KeyBundle swap_roles(KeyBundle bundle);

}  // namespace etdr
