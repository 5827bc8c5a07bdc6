#pragma once

#include <filesystem>
#include <mutex>
#include <span>
#include <vector>

#include "etdr/keys.hpp"
#include "etdr/protocol.hpp"

namespace etdr {

// Session file, one per session, named <session-id-hex>.session:
//
//   "ETSR" | version u8 (=1)
//   | field* where field = len u32 | bytes, in order:
//       session id [16], params [40], s_A, s_B (N*l bits packed, empty when
//       absent), et_outcome u8, dr_outcome u8 (0xFF absent), aborted u8,
//       created_ms u64, et_decided_ms u64, dr_decided_ms u64
//   | HMAC-SHA256 [32] over everything before it, keyed with the TTP-local
//     store key.

std::vector<std::uint8_t> encode_session(const SessionRecord& record, const StoreKey& key);
SessionRecord decode_session(std::span<const std::uint8_t> bytes, const StoreKey& key);

/// Durable, append-only TTP session storage. Thread-safe.
class SessionStore {
 public:
  SessionStore(std::filesystem::path dir, StoreKey key);

  /// Writes `record`; an existing record may only be extended (unset fields
  /// filled in), never changed.
  void put(const SessionRecord& record);
  SessionRecord get(const SessionId& id) const;
  bool contains(const SessionId& id) const;

  std::filesystem::path path_of(const SessionId& id) const;

 private:
  std::filesystem::path dir_;
  StoreKey key_;
  mutable std::mutex mu_;
};

}  // namespace etdr
