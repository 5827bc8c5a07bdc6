#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <vector>

#include "etdr/frame.hpp"
#include "etdr/params.hpp"

namespace etdr::transport {

/// A declarative mutation applied to the `frame_index`-th frame sent on the
/// network (0-based, counting every link).
struct Mutation {
  enum class Kind {
    FlipBit,  // flip `bit` (or a seeded random bit when unset)
    Drop,     // never deliver
    Replay,   // deliver a copy of frame `source_index` instead
  };
  Kind kind = Kind::FlipBit;
  std::size_t frame_index = 0;
  std::optional<std::size_t> bit;
  std::size_t source_index = 0;
};

/// Models the unauthenticated public channel. Deterministic given `seed`.
struct ChannelModel {
  std::uint64_t seed = 0;
  std::vector<Mutation> mutations;
  /// Deliver queued frames on each link in reverse order.
  bool reorder = false;
};

struct TranscriptEntry {
  Link link;
  std::vector<std::uint8_t> sent;
  std::optional<std::vector<std::uint8_t>> delivered;  // empty when dropped
};

using Transcript = std::vector<TranscriptEntry>;

/// In-memory duplex links between the parties and the TTP.
class MemoryNetwork {
 public:
  explicit MemoryNetwork(ChannelModel model = {});

  void send(Link link, std::vector<std::uint8_t> bytes);
  std::optional<std::vector<std::uint8_t>> recv(Link link);
  bool pending(Link link) const;

  const Transcript& transcript() const noexcept { return transcript_; }

 private:
  ChannelModel model_;
  std::mt19937_64 rng_;
  Transcript transcript_;
  std::map<Link, std::deque<std::vector<std::uint8_t>>> queues_;
  mutable std::mutex mu_;
};

struct PhaseTraffic {
  std::uint64_t frames = 0;
  std::uint64_t payload_bits = 0;   // semantic payload content
  std::uint64_t tag_bits = 0;
  std::uint64_t framing_bits = 0;   // headers and byte padding
  std::uint64_t semantic_bits() const noexcept { return payload_bits + tag_bits; }
};

struct TrafficReport {
  PhaseTraffic et;
  PhaseTraffic dr;
  std::uint64_t et_budget_bits = 0;
  std::uint64_t dr_budget_bits = 0;
  std::uint64_t dr_claim_bits = 0;
};

/// Counts protocol-semantic bits of every frame as sent, split by phase.
TrafficReport measure_traffic(const Transcript& transcript, const Params& params);

}  // namespace etdr::transport
