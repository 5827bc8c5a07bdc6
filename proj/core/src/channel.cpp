#include "etdr/channel.hpp"

#include "etdr/error.hpp"

namespace etdr::transport {

MemoryNetwork::MemoryNetwork(ChannelModel model) : model_(std::move(model)), rng_(model_.seed) {}

void MemoryNetwork::send(Link link, std::vector<std::uint8_t> bytes) {
  std::lock_guard lock(mu_);
  const std::size_t index = transcript_.size();
  std::optional<std::vector<std::uint8_t>> out = bytes;
  for (const auto& m : model_.mutations) {
    if (m.frame_index != index || !out) continue;
    switch (m.kind) {
      case Mutation::Kind::FlipBit: {
        if (out->empty()) break;
        const std::size_t nbits = out->size() * 8;
        const std::size_t bit = m.bit ? *m.bit % nbits : rng_() % nbits;
        (*out)[bit / 8] ^= static_cast<std::uint8_t>(0x80U >> (bit % 8));
        break;
      }
      case Mutation::Kind::Drop: out.reset(); break;
      case Mutation::Kind::Replay:
        if (m.source_index < transcript_.size()) out = transcript_[m.source_index].sent;
        break;
    }
  }
  transcript_.push_back({link, std::move(bytes), out});
  if (out) {
    auto& q = queues_[link];
    if (model_.reorder) {
      q.push_front(*out);
    } else {
      q.push_back(*out);
    }
  }
}

std::optional<std::vector<std::uint8_t>> MemoryNetwork::recv(Link link) {
  std::lock_guard lock(mu_);
  auto& q = queues_[link];
  if (q.empty()) return std::nullopt;
  auto out = std::move(q.front());
  q.pop_front();
  return out;
}

bool MemoryNetwork::pending(Link link) const {
  std::lock_guard lock(mu_);
  const auto it = queues_.find(link);
  return it != queues_.end() && !it->second.empty();
}

TrafficReport measure_traffic(const Transcript& transcript, const Params& params) {
  TrafficReport rep;
  rep.et_budget_bits = params.et_comm_budget_bits();
  rep.dr_budget_bits = params.dr_comm_budget_bits();
  bool in_dr = false;
  for (const auto& e : transcript) {
    const Frame f = decode_frame(e.sent);
    const bool dr = f.type == MsgType::DrClaimA || f.type == MsgType::DrClaimB ||
                    f.type == MsgType::DrAnnounce || (f.type == MsgType::Error && in_dr);
    in_dr = in_dr || dr;
    PhaseTraffic& ph = dr ? rep.dr : rep.et;
    const std::uint64_t payload = semantic_payload_bits(f.type, params);
    const std::uint64_t total = e.sent.size() * 8ULL;
    ++ph.frames;
    ph.payload_bits += payload;
    ph.tag_bits += f.tag.bits();
    ph.framing_bits += total - payload - f.tag.bits();
    if (f.type == MsgType::DrClaimA || f.type == MsgType::DrClaimB) rep.dr_claim_bits += payload;
  }
  return rep;
}

}  // namespace etdr::transport
