#include "etdr/protocol.hpp"

#include <chrono>
#include <string>

#include "etdr/error.hpp"

namespace etdr {

BitString HashVector::to_bits() const {
  BitString out;
  for (const auto& d : values) out.append(d.value(), d.degree());
  return out;
}

HashVector HashVector::from_bits(const BitString& bits, unsigned l, unsigned N, Role owner) {
  if (bits.size() != std::uint64_t{N} * l) {
    fail(ErrorKind::Malformed, "hash vector has " + std::to_string(bits.size()) + " bits, expected " +
                                   std::to_string(std::uint64_t{N} * l));
  }
  HashVector hv;
  hv.owner = owner;
  hv.values.reserve(N);
  for (unsigned i = 0; i < N; ++i) hv.values.emplace_back(bits.read(std::uint64_t{i} * l, l), l);
  return hv;
}

HashVector compute_hash_vector(std::span<const gf2::FieldElem> keys, const Message& m, Role owner) {
  if (keys.empty()) fail(ErrorKind::ParamDomain, "no hash keys");
  MultiPolyHasher h(keys, keys.front().degree());
  h.update(m);
  return HashVector{owner, h.finish()};
}

HashVector compute_hash_vector(const PartyKeys& keys, const Message& m) {
  if (m.size() != keys.params.r) {
    fail(ErrorKind::ParamDomain, "message has " + std::to_string(m.size()) +
                                     " bits, keys were issued for r=" + std::to_string(keys.params.r));
  }
  return compute_hash_vector(keys.et_keys, m, keys.role);
}

const char* to_string(EtOutcome outcome) noexcept {
  switch (outcome) {
    case EtOutcome::Pending: return "pending";
    case EtOutcome::Success: return "success";
    case EtOutcome::Failure: return "failure";
  }
  return "?";
}

const char* to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::BothCorrect: return "both-correct";
    case Verdict::ACorrect: return "alice-correct";
    case Verdict::BCorrect: return "bob-correct";
    case Verdict::Undecidable: return "undecidable";
  }
  return "?";
}

Verdict arbitration_rule(unsigned N, const GCounts& g, bool claims_equal) {
  if (claims_equal) return Verdict::BothCorrect;
  const bool a_wins = g.aa == N && (g.ba > g.ab || g.bb < N);
  const bool b_wins = g.bb == N && (g.ab > g.ba || g.aa < N);
  // With g^AA = g^BB = N the disjuncts reduce to g^BA > g^AB and its converse.
  if (a_wins && b_wins) fail(ErrorKind::ProtocolState, "arbitration rule fired for both parties");
  if (a_wins) return Verdict::ACorrect;
  if (b_wins) return Verdict::BCorrect;
  return Verdict::Undecidable;
}

std::uint64_t now_ms() {
  using namespace std::chrono;
  return static_cast<std::uint64_t>(
      duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count());
}

SessionRecord::SessionRecord(SessionId id, Params params)
    : id_(id), params_(std::move(params)), created_ms_(now_ms()) {}

const std::optional<HashVector>& SessionRecord::hash_vector(Role party) const {
  if (party == Role::Ttp) fail(ErrorKind::ProtocolState, "the TTP submits no hash vector");
  return party == Role::Alice ? s_a_ : s_b_;
}

void SessionRecord::set_hash_vector(const HashVector& hv) {
  auto& slot = hv.owner == Role::Alice ? s_a_ : s_b_;
  if (hv.owner == Role::Ttp) fail(ErrorKind::ProtocolState, "hash vector owner must be a party");
  if (slot) fail(ErrorKind::ProtocolState, "hash vector already recorded for this session");
  slot = hv;
}

void SessionRecord::set_et_outcome(EtOutcome outcome) {
  if (et_outcome_ != EtOutcome::Pending) fail(ErrorKind::ProtocolState, "equality test already decided");
  if (outcome == EtOutcome::Pending) fail(ErrorKind::ProtocolState, "cannot reset to pending");
  et_outcome_ = outcome;
  et_decided_ms_ = now_ms();
}

void SessionRecord::set_dr_outcome(Verdict verdict) {
  if (dr_outcome_) fail(ErrorKind::ProtocolState, "dispute already arbitrated");
  dr_outcome_ = verdict;
  dr_decided_ms_ = now_ms();
}

void SessionRecord::abort() { aborted_ = true; }

SessionRecord SessionRecord::from_raw(Raw raw) {
  SessionRecord s;
  s.id_ = raw.id;
  s.params_ = std::move(raw.params);
  s.s_a_ = std::move(raw.s_a);
  s.s_b_ = std::move(raw.s_b);
  s.et_outcome_ = raw.et_outcome;
  s.dr_outcome_ = raw.dr_outcome;
  s.aborted_ = raw.aborted;
  s.created_ms_ = raw.created_ms;
  s.et_decided_ms_ = raw.et_decided_ms;
  s.dr_decided_ms_ = raw.dr_decided_ms;
  return s;
}

SessionRecord::Raw SessionRecord::raw() const {
  return Raw{id_,         params_,     s_a_,          s_b_,         et_outcome_,
             dr_outcome_, aborted_,    created_ms_,   et_decided_ms_, dr_decided_ms_};
}

bool SessionRecord::is_extended_by(const SessionRecord& newer) const {
  if (!(id_ == newer.id_) || !(params_ == newer.params_)) return false;
  if (created_ms_ != newer.created_ms_) return false;
  if (s_a_ && newer.s_a_ != s_a_) return false;
  if (s_b_ && newer.s_b_ != s_b_) return false;
  if (et_outcome_ != EtOutcome::Pending &&
      (newer.et_outcome_ != et_outcome_ || newer.et_decided_ms_ != et_decided_ms_)) {
    return false;
  }
  if (dr_outcome_ && (newer.dr_outcome_ != dr_outcome_ || newer.dr_decided_ms_ != dr_decided_ms_)) {
    return false;
  }
  if (aborted_ && !newer.aborted_) return false;
  return true;
}

bool operator==(const SessionRecord& a, const SessionRecord& b) {
  return a.id_ == b.id_ && a.params_ == b.params_ && a.s_a_ == b.s_a_ && a.s_b_ == b.s_b_ &&
         a.et_outcome_ == b.et_outcome_ && a.dr_outcome_ == b.dr_outcome_ &&
         a.aborted_ == b.aborted_ && a.created_ms_ == b.created_ms_ &&
         a.et_decided_ms_ == b.et_decided_ms_ && a.dr_decided_ms_ == b.dr_decided_ms_;
}

namespace {

void check_vector(const HashVector& hv, const Params& p, Role owner) {
  if (hv.owner != owner || hv.values.size() != p.N) {
    fail(ErrorKind::ProtocolState, std::string("malformed hash vector for ") + to_string(owner));
  }
  for (const auto& d : hv.values) {
    if (d.degree() != p.l) fail(ErrorKind::DegreeMismatch, "hash value of wrong length");
  }
}

}  // namespace

EtOutcome et_decide(SessionRecord& session, const TtpSecret& secret, const HashVector& s_a,
                    const HashVector& s_b) {
  if (session.aborted()) fail(ErrorKind::ProtocolState, "session aborted");
  if (session.et_outcome() != EtOutcome::Pending) {
    fail(ErrorKind::ProtocolState, "equality test already decided");
  }
  const Params& p = session.params();
  check_vector(s_a, p, Role::Alice);
  check_vector(s_b, p, Role::Bob);

  bool equal = true;
  for (unsigned j : secret.omega) {
    if (!(s_a.values[j] == s_b.values[j])) {
      equal = false;
      break;
    }
  }
  if (!session.hash_vector(Role::Alice)) session.set_hash_vector(s_a);
  if (!session.hash_vector(Role::Bob)) session.set_hash_vector(s_b);
  const EtOutcome outcome = equal ? EtOutcome::Success : EtOutcome::Failure;
  session.set_et_outcome(outcome);
  return outcome;
}

GCounts g_counts(const TtpSecret& secret, const HashVector& s_a, const HashVector& s_b,
                 const Message& m_a, const Message& m_b) {
  auto count = [](const HashVector& computed, const HashVector& stored) {
    unsigned c = 0;
    for (std::size_t j = 0; j < computed.values.size(); ++j) {
      if (computed.values[j] == stored.values[j]) ++c;
    }
    return c;
  };
  const auto& ka = secret.alice.et_keys;
  const auto& kb = secret.bob.et_keys;
  GCounts g;
  g.aa = count(compute_hash_vector(ka, m_a, Role::Alice), s_a);
  g.ab = count(compute_hash_vector(ka, m_b, Role::Alice), s_a);
  g.ba = count(compute_hash_vector(kb, m_a, Role::Bob), s_b);
  g.bb = count(compute_hash_vector(kb, m_b, Role::Bob), s_b);
  return g;
}

Verdict dr_arbitrate(SessionRecord& session, const TtpSecret& secret, const Message& m_a_star,
                     const Message& m_b_star) {
  if (session.aborted()) fail(ErrorKind::ProtocolState, "session aborted");
  if (session.et_outcome() != EtOutcome::Success) {
    fail(ErrorKind::ProtocolState, "dispute resolution requires a successful equality test");
  }
  if (session.dr_outcome()) fail(ErrorKind::ProtocolState, "dispute already arbitrated");
  const Params& p = session.params();
  if (m_a_star.size() != p.r || m_b_star.size() != p.r) {
    fail(ErrorKind::ParamDomain, "claimed data must be exactly r bits");
  }
  const auto& s_a = *session.hash_vector(Role::Alice);
  const auto& s_b = *session.hash_vector(Role::Bob);
  const GCounts g = g_counts(secret, s_a, s_b, m_a_star, m_b_star);
  const Verdict v = arbitration_rule(p.N, g, m_a_star == m_b_star);
  session.set_dr_outcome(v);
  return v;
}

}  // namespace etdr
