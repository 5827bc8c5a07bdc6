#include "etdr/roles.hpp"

#include "etdr/error.hpp"

namespace etdr {

using transport::AbortReason;
using transport::Frame;
using transport::Link;
using transport::MsgType;

namespace {

MsgType submit_type(Role r) { return r == Role::Alice ? MsgType::EtSubmitA : MsgType::EtSubmitB; }
MsgType claim_type(Role r) { return r == Role::Alice ? MsgType::DrClaimA : MsgType::DrClaimB; }

}  // namespace

PartyEndpoint::PartyEndpoint(PartyKeys keys) : keys_(std::move(keys)) {
  if (keys_.role == Role::Ttp) fail(ErrorKind::ProtocolState, "PartyEndpoint needs Alice or Bob keys");
}

Frame PartyEndpoint::et_submit(const Message& m) {
  if (state_ != State::Fresh) fail(ErrorKind::ProtocolState, "equality test already started");
  const HashVector hv = compute_hash_vector(keys_, m);
  const BitString ct = otp_encrypt(keys_.otp, hv.to_bits());
  Frame f = transport::seal(submit_type(keys_.role), keys_.session, transport::pack_bits(ct),
                            transport::uplink(keys_.role), keys_.mac_key(MacSlot::EtSubmit));
  state_ = State::EtSent;
  return f;
}

template <typename T>
T PartyEndpoint::handle_announce(const Frame& f, MsgType expected, MacSlot slot, State next) {
  MacKey& key = keys_.mac_key(slot);
  if (key.consumed()) fail(ErrorKind::KeyExhausted, "announcement key already spent");
  const Link link = transport::downlink(keys_.role);
  if (!(f.session == keys_.session) || !transport::verify(f, link, key)) {
    state_ = State::Aborted;
    fail(ErrorKind::MacFailure, std::string(to_string(keys_.role)) + ": announcement failed authentication");
  }
  key.mark_consumed();
  if (f.type == MsgType::Error) {
    state_ = State::Aborted;
    fail(ErrorKind::ProtocolState, "TTP aborted the session (reason " +
                                       std::to_string(transport::payload_code(f)) + ")");
  }
  if (f.type != expected) {
    state_ = State::Aborted;
    fail(ErrorKind::ProtocolState, std::string("unexpected ") + transport::to_string(f.type));
  }
  const std::uint8_t code = transport::payload_code(f);
  state_ = next;
  return static_cast<T>(code);
}

EtOutcome PartyEndpoint::on_et_announce(const Frame& f) {
  if (state_ != State::EtSent) fail(ErrorKind::ProtocolState, "no equality test in flight");
  const auto code = handle_announce<std::uint8_t>(f, MsgType::EtAnnounce, MacSlot::EtAnnounce,
                                                  State::EtDone);
  if (code == 1) return EtOutcome::Success;
  if (code == 0) {
    et_failed_ = true;
    return EtOutcome::Failure;
  }
  state_ = State::Aborted;
  fail(ErrorKind::Malformed, "reserved equality-test announcement code");
}

Frame PartyEndpoint::dr_claim(const Message& claim) {
  if (state_ != State::EtDone) fail(ErrorKind::ProtocolState, "dispute requires a finished equality test");
  if (et_failed_) fail(ErrorKind::ProtocolState, "equality test failed; nothing to dispute");
  if (claim.size() != keys_.params.r) fail(ErrorKind::ParamDomain, "claimed data must be exactly r bits");
  Frame f = transport::seal(claim_type(keys_.role), keys_.session, transport::pack_bits(claim),
                            transport::uplink(keys_.role), keys_.mac_key(MacSlot::DrClaim));
  state_ = State::DrSent;
  return f;
}

Verdict PartyEndpoint::on_dr_announce(const Frame& f) {
  if (state_ != State::DrSent) fail(ErrorKind::ProtocolState, "no dispute in flight");
  return handle_announce<Verdict>(f, MsgType::DrAnnounce, MacSlot::DrAnnounce, State::DrDone);
}

void PartyEndpoint::resume_after_equality_test() {
  if (state_ != State::Fresh) fail(ErrorKind::ProtocolState, "endpoint already in use");
  if (keys_.mac_key(MacSlot::DrClaim).consumed()) {
    fail(ErrorKind::KeyExhausted, "dispute keys already spent");
  }
  state_ = State::EtDone;
}

TtpEndpoint::TtpEndpoint(TtpSecret secret, SessionStore& store)
    : secret_(std::move(secret)), store_(store) {
  if (store_.contains(secret_.session)) {
    record_ = store_.get(secret_.session);
    if (!(record_.params() == secret_.params)) {
      fail(ErrorKind::KeyIo, "stored session parameters differ from the TTP secret");
    }
    // Keys of rounds already completed are spent.
    for (Role r : {Role::Alice, Role::Bob}) {
      PartyKeys& k = secret_.keys(r);
      if (record_.hash_vector(r)) {
        k.otp.advance_to(k.otp.size());
        k.mac_key(MacSlot::EtSubmit).mark_consumed();
      }
      if (record_.et_outcome() != EtOutcome::Pending || record_.aborted()) {
        k.mac_key(MacSlot::EtAnnounce).mark_consumed();
      }
      if (record_.dr_outcome() || record_.aborted()) {
        k.mac_key(MacSlot::DrClaim).mark_consumed();
        k.mac_key(MacSlot::DrAnnounce).mark_consumed();
      }
    }
  } else {
    record_ = SessionRecord(secret_.session, secret_.params);
    store_.put(record_);
  }
}

MacSlot TtpEndpoint::announce_slot() const {
  return record_.et_outcome() == EtOutcome::Pending ? MacSlot::EtAnnounce : MacSlot::DrAnnounce;
}

std::vector<TtpEndpoint::Outgoing> TtpEndpoint::announce(MsgType type, std::uint8_t code, MacSlot slot) {
  std::vector<Outgoing> out;
  for (Role r : {Role::Alice, Role::Bob}) {
    MacKey& key = secret_.keys(r).mac_key(slot);
    if (key.consumed()) continue;
    const Link link = transport::downlink(r);
    out.push_back({link, transport::seal(type, secret_.session, transport::code_payload(code), link, key)});
  }
  return out;
}

std::vector<TtpEndpoint::Outgoing> TtpEndpoint::abort(AbortReason reason, const std::string& why) {
  const MacSlot slot = announce_slot();
  record_.abort();
  abort_reason_ = why;
  store_.put(record_);
  claims_.clear();
  return announce(MsgType::Error, static_cast<std::uint8_t>(reason), slot);
}

std::vector<TtpEndpoint::Outgoing> TtpEndpoint::on_frame(Link link, const Frame& f) {
  if (record_.aborted()) fail(ErrorKind::ProtocolState, "session aborted");
  if (!transport::is_uplink(link)) fail(ErrorKind::ProtocolState, "TTP received a frame on a downlink");
  const Role from = transport::party_of(link);
  PartyKeys& keys = secret_.keys(from);

  const bool et_phase = record_.et_outcome() == EtOutcome::Pending;
  if (!et_phase && record_.et_outcome() != EtOutcome::Success) {
    fail(ErrorKind::ProtocolState, "equality test failed; no dispute phase");
  }
  if (!et_phase && record_.dr_outcome()) fail(ErrorKind::ProtocolState, "dispute already arbitrated");

  const MacSlot slot = et_phase ? MacSlot::EtSubmit : MacSlot::DrClaim;
  MacKey& key = keys.mac_key(slot);
  if (key.consumed()) fail(ErrorKind::ProtocolState, std::string(to_string(from)) + " already submitted");

  const MsgType expected = et_phase ? submit_type(from) : claim_type(from);
  // The frame must authenticate as the round we are in: a frame replayed from
  // another round, link or session carries a tag under a different key or
  // context and is rejected here.
  if (f.type != expected || !(f.session == secret_.session) || !transport::verify(f, link, key)) {
    key.mark_consumed();
    return abort(AbortReason::MacFailure, std::string(transport::to_string(f.type)) + " on " +
                                              to_string(from) + " link failed authentication");
  }
  key.mark_consumed();

  if (et_phase) {
    BitString ct;
    try {
      ct = transport::unpack_bits(f.payload, secret_.params.hash_vector_bits());
    } catch (const Error& e) {
      return abort(AbortReason::Malformed, e.what());
    }
    const BitString plain = otp_encrypt(keys.otp, ct);
    record_.set_hash_vector(HashVector::from_bits(plain, secret_.params.l, secret_.params.N, from));
    store_.put(record_);
    const auto& s_a = record_.hash_vector(Role::Alice);
    const auto& s_b = record_.hash_vector(Role::Bob);
    if (!s_a || !s_b) return {};
    const EtOutcome outcome = et_decide(record_, secret_, *s_a, *s_b);
    store_.put(record_);
    return announce(MsgType::EtAnnounce, outcome == EtOutcome::Success ? 1 : 0, MacSlot::EtAnnounce);
  }

  try {
    claims_[from] = transport::unpack_bits(f.payload, secret_.params.r);
  } catch (const Error& e) {
    return abort(AbortReason::Malformed, e.what());
  }
  if (claims_.size() < 2) return {};
  const Verdict v = dr_arbitrate(record_, secret_, claims_.at(Role::Alice), claims_.at(Role::Bob));
  store_.put(record_);
  claims_.clear();
  return announce(MsgType::DrAnnounce, static_cast<std::uint8_t>(v), MacSlot::DrAnnounce);
}

}  // namespace etdr
