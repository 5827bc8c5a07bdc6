#pragma once

#include <map>
#include <optional>
#include <vector>

#include "etdr/frame.hpp"
#include "etdr/protocol.hpp"
#include "etdr/session_store.hpp"

namespace etdr {

/// Alice's or Bob's side of one session:
///   Fresh -> (et_submit) EtSent -> (announce) EtDone -> (dr_claim) DrSent
///   -> (announce) DrDone; any authentication failure -> Aborted.
class PartyEndpoint {
 public:
  enum class State { Fresh, EtSent, EtDone, DrSent, DrDone, Aborted };

  explicit PartyEndpoint(PartyKeys keys);

  /// Hashes m, one-time-pads the hash vector and tags it. Consumes the whole
  /// pad and the EtSubmit MAC key.
  transport::Frame et_submit(const Message& m);
  EtOutcome on_et_announce(const transport::Frame& f);
  /// Tags the claimed data (sent in the clear).
  transport::Frame dr_claim(const Message& claim);
  Verdict on_dr_announce(const transport::Frame& f);

  State state() const noexcept { return state_; }
  Role role() const noexcept { return keys_.role; }
  const PartyKeys& keys() const noexcept { return keys_; }
  /// Skips to the dispute phase for a process that ran equality testing
  /// earlier (its spent keys restored from the ledger).
  void resume_after_equality_test();

 private:
  template <typename T>
  T handle_announce(const transport::Frame& f, transport::MsgType expected, MacSlot slot, State next);

  PartyKeys keys_;
  State state_ = State::Fresh;
  bool et_failed_ = false;
};

/// The TTP's frame-level state machine for one session. Every mutation of
/// the session record is persisted before announcements are released.
class TtpEndpoint {
 public:
  struct Outgoing {
    transport::Link link;
    transport::Frame frame;
  };

  /// Loads the session from `store` when present, otherwise creates it.
  TtpEndpoint(TtpSecret secret, SessionStore& store);

  /// Processes one frame received on `link`. Returns the frames to deliver,
  /// which are empty until both parties of the phase have been heard.
  /// A frame that fails authentication aborts the session and yields Error
  /// frames to both parties where an unspent key remains.
  std::vector<Outgoing> on_frame(transport::Link link, const transport::Frame& f);

  const SessionRecord& record() const noexcept { return record_; }
  const TtpSecret& secret() const noexcept { return secret_; }
  /// Description of the failure that aborted the session, if any.
  const std::string& abort_reason() const noexcept { return abort_reason_; }

 private:
  std::vector<Outgoing> abort(transport::AbortReason reason, const std::string& why);
  std::vector<Outgoing> announce(transport::MsgType type, std::uint8_t code, MacSlot slot);
  MacSlot announce_slot() const;

  TtpSecret secret_;
  SessionStore& store_;
  SessionRecord record_;
  std::map<Role, Message> claims_;
  std::string abort_reason_;
};

}  // namespace etdr
