#pragma once

#include <optional>
#include <string>

#include "etdr/channel.hpp"
#include "etdr/error.hpp"
#include "etdr/roles.hpp"

namespace etdr {

/// What one party observed at the end of a phase: the announced value, or
/// the error that stopped it.
template <typename T>
struct PartyResult {
  std::optional<T> value;
  std::optional<ErrorKind> error;
  std::string message;

  bool ok() const noexcept { return value.has_value(); }
};

struct EtRun {
  PartyResult<EtOutcome> alice;
  PartyResult<EtOutcome> bob;
};

struct DrRun {
  PartyResult<Verdict> alice;
  PartyResult<Verdict> bob;
};

/// All three roles of one session wired through an in-memory network.
class LocalSession {
 public:
  LocalSession(KeyBundle keys, SessionStore& store, transport::ChannelModel model = {});

  EtRun run_equality_test(const Message& m_a, const Message& m_b);
  DrRun run_dispute(const Message& claim_a, const Message& claim_b);

  PartyEndpoint& party(Role role);
  TtpEndpoint& ttp() noexcept { return ttp_; }
  const transport::Transcript& transcript() const noexcept { return net_.transcript(); }

 private:
  void pump_uplinks();
  template <typename T, typename Handler>
  PartyResult<T> collect(Role role, Handler handler);

  PartyEndpoint alice_;
  PartyEndpoint bob_;
  TtpEndpoint ttp_;
  transport::MemoryNetwork net_;
};

}  // namespace etdr
