#include "etdr/runner.hpp"

#include "etdr/error.hpp"

namespace etdr {

using transport::Frame;
using transport::Link;

LocalSession::LocalSession(KeyBundle keys, SessionStore& store, transport::ChannelModel model)
    : alice_(std::move(keys.alice)),
      bob_(std::move(keys.bob)),
      ttp_(std::move(keys.ttp), store),
      net_(std::move(model)) {}

PartyEndpoint& LocalSession::party(Role role) {
  if (role == Role::Alice) return alice_;
  if (role == Role::Bob) return bob_;
  fail(ErrorKind::ProtocolState, "no party endpoint for the TTP");
}

void LocalSession::pump_uplinks() {
  bool progress = true;
  while (progress) {
    progress = false;
    for (Link up : {Link::AliceToTtp, Link::BobToTtp}) {
      while (auto bytes = net_.recv(up)) {
        progress = true;
        try {
          const Frame f = transport::decode_frame(*bytes);
          for (auto& out : ttp_.on_frame(up, f)) net_.send(out.link, transport::encode_frame(out.frame));
        } catch (const Error&) {
          // Undecodable or out-of-phase frames are dropped, as on a socket.
        }
      }
    }
  }
}

template <typename T, typename Handler>
PartyResult<T> LocalSession::collect(Role role, Handler handler) {
  PartyResult<T> result;
  while (auto bytes = net_.recv(transport::downlink(role))) {
    if (result.value || result.error) continue;
    try {
      result.value = handler(transport::decode_frame(*bytes));
    } catch (const Error& e) {
      result.error = e.kind();
      result.message = e.what();
    }
  }
  if (!result.value && !result.error) {
    result.error = ErrorKind::Transport;
    result.message = "no announcement received";
  }
  return result;
}

EtRun LocalSession::run_equality_test(const Message& m_a, const Message& m_b) {
  net_.send(Link::AliceToTtp, transport::encode_frame(alice_.et_submit(m_a)));
  net_.send(Link::BobToTtp, transport::encode_frame(bob_.et_submit(m_b)));
  pump_uplinks();
  EtRun run;
  run.alice = collect<EtOutcome>(Role::Alice, [&](const Frame& f) { return alice_.on_et_announce(f); });
  run.bob = collect<EtOutcome>(Role::Bob, [&](const Frame& f) { return bob_.on_et_announce(f); });
  return run;
}

DrRun LocalSession::run_dispute(const Message& claim_a, const Message& claim_b) {
  net_.send(Link::AliceToTtp, transport::encode_frame(alice_.dr_claim(claim_a)));
  net_.send(Link::BobToTtp, transport::encode_frame(bob_.dr_claim(claim_b)));
  pump_uplinks();
  DrRun run;
  run.alice = collect<Verdict>(Role::Alice, [&](const Frame& f) { return alice_.on_dr_announce(f); });
  run.bob = collect<Verdict>(Role::Bob, [&](const Frame& f) { return bob_.on_dr_announce(f); });
  return run;
}

}  // namespace etdr
