#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "etdr/adversary.hpp"
#include "etdr/bounds.hpp"
#include "etdr/error.hpp"
#include "etdr/keyfile.hpp"
#include "etdr/params.hpp"
#include "etdr/roles.hpp"
#include "etdr/session_store.hpp"
#include "etdr/socket.hpp"
#include "selftest.hpp"

namespace fs = std::filesystem;
using namespace etdr;

namespace {

enum Exit : int { kOk = 0, kOther = 1, kParamDomain = 2, kKeyIo = 3, kMac = 4, kProtocol = 5 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParamDomain: return kParamDomain;
    case ErrorKind::KeyIo:
    case ErrorKind::KeyExhausted: return kKeyIo;
    case ErrorKind::MacFailure: return kMac;
    case ErrorKind::ProtocolState: return kProtocol;
    default: return kOther;
  }
}

struct ParamArgs {
  std::uint64_t r = 256;
  std::string epsilon = "2^-4";
  bool experiment = false;
  unsigned n = 0, l = 0, N = 0;

  void add(CLI::App* app) {
    app->add_option("--r", r, "Data length in bits");
    app->add_option("--epsilon", epsilon, "Security level, e.g. 2^-4, 1/16, 1e-12");
    app->add_flag("--experiment", experiment, "Use explicit --n/--l/--N instead of deriving them");
    app->add_option("--n", n, "|Omega| (with --experiment)");
    app->add_option("--l", l, "Hash length (with --experiment)");
    app->add_option("--N", N, "Number of subkeys (with --experiment)");
  }

  Params resolve() const {
    if (experiment) return experimental_params(r, n, l, N);
    Rational eps;
    try {
      eps = parse_rational(epsilon);
    } catch (const std::exception& e) {
      fail(ErrorKind::ParamDomain, std::string("bad --epsilon: ") + e.what());
    }
    return derive_params(r, eps);
  }
};

Message read_message(const fs::path& path, std::uint64_t r) {
  auto bytes = read_file(path);
  if (bytes.size() != (r + 7) / 8) {
    fail(ErrorKind::ParamDomain, path.string() + " has " + std::to_string(bytes.size()) +
                                     " bytes; r=" + std::to_string(r) + " needs " + std::to_string((r + 7) / 8));
  }
  return Message(std::move(bytes), r);
}

int cmd_params(const ParamArgs& pa, bool csv) {
  const Params p = pa.resolve();
  if (csv) {
    std::cout << "r,n,l,N,total_key_bits,et_comm_budget_bits,dr_comm_budget_bits\n"
              << p.r << ',' << p.n << ',' << p.l << ',' << p.N << ',' << p.total_key_bits() << ','
              << p.et_comm_budget_bits() << ',' << p.dr_comm_budget_bits() << '\n';
  } else {
    std::cout << describe(p) << '\n';
  }
  return kOk;
}

int cmd_keygen(const ParamArgs& pa, const fs::path& out, std::optional<std::uint64_t> seed) {
  const Params p = pa.resolve();
  std::unique_ptr<EntropySource> entropy;
  if (seed) {
    std::cerr << "warning: deterministic keys from --seed; for testing only\n";
    entropy = std::make_unique<SeededEntropy>(*seed);
  } else {
    entropy = std::make_unique<SystemEntropy>();
  }
  const KeyBundle kb = keygen(p, *entropy);
  fs::create_directories(out);
  write_party_keys(out / "alice.key", kb.alice);
  write_party_keys(out / "bob.key", kb.bob);
  write_ttp_secret(out / "ttp.key", kb.ttp);
  std::cout << "session " << kb.ttp.session.hex() << '\n' << describe(p) << '\n';
  return kOk;
}

int cmd_ttp(const fs::path& keys, const fs::path& store_dir, const std::string& listen,
            const std::string& phase, int timeout_s) {
  const TtpSecret secret = read_ttp_secret(keys);
  SessionStore store(store_dir, secret.store_key);
  TtpEndpoint ttp(secret, store);
  transport::TcpListener listener(transport::Address::parse(listen));
  std::cout << "listening on port " << listener.port() << std::endl;
  const auto timeout = std::chrono::seconds(timeout_s);

  if (ttp.record().aborted()) fail(ErrorKind::ProtocolState, "session was aborted earlier");
  if (ttp.record().et_outcome() == EtOutcome::Pending) {
    transport::serve_phase(ttp, listener, nullptr, timeout);
    if (ttp.record().aborted()) fail(ErrorKind::MacFailure, "session aborted: " + ttp.abort_reason());
    if (ttp.record().et_outcome() == EtOutcome::Pending) fail(ErrorKind::Transport, "equality test incomplete");
    std::cout << "equality test: " << to_string(ttp.record().et_outcome()) << std::endl;
  }
  if (phase == "et" || ttp.record().et_outcome() != EtOutcome::Success) return kOk;
  if (!ttp.record().dr_outcome()) {
    transport::serve_phase(ttp, listener, nullptr, timeout);
    if (ttp.record().aborted()) fail(ErrorKind::MacFailure, "session aborted: " + ttp.abort_reason());
    if (!ttp.record().dr_outcome()) fail(ErrorKind::Transport, "dispute incomplete");
  }
  std::cout << "verdict: " << to_string(*ttp.record().dr_outcome()) << std::endl;
  return kOk;
}

PartyKeys load_party(const fs::path& keys) {
  PartyKeys k = read_party_keys(keys);
  read_ledger(keys).apply(k);
  return k;
}

int cmd_party(const fs::path& keys, const fs::path& data, const std::string& ttp_addr, int timeout_s) {
  PartyKeys k = load_party(keys);
  if (k.mac_key(MacSlot::EtSubmit).consumed()) fail(ErrorKind::KeyExhausted, "equality test already run with these keys");
  const Message m = read_message(data, k.params.r);
  PartyEndpoint ep(std::move(k));
  const transport::Frame f = ep.et_submit(m);
  // Record the spend before anything leaves the process.
  write_ledger(keys, KeyLedger::capture(ep.keys()));
  const auto reply = transport::exchange(transport::Address::parse(ttp_addr), transport::encode_frame(f),
                                         std::chrono::seconds(timeout_s));
  try {
    const EtOutcome o = ep.on_et_announce(transport::decode_frame(reply));
    write_ledger(keys, KeyLedger::capture(ep.keys()));
    std::cout << "equality test: " << to_string(o) << '\n';
  } catch (const Error&) {
    write_ledger(keys, KeyLedger::capture(ep.keys()));
    throw;
  }
  return kOk;
}

int cmd_dispute(const fs::path& keys, const fs::path& claim, const std::string& ttp_addr, int timeout_s) {
  PartyKeys k = load_party(keys);
  if (!k.mac_key(MacSlot::EtAnnounce).consumed()) fail(ErrorKind::ProtocolState, "run the equality test first");
  const Message m = read_message(claim, k.params.r);
  PartyEndpoint ep(std::move(k));
  ep.resume_after_equality_test();
  const transport::Frame f = ep.dr_claim(m);
  write_ledger(keys, KeyLedger::capture(ep.keys()));
  const auto reply = transport::exchange(transport::Address::parse(ttp_addr), transport::encode_frame(f),
                                         std::chrono::seconds(timeout_s));
  try {
    const Verdict v = ep.on_dr_announce(transport::decode_frame(reply));
    write_ledger(keys, KeyLedger::capture(ep.keys()));
    std::cout << "verdict: " << to_string(v) << '\n';
  } catch (const Error&) {
    write_ledger(keys, KeyLedger::capture(ep.keys()));
    throw;
  }
  return kOk;
}

int cmd_bounds(const ParamArgs& pa, const std::string& q_text, bool csv) {
  bounds::BoundReport rep;
  if (pa.experiment) {
    const Params p = pa.resolve();
    const Rational q = q_text.empty() ? collision_bound(p.r, p.l) : parse_rational(q_text);
    rep = bounds::analyze(p.r, p.n, p.l, p.N, q, std::nullopt);
  } else {
    rep = bounds::verify_theorem(pa.r, parse_rational(pa.epsilon));
  }
  if (csv) std::cout << bounds::to_csv(rep);
  std::cout << bounds::summary(rep);
  return pa.experiment || rep.satisfied ? kOk : kOther;
}

int cmd_attack(const ParamArgs& pa, std::uint64_t trials, std::uint64_t seed, const std::string& strategy,
               const std::string& malicious, bool exact, bool csv) {
  const Params p = pa.resolve();
  const Role bad = malicious == "alice" ? Role::Alice : Role::Bob;
  std::vector<adversary::GameResult> results;
  for (const auto& s : adversary::strategy_suite()) {
    if (!strategy.empty() && s.name != strategy) continue;
    results.push_back(adversary::play_game(p, s, trials, seed, bad));
  }
  if (results.empty()) fail(ErrorKind::ParamDomain, "unknown strategy " + strategy);
  bool ok = true;
  if (csv) {
    std::cout << adversary::to_csv(results);
  } else {
    for (const auto& g : results) {
      std::cout << g.strategy << ": wins " << g.attacker_wins << "/" << g.trials << " (et passed "
                << g.et_successes << "), 99% CI [" << g.ci.low << ", " << g.ci.high << "], eps2 "
                << to_sci(g.epsilon2) << (g.within_bound() ? "" : "  EXCEEDS BOUND") << '\n';
    }
  }
  for (const auto& g : results) ok = ok && g.within_bound();
  if (exact) {
    const auto ex = adversary::best_fixed_strategy_exact(p);
    std::cout << "exact optimum: worst view " << to_string(ex.worst_view) << " (" << to_sci(ex.worst_view)
              << "), mean " << to_sci(ex.average) << " over " << ex.views
              << (ex.exhaustive ? " views (all)" : " views (sampled)") << '\n';
    ok = ok && ex.worst_view <= results.front().epsilon2;
  }
  return ok ? kOk : kOther;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equality testing with dispute resolution"};
  app.require_subcommand(1);

  ParamArgs pa;
  bool csv = false;

  auto* params = app.add_subcommand("params", "Derive protocol parameters");
  pa.add(params);
  params->add_flag("--csv", csv, "Machine-readable output");

  auto* kg = app.add_subcommand("keygen", "Generate key files for Alice, Bob and the TTP");
  pa.add(kg);
  std::string out_dir = "keys";
  std::optional<std::uint64_t> seed;
  kg->add_option("--out", out_dir, "Output directory");
  kg->add_option("--seed", seed, "Deterministic keys (testing only)");

  auto* ttp = app.add_subcommand("ttp", "Run the trusted third party");
  std::string keys, store_dir = "sessions", listen = "127.0.0.1:7400", phase = "all";
  int timeout_s = 30;
  ttp->add_option("--keys", keys, "TTP key file")->required();
  ttp->add_option("--store", store_dir, "Session store directory");
  ttp->add_option("--listen", listen, "host:port");
  ttp->add_option("--phase", phase, "et or all")->check(CLI::IsMember({"et", "all"}));
  ttp->add_option("--timeout", timeout_s, "Seconds to wait for parties");

  auto* party = app.add_subcommand("party", "Run the equality test as Alice or Bob");
  std::string data, ttp_addr = "127.0.0.1:7400";
  party->add_option("--keys", keys, "Party key file")->required();
  party->add_option("--data", data, "File holding exactly ceil(r/8) bytes")->required();
  party->add_option("--ttp", ttp_addr, "host:port");
  party->add_option("--timeout", timeout_s, "Seconds to wait for the TTP");

  auto* dispute = app.add_subcommand("dispute", "Claim data for arbitration");
  dispute->add_option("--keys", keys, "Party key file")->required();
  dispute->add_option("--claim", data, "Claimed data file")->required();
  dispute->add_option("--ttp", ttp_addr, "host:port");
  dispute->add_option("--timeout", timeout_s, "Seconds to wait for the TTP");

  auto* bnd = app.add_subcommand("bounds", "Exact security bounds");
  pa.add(bnd);
  std::string q_text;
  bnd->add_option("--q", q_text, "Override the collision bound (with --experiment)");
  bnd->add_flag("--csv", csv, "Per-t table as CSV");

  auto* atk = app.add_subcommand("attack", "Play the adversary game");
  pa.add(atk);
  std::uint64_t trials = 10000, atk_seed = 1;
  std::string strategy, malicious = "bob";
  bool exact = false;
  atk->add_option("--trials", trials, "Games per strategy");
  atk->add_option("--seed", atk_seed, "Base seed for key generation and choices");
  atk->add_option("--strategy", strategy, "One suite member (default: all)");
  atk->add_option("--malicious", malicious, "Party played by the adversary")->check(CLI::IsMember({"alice", "bob"}));
  atk->add_flag("--exact", exact, "Also compute the exact optimum (tiny parameters)");
  atk->add_flag("--csv", csv, "Results as CSV");

  auto* st = app.add_subcommand("selftest", "Run built-in consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (params->parsed()) return cmd_params(pa, csv);
    if (kg->parsed()) return cmd_keygen(pa, out_dir, seed);
    if (ttp->parsed()) return cmd_ttp(keys, store_dir, listen, phase, timeout_s);
    if (party->parsed()) return cmd_party(keys, data, ttp_addr, timeout_s);
    if (dispute->parsed()) return cmd_dispute(keys, data, ttp_addr, timeout_s);
    if (bnd->parsed()) return cmd_bounds(pa, q_text, csv);
    if (atk->parsed()) return cmd_attack(pa, trials, atk_seed, strategy, malicious, exact, csv);
    if (st->parsed()) return cli::run_selftest(std::cout) ? kOk : kOther;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
