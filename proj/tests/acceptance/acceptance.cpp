// Acceptance suite. Usage: etdr_acceptance [criterion...]; with no
// arguments every criterion runs. Prints one PASS/FAIL line per criterion
// and exits nonzero if any selected criterion fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "etdr/adversary.hpp"
#include "etdr/bounds.hpp"
#include "etdr/hash.hpp"
#include "etdr/itsmac.hpp"
#include "etdr/runner.hpp"

using namespace etdr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

fs::path scratch(const std::string& tag) {
  return fs::temp_directory_path() / ("etdr-accept-" + tag + "-" + std::to_string(::getpid()));
}

Message random_message(std::uint64_t r, EntropySource& rng) {
  Message m;
  for (std::uint64_t done = 0; done < r; done += 64) {
    const unsigned c = static_cast<unsigned>(std::min<std::uint64_t>(64, r - done));
    m.append(rng.bits(c), c);
  }
  return m;
}

Rational ratio(unsigned long num, unsigned long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Message from_int(std::uint64_t v, unsigned r) {
  Message m;
  m.append(v, r);
  return m;
}

Outcome parameter_formulas() {
  const Params a = derive_params(256, pow2(-4));
  const Params b = derive_params(1ull << 50, parse_rational("1e-12"));
  const bool ok = a.n == 24 && a.l == 8 && a.N == 48 && a.total_key_bits() == 2048 &&
                  a.et_comm_budget_bits() == 1028 && a.dr_comm_budget_bits() == 772 && b.n == 132 &&
                  b.l == 50 && b.N == 264 && b.et_comm_budget_bits() == 27860 &&
                  b.et_comm_budget_bits() <= 64 * 1024;
  std::ostringstream d;
  d << "(256,2^-4): " << describe(a) << "; (2^50,1e-12): " << describe(b);
  return {ok, d.str()};
}

Outcome soundness() {
  const Params p = derive_params(256, pow2(-4));
  const fs::path dir = scratch("sound");
  unsigned failures = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SeededEntropy rng(2024, i);
    KeyBundle kb = keygen(p, rng);
    const Message m = random_message(p.r, rng);
    SessionStore store(dir, kb.ttp.store_key);
    LocalSession s(std::move(kb), store);
    const EtRun et = s.run_equality_test(m, m);
    if (et.alice.value != EtOutcome::Success || et.bob.value != EtOutcome::Success) {
      ++failures;
      continue;
    }
    const DrRun dr = s.run_dispute(m, m);
    if (dr.alice.value != Verdict::BothCorrect || dr.bob.value != Verdict::BothCorrect) ++failures;
  }
  fs::remove_all(dir);
  return {failures == 0, "1000 honest runs, " + std::to_string(failures) + " failures"};
}

// Collision fraction for every message pair. All pairs are compared directly
// for r <= 12; beyond that each pair (a, b) is reduced to its difference a^b,
// which is exact because f(k, .) is GF(2)-linear (checked on random pairs).
Outcome collision_exhaustive() {
  std::mt19937_64 rng(1);
  Rational worst_slack = 1;
  bool ok = true;
  std::uint64_t pairs = 0;
  for (unsigned l = 2; l <= 4; ++l) {
    const unsigned keys = 1u << l;
    for (unsigned r = l + 1; r <= 4 * l; ++r) {
      const std::uint64_t msgs = std::uint64_t{1} << r;
      std::vector<std::uint64_t> table(keys * msgs);
      for (unsigned k = 0; k < keys; ++k) {
        for (std::uint64_t m = 0; m < msgs; ++m) {
          table[k * msgs + m] = hash_f(gf2::FieldElem(k, l), from_int(m, r), l).value();
        }
      }
      const Rational q = collision_bound(r, l);
      unsigned max_hits = 0;
      if (r <= 12) {
        for (std::uint64_t a = 0; a < msgs; ++a) {
          for (std::uint64_t b = a + 1; b < msgs; ++b) {
            unsigned hits = 0;
            for (unsigned k = 0; k < keys; ++k) hits += table[k * msgs + a] == table[k * msgs + b];
            max_hits = std::max(max_hits, hits);
            ++pairs;
          }
        }
      } else {
        for (int i = 0; i < 200000; ++i) {
          const std::uint64_t a = rng() % msgs, b = rng() % msgs;
          const unsigned k = rng() % keys;
          if ((table[k * msgs + a] ^ table[k * msgs + b]) != table[k * msgs + (a ^ b)]) ok = false;
        }
        for (std::uint64_t d = 1; d < msgs; ++d) {
          unsigned hits = 0;
          for (unsigned k = 0; k < keys; ++k) hits += table[k * msgs + d] == table[k * msgs];
          max_hits = std::max(max_hits, hits);
        }
        pairs += msgs * (msgs - 1) / 2;
      }
      const Rational worst = ratio(max_hits, keys);
      if (worst > q) ok = false;
      worst_slack = std::min(worst_slack, Rational(q - worst));
    }
  }
  return {ok, std::to_string(pairs) + " pairs over l in {2,3,4}; min slack to bound " + to_string(worst_slack)};
}

// Optimal substitution forgery: after seeing (m, tag(m)) the forger outputs
// (m', t') maximizing Pr[tag(m') = t' | tag(m)], averaged over the observed
// tag; the maximum over m is compared with 1/16.
Outcome forgery_exhaustive() {
  const unsigned d = 4, r = 8;
  const unsigned keys = 1u << (2 * d), msgs = 1u << r, tags = 1u << d;
  std::vector<std::uint8_t> table(keys * msgs);
  for (unsigned k = 0; k < keys; ++k) {
    const MacKey key(gf2::FieldElem(k >> d, d), gf2::FieldElem(k & (tags - 1), d));
    for (unsigned m = 0; m < msgs; ++m) {
      table[k * msgs + m] = static_cast<std::uint8_t>(compute_tag(key, from_int(m, r)).value.value());
    }
  }
  Rational best = 0;
  for (unsigned m = 0; m < msgs; ++m) {
    unsigned total = 0;
    for (unsigned tau = 0; tau < tags; ++tau) {
      std::vector<unsigned> consistent;
      for (unsigned k = 0; k < keys; ++k) {
        if (table[k * msgs + m] == tau) consistent.push_back(k);
      }
      unsigned best_count = 0;
      for (unsigned m2 = 0; m2 < msgs; ++m2) {
        if (m2 == m) continue;
        unsigned counts[16] = {};
        for (unsigned k : consistent) best_count = std::max(best_count, ++counts[table[k * msgs + m2]]);
      }
      total += best_count;
    }
    best = std::max(best, ratio(total, keys));
  }
  const Rational target = forgery_bound(r, d);
  return {best <= target, "optimal substitution forgery " + to_string(best) + " vs bound " + to_string(target) +
                              " (construction guarantees " + to_string(achieved_forgery_bound(r, d)) + ")"};
}

Outcome epsilon2_machinery() {
  bool ok = true;
  std::string why;
  const Rational grid[] = {Rational(0), Rational(1, 16), Rational(31, 256), Rational(1, 8)};
  for (unsigned n = 2; n <= 24; ++n) {
    for (const Rational& q : grid) {
      const bounds::BoundReport rep = bounds::analyze(0, n, 0, 2 * n, q, std::nullopt);
      if (!rep.kl_dominates || !rep.pet_dominates) {
        ok = false;
        why += " dominance n=" + std::to_string(n) + " q=" + to_string(q);
      }
      if (rep.epsilon2 != oracle::epsilon2(2 * n, n, q).value) {
        ok = false;
        why += " eps2 mismatch n=" + std::to_string(n);
      }
    }
  }
  const auto a = bounds::verify_theorem(256, pow2(-4));
  const auto b = bounds::verify_theorem(1ull << 50, parse_rational("1e-12"));
  ok = ok && a.satisfied && b.satisfied;
  std::ostringstream d;
  d << "grid n=2..24 x 4 q values" << (why.empty() ? "" : ";" + why) << "; eps2(256,2^-4)=" << to_sci(a.epsilon2)
    << " <= " << to_sci(*a.epsilon1) << "; eps2(2^50,1e-12)=" << to_sci(b.epsilon2) << " <= "
    << to_sci(*b.epsilon1);
  return {ok, d.str()};
}

Outcome adversary_bound() {
  struct Config {
    unsigned N, n, l, r;
  };
  const Config grid[] = {{4, 2, 2, 4}, {4, 2, 2, 6}, {6, 3, 2, 6}, {6, 3, 3, 9}};
  bool ok = true;
  std::ostringstream d;
  for (const Config& c : grid) {
    const Params p = experimental_params(c.r, c.n, c.l, c.N);
    const Rational eps2 = bounds::epsilon2(p.N, p.n, collision_bound(p.r, p.l)).value;
    const auto ex = adversary::best_fixed_strategy_exact(p);
    ok = ok && ex.worst_view <= eps2;
    d << "(" << c.N << "," << c.n << "," << c.l << "," << c.r << ") exact " << to_string(ex.worst_view)
      << " eps2 " << to_string(eps2);
    double top = 0;
    for (const auto& s : adversary::strategy_suite()) {
      const auto g = adversary::play_game(p, s, 100000, 7);
      ok = ok && g.within_bound();
      top = std::max(top, g.ci.high);
    }
    d << " max MC upper CI " << top << "; ";
  }
  return {ok, d.str()};
}

Outcome traffic() {
  bool ok = true;
  std::ostringstream d;
  for (const auto& [r, eps] : {std::pair<std::uint64_t, Rational>{256, pow2(-4)}, {1024, pow2(-8)}}) {
    const Params p = derive_params(r, eps);
    SeededEntropy rng(77);
    KeyBundle kb = keygen(p, rng);
    const Message m = random_message(p.r, rng);
    const fs::path dir = scratch("traffic");
    SessionStore store(dir, kb.ttp.store_key);
    LocalSession s(std::move(kb), store);
    ok = ok && s.run_equality_test(m, m).alice.ok() && s.run_dispute(m, m).alice.ok();
    const auto t = transport::measure_traffic(s.transcript(), p);
    fs::remove_all(dir);
    const std::uint64_t n = p.n, l = p.l;
    const std::uint64_t et_budget = 4 * (n * l + 2 * n + 2 * l + 1);
    const std::uint64_t dr_budget = 2 * (r + 4 * n + 4 * l + 2);
    ok = ok && t.et.semantic_bits() <= et_budget && t.dr.semantic_bits() <= dr_budget && t.dr_claim_bits == 2 * r;
    d << "r=" << r << ": ET " << t.et.semantic_bits() << "/" << et_budget << ", DR " << t.dr.semantic_bits() << "/"
      << dr_budget << ", claims " << t.dr_claim_bits << ", framing " << t.et.framing_bits + t.dr.framing_bits
      << "; ";
  }
  return {ok, d.str()};
}

Outcome tamper_resistance() {
  const Params p = derive_params(256, pow2(-4));
  const fs::path dir = scratch("tamper");
  std::mt19937_64 pick(8);
  unsigned undetected = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    SeededEntropy rng(808, i);
    KeyBundle kb = keygen(p, rng);
    const Message m = random_message(p.r, rng);
    // Rounds 0..3 are the equality test (two submissions, two announcements),
    // 4..7 the dispute; frame sizes differ so the bit is drawn per round.
    const std::size_t round = pick() % 8;
    const bool submit = round < 2, claim = round == 4 || round == 5;
    const std::size_t payload = submit ? (p.hash_vector_bits() + 7) / 8 : claim ? (p.r + 7) / 8 : 1;
    const std::size_t bits = (24 + payload + (p.mac_bits() + 7) / 8) * 8;
    transport::ChannelModel model{i, {{transport::Mutation::Kind::FlipBit, round, pick() % bits, 0}}, false};
    SessionStore store(dir, kb.ttp.store_key);
    LocalSession s(std::move(kb), store, model);
    const EtRun et = s.run_equality_test(m, m);
    bool detected = !et.alice.ok() || !et.bob.ok();
    if (!detected) {
      const DrRun dr = s.run_dispute(m, m);
      detected = !dr.alice.ok() || !dr.bob.ok();
    }
    undetected += !detected;
  }
  fs::remove_all(dir);
  return {undetected == 0, "1000 single-bit tamperings, " + std::to_string(undetected) + " undetected"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"parameter formulas", parameter_formulas},
      {"soundness", soundness},
      {"hash collision bound, exhaustive", collision_exhaustive},
      {"MAC forgery bound 1/16, exhaustive", forgery_exhaustive},
      {"epsilon2 machinery", epsilon2_machinery},
      {"adversary bound at desk scale", adversary_bound},
      {"traffic accounting", traffic},
      {"tamper resistance", tamper_resistance},
  };
  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion " << argv[i] << '\n';
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(c - 1));
  }
  if (selected.empty()) {
    for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
  }
  bool all = true;
  for (std::size_t i : selected) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
