#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "etdr/entropy.hpp"
#include "etdr/keys.hpp"
#include "etdr/protocol.hpp"

namespace etdr::adversary {

/// The cheating party's fixed commitment: the hash vector it submits in the
/// equality test and the data it claims in the dispute.
struct Choice {
  HashVector s_star;
  Message m_star;
};

/// A fixed (non-adaptive) attack. `choose` sees the honest party's data and
/// the attacker's own keys, never Omega or the honest party's keys.
struct AttackStrategy {
  std::string name;
  std::function<Choice(const Message& m_honest, const PartyKeys& own, EntropySource& rng)> choose;
};

/// Wilson score interval at z = 2.5758 (99%).
struct Interval {
  double low = 0;
  double high = 0;
};
Interval wilson99(std::uint64_t successes, std::uint64_t trials);

struct GameResult {
  std::string strategy;
  std::uint64_t trials = 0;
  std::uint64_t et_successes = 0;
  std::uint64_t attacker_wins = 0;  // verdict in {attacker correct, undecidable}
  Rational epsilon2;                // reference bound for these parameters
  Interval ci;

  double estimate() const noexcept {
    return trials ? static_cast<double>(attacker_wins) / static_cast<double>(trials) : 0.0;
  }
  /// Fails only when the whole interval lies above epsilon2.
  bool within_bound() const;
};

/// Per trial t: fresh keys and honest data from stream (seed, t); the honest
/// party submits truthfully and claims its data; the attacker (Bob by
/// default, or Alice on relabeled keys) plays `strategy`.
GameResult play_game(const Params& params, const AttackStrategy& strategy, std::uint64_t trials,
                     std::uint64_t seed, Role malicious = Role::Bob);

/// Control arm: both parties honest with equal data. Any loss is counted in
/// attacker_wins.
GameResult play_control(const Params& params, std::uint64_t trials, std::uint64_t seed);

/// truthful-random, truthful-nearest, consistent-random, consistent-nearest,
/// flip-one, omega-guess.
std::vector<AttackStrategy> strategy_suite();

struct ExactOptions {
  std::uint64_t max_views = 256;  // sampled views when not exhaustive
  std::uint64_t seed = 1;
};

struct ExactResult {
  Rational worst_view;   // max over views of the best choice's success
  Rational average;      // mean over views of the best choice's success
  std::uint64_t views = 0;
  bool exhaustive = false;  // every (k^B, m^A) enumerated
  unsigned best_t = 0;      // collision count of the worst view's best choice
};

/// Exact optimum over fixed attacker choices by enumeration, per attacker
/// view (k^B, m^A), of Omega and the honest party's keys off Omega. Uses its
/// own field arithmetic. Requires N <= 8, l <= 4, r <= 12 and
/// l(N-n) <= 16.
ExactResult best_fixed_strategy_exact(const Params& params, const ExactOptions& options = {});

std::string to_csv(const std::vector<GameResult>& results);

}  // namespace etdr::adversary
