#include "etdr/adversary.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include "etdr/bounds.hpp"
#include "etdr/error.hpp"
#include "etdr/hash.hpp"

namespace etdr::adversary {

namespace {

constexpr double kZ99 = 2.5758293035489;

Message random_message(std::uint64_t r, EntropySource& rng) {
  Message m;
  for (std::uint64_t done = 0; done < r;) {
    const unsigned c = static_cast<unsigned>(std::min<std::uint64_t>(64, r - done));
    m.append(rng.bits(c), c);
    done += c;
  }
  return m;
}

Message random_other(const Message& m, EntropySource& rng) {
  for (;;) {
    Message c = random_message(m.size(), rng);
    if (!(c == m)) return c;
  }
}

// Collision structure of a difference d = m* xor m under the attacker's keys:
// f(k, m*) = f(k, m) iff f(k, d) = 0 by linearity. For r <= 16 the digests of
// every difference are tabulated from the unit vectors.
class DiffHasher {
 public:
  static constexpr std::uint64_t kTableBits = 16;

  explicit DiffHasher(const PartyKeys& keys)
      : keys_(keys.et_keys), r_(keys.params.r), N_(keys.et_keys.size()) {
    if (r_ > kTableBits) return;
    const std::uint64_t count = std::uint64_t{1} << r_;
    table_.assign(count * N_, 0);
    for (std::uint64_t bit = 0; bit < r_; ++bit) {
      Message unit(r_);
      unit.set(bit, true);
      const HashVector hv = compute_hash_vector(keys_, unit, Role::Bob);
      // Message bit `bit` is integer bit r-1-bit.
      const std::uint64_t d = std::uint64_t{1} << (r_ - 1 - bit);
      for (std::size_t j = 0; j < N_; ++j) table_[d * N_ + j] = hv.values[j].value();
    }
    for (std::uint64_t d = 1; d < count; ++d) {
      const std::uint64_t low = d & (~d + 1);
      if (low == d) continue;
      for (std::size_t j = 0; j < N_; ++j) {
        table_[d * N_ + j] = table_[(d ^ low) * N_ + j] ^ table_[low * N_ + j];
      }
    }
  }

  bool tabulated() const noexcept { return !table_.empty(); }

  void zeros(std::uint64_t d, std::vector<std::uint8_t>& z) const {
    z.resize(N_);
    for (std::size_t j = 0; j < N_; ++j) z[j] = table_[d * N_ + j] == 0;
  }

  void zeros(const Message& d, std::vector<std::uint8_t>& z) const {
    const HashVector hv = compute_hash_vector(keys_, d, Role::Bob);
    z.resize(N_);
    for (std::size_t j = 0; j < N_; ++j) z[j] = hv.values[j].is_zero();
  }

  std::uint64_t r() const noexcept { return r_; }

 private:
  const std::vector<gf2::FieldElem>& keys_;
  std::uint64_t r_;
  std::size_t N_;
  std::vector<std::uint64_t> table_;
};

Message from_int(std::uint64_t v, std::uint64_t r) {
  Message m;
  m.append(v, static_cast<unsigned>(r));
  return m;
}

// Searches nonzero differences for the largest score; exhaustive when
// tabulated, otherwise a random budget.
template <typename Score>
Message best_difference(const DiffHasher& h, EntropySource& rng, Score score) {
  constexpr std::uint64_t kBudget = 4096;
  std::vector<std::uint8_t> z;
  long best_score = -1;
  if (h.tabulated()) {
    std::uint64_t best = 1;
    for (std::uint64_t d = 1; d < (std::uint64_t{1} << h.r()); ++d) {
      h.zeros(d, z);
      const long s = score(z);
      if (s > best_score) {
        best_score = s;
        best = d;
      }
    }
    return from_int(best, h.r());
  }
  Message best;
  const Message zero(h.r());
  for (std::uint64_t i = 0; i < kBudget; ++i) {
    Message d = random_message(h.r(), rng);
    if (d == zero) continue;
    h.zeros(d, z);
    const long s = score(z);
    if (s > best_score) {
      best_score = s;
      best = std::move(d);
    }
  }
  if (best_score < 0) best = random_other(zero, rng);
  return best;
}

long count(const std::vector<std::uint8_t>& z) { return std::count(z.begin(), z.end(), 1); }

Message xor_of(Message a, const Message& b) {
  a ^= b;
  return a;
}

Choice truthful_random(const Message& m, const PartyKeys& own, EntropySource& rng) {
  return {compute_hash_vector(own, m), random_other(m, rng)};
}

Choice truthful_nearest(const Message& m, const PartyKeys& own, EntropySource& rng) {
  const Message d = best_difference(DiffHasher(own), rng, count);
  return {compute_hash_vector(own, m), xor_of(m, d)};
}

Choice consistent_random(const Message& m, const PartyKeys& own, EntropySource& rng) {
  Message star = random_other(m, rng);
  return {compute_hash_vector(own, star), star};
}

Choice consistent_nearest(const Message& m, const PartyKeys& own, EntropySource& rng) {
  Message star = xor_of(m, best_difference(DiffHasher(own), rng, count));
  return {compute_hash_vector(own, star), star};
}

Choice flip_one(const Message& m, const PartyKeys& own, EntropySource& rng) {
  Message star = xor_of(m, best_difference(DiffHasher(own), rng, count));
  HashVector s = compute_hash_vector(own, m);
  const auto j = rng.uniform(s.values.size());
  const unsigned l = own.params.l;
  const std::uint64_t delta = 1 + rng.uniform(gf2::degree_mask(l));
  s.values[j] = gf2::FieldElem(s.values[j].value() ^ delta, l);
  return {s, star};
}

// Guesses an n-subset G, then prefers data colliding on all of G.
Choice omega_guess(const Message& m, const PartyKeys& own, EntropySource& rng) {
  const unsigned N = own.params.N, n = own.params.n;
  std::vector<unsigned> idx(N);
  for (unsigned i = 0; i < N; ++i) idx[i] = i;
  for (unsigned i = 0; i < n; ++i) std::swap(idx[i], idx[i + rng.uniform(N - i)]);
  std::vector<std::uint8_t> in_g(N, 0);
  for (unsigned i = 0; i < n; ++i) in_g[idx[i]] = 1;
  const Message d = best_difference(DiffHasher(own), rng, [&](const std::vector<std::uint8_t>& z) {
    long hit = 0;
    for (unsigned j = 0; j < N; ++j) hit += z[j] & in_g[j];
    return hit * static_cast<long>(N + 1) + count(z);
  });
  Message star = xor_of(m, d);
  return {compute_hash_vector(own, star), star};
}

}  // namespace

Interval wilson99(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = kZ99 * kZ99;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = kZ99 / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

bool GameResult::within_bound() const { return ci.low <= epsilon2.get_d(); }

GameResult play_game(const Params& params, const AttackStrategy& strategy, std::uint64_t trials,
                     std::uint64_t seed, Role malicious) {
  if (malicious == Role::Ttp) fail(ErrorKind::ParamDomain, "the TTP is trusted");
  if (trials == 0) fail(ErrorKind::ParamDomain, "trials must be >= 1");
  const Role honest = peer(malicious);
  GameResult res;
  res.strategy = strategy.name;
  res.trials = trials;
  res.epsilon2 = bounds::epsilon2(params.N, params.n, collision_bound(params.r, params.l)).value;

  for (std::uint64_t t = 0; t < trials; ++t) {
    SeededEntropy rng(seed, t);
    KeyBundle kb = keygen(params, rng);
    const Message m = random_message(params.r, rng);
    if (malicious == Role::Alice) kb = swap_roles(std::move(kb));
    const PartyKeys& atk = malicious == Role::Alice ? kb.alice : kb.bob;
    const PartyKeys& hon = malicious == Role::Alice ? kb.bob : kb.alice;

    Choice c = strategy.choose(m, atk, rng);
    if (c.m_star == m) fail(ErrorKind::ProtocolState, strategy.name + ": claimed data equals the honest data");
    c.s_star.owner = malicious;
    const HashVector s_h = compute_hash_vector(hon, m);

    SessionRecord rec(kb.ttp.session, params);
    const HashVector& s_a = malicious == Role::Alice ? c.s_star : s_h;
    const HashVector& s_b = malicious == Role::Alice ? s_h : c.s_star;
    if (et_decide(rec, kb.ttp, s_a, s_b) != EtOutcome::Success) continue;
    ++res.et_successes;
    const Message& claim_a = malicious == Role::Alice ? c.m_star : m;
    const Message& claim_b = malicious == Role::Alice ? m : c.m_star;
    const Verdict v = dr_arbitrate(rec, kb.ttp, claim_a, claim_b);
    const Verdict honest_wins = honest == Role::Alice ? Verdict::ACorrect : Verdict::BCorrect;
    if (v != honest_wins) ++res.attacker_wins;
  }
  res.ci = wilson99(res.attacker_wins, res.trials);
  return res;
}

GameResult play_control(const Params& params, std::uint64_t trials, std::uint64_t seed) {
  GameResult res;
  res.strategy = "honest-control";
  res.trials = trials;
  res.epsilon2 = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    SeededEntropy rng(seed, t);
    KeyBundle kb = keygen(params, rng);
    const Message m = random_message(params.r, rng);
    SessionRecord rec(kb.ttp.session, params);
    const auto s_a = compute_hash_vector(kb.alice, m);
    const auto s_b = compute_hash_vector(kb.bob, m);
    if (et_decide(rec, kb.ttp, s_a, s_b) != EtOutcome::Success) {
      ++res.attacker_wins;
      continue;
    }
    ++res.et_successes;
    if (dr_arbitrate(rec, kb.ttp, m, m) != Verdict::BothCorrect) ++res.attacker_wins;
  }
  res.ci = wilson99(res.attacker_wins, res.trials);
  return res;
}

std::vector<AttackStrategy> strategy_suite() {
  return {
      {"truthful-random", truthful_random},
      {"truthful-nearest", truthful_nearest},
      {"consistent-random", consistent_random},
      {"consistent-nearest", consistent_nearest},
      {"flip-one", flip_one},
      {"omega-guess", omega_guess},
  };
}

namespace {

// Independent reference arithmetic for the exact oracle: schoolbook carry-less
// product followed by bitwise long division.
struct RefField {
  unsigned l;
  std::uint32_t modulus;  // full polynomial including x^l

  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t prod = 0;
    for (unsigned i = 0; i < l; ++i) {
      if ((b >> i) & 1u) prod ^= a << i;
    }
    for (int bit = static_cast<int>(2 * l) - 2; bit >= static_cast<int>(l); --bit) {
      if ((prod >> bit) & 1u) prod ^= modulus << (bit - static_cast<int>(l));
    }
    return prod;
  }
};

RefField ref_field(unsigned l) {
  switch (l) {
    case 1: return {1, 0b11};
    case 2: return {2, 0b111};
    case 3: return {3, 0b1011};
    case 4: return {4, 0b10011};
    default: fail(ErrorKind::ParamDomain, "exact oracle supports l <= 4");
  }
}

struct RefHash {
  RefField field;
  unsigned r;

  // Blocks are taken from the top of the r-bit integer; the last block is
  // padded with zeros on its tail.
  std::uint32_t operator()(std::uint32_t key, std::uint32_t msg) const {
    const unsigned l = field.l;
    const unsigned blocks = (r + l - 1) / l;
    std::uint32_t sum = 0, power = 1;
    for (unsigned i = 0; i < blocks; ++i) {
      const unsigned lo = i * l;
      std::uint32_t block = 0;
      for (unsigned b = 0; b < l; ++b) {
        const unsigned pos = lo + b;
        const std::uint32_t bit = pos < r ? (msg >> (r - 1 - pos)) & 1u : 0u;
        block = (block << 1) | bit;
      }
      sum ^= field.mul(block, power);
      power = field.mul(power, key);
    }
    return sum;
  }
};

}  // namespace

ExactResult best_fixed_strategy_exact(const Params& params, const ExactOptions& options) {
  const unsigned N = params.N, n = params.n, l = params.l;
  const unsigned r = static_cast<unsigned>(params.r);
  if (N > 8 || l > 4 || params.r > 12 || l * (N - n) > 16 || n == 0 || n > N) {
    fail(ErrorKind::ParamDomain, "state space too large for exact enumeration");
  }
  const RefHash f{ref_field(l), r};
  const std::uint32_t key_count = 1u << l;
  const std::uint32_t msg_count = 1u << r;
  const std::uint64_t off_tuples = std::uint64_t{1} << (l * (N - n));

  std::vector<std::uint32_t> omegas;
  for (std::uint32_t mask = 0; mask < (1u << N); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) == n) omegas.push_back(mask);
  }
  const BigInt denom = BigInt(static_cast<unsigned long>(omegas.size())) * BigInt(static_cast<unsigned long>(off_tuples));

  ExactResult res;
  res.worst_view = -1;
  Rational total = 0;

  auto evaluate_view = [&](const std::vector<std::uint32_t>& kb, std::uint32_t ma) {
    std::uint64_t best = 0;
    unsigned best_t = 0;
    std::vector<std::uint32_t> s(N), fb_ma(N), fb_star(N);
    std::vector<std::uint32_t> fk_ma(key_count), fk_star(key_count), ka(N);
    for (unsigned j = 0; j < N; ++j) fb_ma[j] = f(kb[j], ma);
    for (std::uint32_t k = 0; k < key_count; ++k) fk_ma[k] = f(k, ma);

    for (std::uint32_t mstar = 0; mstar < msg_count; ++mstar) {
      if (mstar == ma) continue;
      // Any s with g^BB < N loses with certainty, so only s = f(k^B, m*) is
      // worth averaging over.
      for (unsigned j = 0; j < N; ++j) fb_star[j] = s[j] = f(kb[j], mstar);
      std::uint32_t tmask = 0;
      for (unsigned j = 0; j < N; ++j) tmask |= static_cast<std::uint32_t>(fb_ma[j] == fb_star[j]) << j;
      if (static_cast<unsigned>(std::popcount(tmask)) < n) continue;
      for (std::uint32_t k = 0; k < key_count; ++k) fk_star[k] = f(k, mstar);

      std::uint64_t wins = 0;
      for (const std::uint32_t omega : omegas) {
        if ((omega & tmask) != omega) continue;  // equality test fails for every off-Omega key
        for (std::uint64_t tuple = 0; tuple < off_tuples; ++tuple) {
          std::uint64_t rest = tuple;
          for (unsigned j = 0; j < N; ++j) {
            if ((omega >> j) & 1u) {
              ka[j] = kb[j];
            } else {
              ka[j] = static_cast<std::uint32_t>(rest & (key_count - 1));
              rest >>= l;
            }
          }
          bool et_ok = true;
          unsigned g_aa = 0, g_ab = 0, g_ba = 0, g_bb = 0;
          for (unsigned j = 0; j < N; ++j) {
            const std::uint32_t s_a = fk_ma[ka[j]];
            if (((omega >> j) & 1u) && s_a != s[j]) et_ok = false;
            g_aa += fk_ma[ka[j]] == s_a;
            g_ab += fk_star[ka[j]] == s_a;
            g_ba += fb_ma[j] == s[j];
            g_bb += fb_star[j] == s[j];
          }
          if (!et_ok) continue;
          const bool alice_wins = g_aa == N && (g_ba > g_ab || g_bb < N);
          if (!alice_wins) ++wins;
        }
      }
      if (wins > best) {
        best = wins;
        best_t = static_cast<unsigned>(std::popcount(tmask));
      }
    }
    Rational p(BigInt(static_cast<unsigned long>(best)), denom);
    p.canonicalize();
    total += p;
    ++res.views;
    if (p > res.worst_view) {
      res.worst_view = p;
      res.best_t = best_t;
    }
  };

  const std::uint64_t view_bits = std::uint64_t{l} * N + r;
  std::vector<std::uint32_t> kb(N);
  if (view_bits <= 12) {
    res.exhaustive = true;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << view_bits); ++v) {
      std::uint64_t rest = v;
      for (unsigned j = 0; j < N; ++j) {
        kb[j] = static_cast<std::uint32_t>(rest & (key_count - 1));
        rest >>= l;
      }
      evaluate_view(kb, static_cast<std::uint32_t>(rest));
    }
  } else {
    std::mt19937_64 gen(options.seed);
    std::fill(kb.begin(), kb.end(), 0u);
    evaluate_view(kb, 0);
    for (std::uint64_t v = 0; v < options.max_views; ++v) {
      for (unsigned j = 0; j < N; ++j) kb[j] = static_cast<std::uint32_t>(gen() & (key_count - 1));
      evaluate_view(kb, static_cast<std::uint32_t>(gen() & (msg_count - 1)));
    }
  }
  res.average = total / res.views;
  return res;
}

std::string to_csv(const std::vector<GameResult>& results) {
  std::ostringstream out;
  out << "strategy,trials,et_successes,wins,estimate,ci_low,ci_high,epsilon2,within_bound\n";
  for (const auto& g : results) {
    out << g.strategy << ',' << g.trials << ',' << g.et_successes << ',' << g.attacker_wins << ','
        << g.estimate() << ',' << g.ci.low << ',' << g.ci.high << ',' << to_sci(g.epsilon2) << ','
        << (g.within_bound() ? "yes" : "no") << '\n';
  }
  return out.str();
}

}  // namespace etdr::adversary
