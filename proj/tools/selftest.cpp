#include "selftest.hpp"

#include <chrono>
#include <filesystem>
#include <random>

#include "etdr/bounds.hpp"
#include "etdr/channel.hpp"
#include "etdr/hash.hpp"
#include "etdr/itsmac.hpp"
#include "etdr/runner.hpp"

namespace etdr::cli {

namespace {

std::uint64_t clmul_reduce(std::uint64_t a, std::uint64_t b, unsigned d) {
  // Bit-serial multiply with reduction after each shift.
  const auto poly = gf2::irreducible_poly(d);
  const std::uint64_t mask = gf2::degree_mask(d);
  const std::uint64_t top = std::uint64_t{1} << (d - 1);
  std::uint64_t acc = 0;
  for (int i = static_cast<int>(d) - 1; i >= 0; --i) {
    const bool carry = (acc & top) != 0;
    acc = (acc << 1) & mask;
    if (carry) acc ^= poly.low;
    if ((b >> i) & 1u) acc ^= a;
  }
  return acc;
}

bool field_check() {
  std::mt19937_64 rng(7);
  for (unsigned d = 1; d <= 64; ++d) {
    const auto poly = gf2::irreducible_poly(d);
    const std::uint64_t mask = gf2::degree_mask(d);
    for (int i = 0; i < 200; ++i) {
      const std::uint64_t a = rng() & mask, b = rng() & mask;
      if (gf2::mul_raw(a, b, poly) != clmul_reduce(a, b, d)) return false;
    }
  }
  return true;
}

Message from_int(std::uint64_t v, unsigned r) {
  Message m;
  m.append(v, r);
  return m;
}

bool collision_check() {
  for (unsigned l = 2; l <= 3; ++l) {
    for (unsigned r = l + 1; r <= 3 * l; ++r) {
      const Rational q = collision_bound(r, l);
      const std::uint64_t keys = std::uint64_t{1} << l;
      for (std::uint64_t a = 0; a < (1u << r); ++a) {
        for (std::uint64_t b = a + 1; b < (1u << r); ++b) {
          std::uint64_t hits = 0;
          for (std::uint64_t k = 0; k < keys; ++k) {
            const gf2::FieldElem key(k, l);
            hits += hash_f(key, from_int(a, r), l) == hash_f(key, from_int(b, r), l);
          }
          if (Rational(hits, keys) > q) return false;
        }
      }
    }
  }
  return true;
}

bool mac_check() {
  const unsigned d = 3;
  for (unsigned r = 1; r <= 2 * d; ++r) {
    const Rational bound = achieved_forgery_bound(r, d);
    for (std::uint64_t a = 0; a < (1u << r); ++a) {
      for (std::uint64_t b = 0; b < (1u << r); ++b) {
        if (a == b) continue;
        std::vector<unsigned> by_delta(1u << d, 0);
        for (std::uint64_t k1 = 0; k1 < (1u << d); ++k1) {
          const MacKey key(gf2::FieldElem(k1, d), gf2::FieldElem(0, d));
          const auto delta = compute_tag(key, from_int(a, r)).value.value() ^
                             compute_tag(key, from_int(b, r)).value.value();
          ++by_delta[delta];
        }
        for (unsigned c : by_delta) {
          if (Rational(c, 1u << d) > bound) return false;
        }
      }
    }
  }
  return true;
}

bool soundness_check(transport::TrafficReport* traffic) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("etdr-selftest-" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
  const Params p = derive_params(256, pow2(-4));
  bool ok = true;
  for (std::uint64_t i = 0; i < 50 && ok; ++i) {
    SeededEntropy rng(99, i);
    KeyBundle kb = keygen(p, rng);
    Message m;
    for (int w = 0; w < 4; ++w) m.append(rng.next_u64(), 64);
    SessionStore store(dir, kb.ttp.store_key);
    LocalSession s(std::move(kb), store);
    const EtRun et = s.run_equality_test(m, m);
    ok = et.alice.value == EtOutcome::Success && et.bob.value == EtOutcome::Success;
    if (!ok) break;
    const DrRun dr = s.run_dispute(m, m);
    ok = dr.alice.value == Verdict::BothCorrect && dr.bob.value == Verdict::BothCorrect;
    if (i == 0) *traffic = transport::measure_traffic(s.transcript(), p);
  }
  std::filesystem::remove_all(dir);
  return ok;
}

bool bounds_check() {
  for (unsigned n = 2; n <= 12; ++n) {
    for (const Rational& q : {Rational(0), Rational(1, 16), Rational(31, 256), Rational(1, 8)}) {
      const auto rep = bounds::analyze(0, n, 0, 2 * n, q, std::nullopt);
      if (!rep.kl_dominates || !rep.pet_dominates) return false;
    }
  }
  return bounds::verify_theorem(256, pow2(-4)).satisfied;
}

}  // namespace

bool run_selftest(std::ostream& out) {
  bool all = true;
  auto report = [&](const char* name, bool ok) {
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    all = all && ok;
  };
  report("field multiply matches bit-serial reference", field_check());
  report("hash collision bound, exhaustive l<=3", collision_check());
  report("MAC substitution bound, exhaustive d=3", mac_check());
  transport::TrafficReport traffic;
  const bool sound = soundness_check(&traffic);
  report("honest runs succeed and arbitrate both-correct", sound);
  report("epsilon2 dominance grid and parameter corner", bounds_check());
  report("clean-run traffic within budgets",
         sound && traffic.et.semantic_bits() <= traffic.et_budget_bits &&
             traffic.dr.semantic_bits() <= traffic.dr_budget_bits);
  return all;
}

}  // namespace etdr::cli
