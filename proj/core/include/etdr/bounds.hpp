#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "etdr/params.hpp"
#include "etdr/rational.hpp"

namespace etdr::bounds {

/// Probability that a uniform n-subset of [N] lies inside a fixed t-subset:
/// prod_{i<n} (t-i)/(N-i). Requires n <= t <= N.
Rational p_et(unsigned t, unsigned N, unsigned n);

/// Binomial tail sum_{u=t-n}^{N-n} C(N-n,u) q^u (1-q)^(N-n-u).
Rational p_dr_upper(unsigned t, unsigned N, unsigned n, const Rational& q);

/// P(X >= k) for X ~ Bin(M, q), k = 0..M+1.
std::vector<Rational> binomial_tails(unsigned M, const Rational& q);

struct Epsilon2 {
  Rational value;
  unsigned argmax = 0;  // smallest maximizing t
};

/// max_{t in [n, N]} p_et(t) * p_dr_upper(t).
Epsilon2 epsilon2(unsigned N, unsigned n, const Rational& q);

/// D(p||q) in bits, double precision; for grid checks only.
double kl_divergence(double p, double q);

/// (2n-t+1) * 2^(-n D(p||q)) with p = t/n - 1, for N = 2n and n < t <= N,
/// rounded upward to an exact rational. q = 0 gives 0 and t = 2n gives q^n.
Rational kl_bound(unsigned t, unsigned N, unsigned n, const Rational& q);

struct BoundRow {
  unsigned t = 0;
  Rational p_et;
  Rational p_dr;
  Rational product;
  std::optional<Rational> kl;  // only for N = 2n, t > n
};

struct BoundReport {
  std::uint64_t r = 0;
  unsigned n = 0;
  unsigned l = 0;
  unsigned N = 0;
  Rational q;
  Rational epsilon2;
  unsigned argmax = 0;
  std::optional<Rational> epsilon1;
  bool satisfied = false;

  std::vector<BoundRow> table;  // empty when N exceeds kTableCap
  bool kl_dominates = true;     // p_dr <= kl_bound on every tabulated t
  bool pet_dominates = true;    // p_et(t) <= (t/2n)^n on every tabulated t
  // Side conditions the security claim relies on.
  bool et_side_ok = false;      // p_et(t) <= eps1 for t <= 3n/2
  bool dr_side_ok = false;      // p_dr(t) <= (n/2+1) 2^(-n/2) <= eps1 for t > 3n/2
};

inline constexpr unsigned kTableCap = 1u << 16;

/// Computes the report for explicit (r, n, l, N) and collision bound q.
/// Side conditions and `satisfied` are evaluated when eps1 is given.
BoundReport analyze(std::uint64_t r, unsigned n, unsigned l, unsigned N, const Rational& q,
                    std::optional<Rational> eps1);

/// Derives parameters for (r, epsilon), sets eps1 = epsilon/16 and checks
/// eps2 <= eps1. Throws Error{ParamDomain} outside the supported parameter domain.
BoundReport verify_theorem(std::uint64_t r, const Rational& epsilon);

std::string to_csv(const BoundReport& report);
std::string summary(const BoundReport& report);

}  // namespace etdr::bounds
