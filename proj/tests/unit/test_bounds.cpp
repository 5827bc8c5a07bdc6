#include <gtest/gtest.h>

#include <algorithm>

#include "../support/oracles.hpp"
#include "etdr/bounds.hpp"
#include "etdr/error.hpp"

using namespace etdr;
using namespace etdr::bounds;

namespace {

const Rational kGridQ[] = {Rational(0), Rational(1, 16), Rational(31, 256), Rational(1, 8)};

}  // namespace

TEST(Bounds, PetExamples) {
  EXPECT_EQ(p_et(48, 48, 24), Rational(1));
  EXPECT_EQ(p_et(24, 48, 24), Rational(BigInt(1), binomial(48, 24)));
  EXPECT_EQ(p_et(3, 4, 2), Rational(1, 2));
  EXPECT_THROW(p_et(1, 4, 2), Error);
  EXPECT_THROW(p_et(5, 4, 2), Error);
}

TEST(Bounds, PetByEnumeration) {
  // Fraction of 2-subsets of [4] inside the 3-set {0,1,2}.
  unsigned inside = 0, total = 0;
  for (unsigned mask = 0; mask < 16; ++mask) {
    if (__builtin_popcount(mask) != 2) continue;
    ++total;
    inside += (mask & 0b0111u) == mask;
  }
  Rational frac(inside, total);
  frac.canonicalize();
  EXPECT_EQ(frac, p_et(3, 4, 2));
}

TEST(Bounds, PetMatchesFactorialFormula) {
  for (unsigned n = 1; n <= 24; ++n) {
    for (unsigned t = n; t <= 2 * n; ++t) ASSERT_EQ(p_et(t, 2 * n, n), oracle::p_et(t, 2 * n, n));
  }
}

TEST(Bounds, PdrExamples) {
  EXPECT_EQ(p_dr_upper(24, 48, 24, Rational(31, 256)), Rational(1));
  EXPECT_EQ(p_dr_upper(25, 48, 24, Rational(0)), Rational(0));
  EXPECT_EQ(p_dr_upper(4, 4, 2, Rational(1, 4)), Rational(1, 16));
  EXPECT_THROW(p_dr_upper(4, 4, 2, Rational(3, 2)), Error);
}

TEST(Bounds, PdrMatchesOracle) {
  for (unsigned n = 2; n <= 12; ++n) {
    for (const Rational& q : kGridQ) {
      for (unsigned t = n; t <= 2 * n; ++t) ASSERT_EQ(p_dr_upper(t, 2 * n, n, q), oracle::p_dr(t, 2 * n, n, q));
    }
  }
}

TEST(Bounds, Epsilon2AtZeroQ) {
  for (unsigned n = 1; n <= 10; ++n) {
    const Epsilon2 e = epsilon2(2 * n, n, Rational(0));
    EXPECT_EQ(e.value, Rational(BigInt(1), binomial(2 * n, n)));
    EXPECT_EQ(e.argmax, n);
  }
}

TEST(Bounds, Epsilon2MatchesBruteForce) {
  for (unsigned n = 2; n <= 16; ++n) {
    for (const Rational& q : kGridQ) {
      const Epsilon2 e = epsilon2(2 * n, n, q);
      const oracle::Eps2 o = oracle::epsilon2(2 * n, n, q);
      ASSERT_EQ(e.value, o.value) << n;
      ASSERT_EQ(e.argmax, o.t) << n;
    }
  }
}

TEST(Bounds, Epsilon2Regression) {
  const Epsilon2 e = epsilon2(48, 24, Rational(31, 256));
  EXPECT_EQ(to_string(e.value),
            "35343173589149750124329585836991475344902002844161466021/"
            "19244696295147402926571301853667186535472319155898171459603791872");
  EXPECT_EQ(e.argmax, 32u);
  EXPECT_EQ(e.value, oracle::epsilon2(48, 24, Rational(31, 256)).value);
}

TEST(Bounds, Epsilon2MonotoneInQ) {
  for (unsigned n : {3u, 8u, 24u}) {
    Rational prev = -1;
    for (unsigned k = 0; k <= 32; ++k) {
      const Rational v = epsilon2(2 * n, n, Rational(k, 256)).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Bounds, KlDominatesTail) {
  for (unsigned t = 25; t <= 48; ++t) {
    EXPECT_LE(p_dr_upper(t, 48, 24, Rational(31, 256)), kl_bound(t, 48, 24, Rational(31, 256))) << t;
  }
  for (unsigned n = 2; n <= 24; ++n) {
    for (const Rational& q : kGridQ) {
      for (unsigned t = n + 1; t <= 2 * n; ++t) ASSERT_LE(p_dr_upper(t, 2 * n, n, q), kl_bound(t, 2 * n, n, q));
    }
  }
}

TEST(Bounds, KlEndpoint) {
  const Rational q(31, 256);
  EXPECT_EQ(kl_bound(48, 48, 24, q), pow(q, 24));
  EXPECT_EQ(p_dr_upper(48, 48, 24, q), pow(q, 24));
  EXPECT_THROW(kl_bound(24, 48, 24, q), Error);
  EXPECT_THROW(kl_bound(30, 50, 24, q), Error);
}

TEST(Bounds, DivergenceAtLeastHalf) {
  for (int pi = 0; pi <= 50; ++pi) {
    const double p = 0.5 + pi / 100.0;
    for (int qi = 1; qi <= 125; ++qi) {
      const double q = qi / 1000.0;
      EXPECT_GE(kl_divergence(p, q), 0.5) << p << " " << q;
    }
  }
}

TEST(Bounds, PetBelowPowerBound) {
  for (unsigned n = 2; n <= 24; ++n) {
    for (unsigned t = n; t <= 2 * n; ++t) ASSERT_LE(p_et(t, 2 * n, n), pow(Rational(t, 2 * n), n));
  }
}

TEST(Bounds, VerifyTheorem) {
  const BoundReport small = verify_theorem(256, pow2(-4));
  EXPECT_TRUE(small.satisfied);
  EXPECT_TRUE(small.et_side_ok);
  EXPECT_TRUE(small.dr_side_ok);
  EXPECT_EQ(small.epsilon1, Rational(1, 256));
  EXPECT_EQ(small.q, Rational(31, 256));
  EXPECT_EQ(small.table.size(), 25u);

  const BoundReport big = verify_theorem(1ull << 50, parse_rational("1e-12"));
  EXPECT_TRUE(big.satisfied);
  EXPECT_EQ(big.N, 264u);
  EXPECT_LE(big.epsilon2, *big.epsilon1);

  try {
    verify_theorem(256, pow2(-3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParamDomain);
  }
}

TEST(Bounds, ReportInvariantsAndCsv) {
  const BoundReport rep = analyze(0, 5, 0, 10, Rational(1, 8), std::nullopt);
  Rational best = 0;
  for (const auto& row : rep.table) {
    EXPECT_GE(row.p_et, 0);
    EXPECT_LE(row.p_et, 1);
    EXPECT_LE(row.p_dr, 1);
    best = std::max(best, row.product);
  }
  EXPECT_EQ(best, rep.epsilon2);
  const std::string csv = to_csv(rep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
  EXPECT_EQ(csv.rfind("t,p_et,p_dr_upper,product,kl_bound\n", 0), 0u);
}
