#include <gtest/gtest.h>

#include <random>

#include "../support/oracles.hpp"
#include "etdr/error.hpp"
#include "etdr/gf2.hpp"

using namespace etdr;
using namespace etdr::gf2;

TEST(Gf2, TablePolynomialsAreIrreducible) {
  for (unsigned d = 1; d <= 64; ++d) {
    const ReductionPoly p = irreducible_poly(d);
    EXPECT_EQ(p.degree, d);
    EXPECT_TRUE(is_irreducible(p)) << "degree " << d;
  }
}

TEST(Gf2, RabinAgreesWithTrialDivision) {
  for (unsigned d = 1; d <= 12; ++d) {
    for (std::uint64_t low = 0; low < (std::uint64_t{1} << d); ++low) {
      EXPECT_EQ(is_irreducible({d, low}), oracle::irreducible(d, low)) << d << " " << low;
    }
  }
  for (unsigned d = 13; d <= 20; ++d) {
    EXPECT_TRUE(oracle::irreducible(d, irreducible_poly(d).low)) << d;
  }
}

TEST(Gf2, TableUsesMinimalWeight) {
  // No irreducible binomial exists beyond degree 1; where a trinomial exists,
  // the table entry must be one.
  for (unsigned d = 2; d <= 20; ++d) {
    bool trinomial_exists = false;
    for (unsigned k = 1; k < d && !trinomial_exists; ++k) {
      trinomial_exists = oracle::irreducible(d, 1 | (std::uint64_t{1} << k));
    }
    const int weight = __builtin_popcountll(irreducible_poly(d).low) + 1;
    EXPECT_EQ(weight, trinomial_exists ? 3 : 5) << d;
  }
}

TEST(Gf2, MultiplyMatchesOracle) {
  std::mt19937_64 rng(1);
  for (unsigned d = 1; d <= 64; ++d) {
    const ReductionPoly p = irreducible_poly(d);
    for (int i = 0; i < 100; ++i) {
      const std::uint64_t a = rng() & degree_mask(d), b = rng() & degree_mask(d);
      ASSERT_EQ(mul_raw(a, b, p), oracle::gf_mul(a, b, d, p.low)) << d;
      ASSERT_EQ(gf_mul(FieldElem(a, d), FieldElem(b, d), p).value(), oracle::gf_mul(a, b, d, p.low));
    }
  }
}

TEST(Gf2, MultiplicativeGroupOrder) {
  // a^(2^d - 1) = 1 for every nonzero a, exhaustively for small d.
  for (unsigned d = 1; d <= 10; ++d) {
    const Field f(d);
    for (std::uint64_t a = 1; a < (std::uint64_t{1} << d); ++a) {
      EXPECT_EQ(gf_pow(f.elem(a), (std::uint64_t{1} << d) - 1, f.poly()).value(), 1u);
    }
  }
}

TEST(Gf2, ValidationErrors) {
  EXPECT_THROW(FieldElem(4, 2), Error);
  EXPECT_THROW(irreducible_poly(0), Error);
  EXPECT_THROW(irreducible_poly(65), Error);
  try {
    gf_add(FieldElem(1, 3), FieldElem(1, 4));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegreeMismatch);
  }
}
