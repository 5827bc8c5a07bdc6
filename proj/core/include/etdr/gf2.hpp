#pragma once

#include <cstdint>

namespace etdr::gf2 {

inline constexpr unsigned kMinDegree = 1;
inline constexpr unsigned kMaxDegree = 64;

/// Reduction polynomial x^degree + low(x). `low` holds the coefficients of
/// x^0 .. x^(degree-1); the leading term is implicit, so degree 64 fits.
struct ReductionPoly {
  unsigned degree = 0;
  std::uint64_t low = 0;

  friend bool operator==(const ReductionPoly&, const ReductionPoly&) = default;
};

/// Element of GF(2^degree) in the polynomial basis: bit i is the
/// coefficient of x^i. Bits at or above `degree` are always zero.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(std::uint64_t value, unsigned degree);

  static FieldElem zero(unsigned degree) { return FieldElem(0, degree); }
  static FieldElem one(unsigned degree) { return FieldElem(1, degree); }

  std::uint64_t value() const noexcept { return value_; }
  unsigned degree() const noexcept { return degree_; }
  bool is_zero() const noexcept { return value_ == 0; }

  friend bool operator==(const FieldElem&, const FieldElem&) = default;

 private:
  std::uint64_t value_ = 0;
  unsigned degree_ = 1;
};

std::uint64_t degree_mask(unsigned degree);

FieldElem gf_add(FieldElem a, FieldElem b);
FieldElem gf_mul(FieldElem a, FieldElem b, const ReductionPoly& p);
/// a^e by square-and-multiply.
FieldElem gf_pow(FieldElem a, std::uint64_t e, const ReductionPoly& p);

/// Raw multiply on already-validated values; used on hot paths.
std::uint64_t mul_raw(std::uint64_t a, std::uint64_t b, const ReductionPoly& p) noexcept;

/// Fixed table entry for `degree` (see docs/irreducible_polynomials.md).
ReductionPoly irreducible_poly(unsigned degree);

/// Rabin's test: x^(2^d) == x mod p and gcd(x^(2^(d/q)) - x, p) == 1 for
/// every prime q | d.
bool is_irreducible(const ReductionPoly& p);

/// Degree-checked field context bundling the reduction polynomial.
class Field {
 public:
  explicit Field(unsigned degree) : poly_(irreducible_poly(degree)) {}

  unsigned degree() const noexcept { return poly_.degree; }
  const ReductionPoly& poly() const noexcept { return poly_; }

  FieldElem elem(std::uint64_t value) const { return FieldElem(value, poly_.degree); }
  FieldElem add(FieldElem a, FieldElem b) const { return gf_add(a, b); }
  FieldElem mul(FieldElem a, FieldElem b) const { return gf_mul(a, b, poly_); }

 private:
  ReductionPoly poly_;
};

}  // namespace etdr::gf2
