#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace etdr {

using BigInt = mpz_class;
using Rational = mpq_class;

/// 2^e as an exact rational (e may be negative).
Rational pow2(long e);
Rational pow(const Rational& base, unsigned long e);
BigInt binomial(unsigned long n, unsigned long k);
/// ceil(a / b) for b > 0.
BigInt ceil_div(const BigInt& a, const BigInt& b);
BigInt ceil(const Rational& x);

Rational make_rational(std::uint64_t num, std::uint64_t den);
/// Parses "1/16", "2^-4", "1e-12", "0.0625" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& x);
/// Scientific rendering for reports, e.g. "1.234e-05".
std::string to_sci(const Rational& x, int digits = 6);

}  // namespace etdr
