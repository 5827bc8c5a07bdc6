#include "etdr/gf2.hpp"

#if defined(__x86_64__)
#include <immintrin.h>
#endif

#include <array>
#include <string>
#include <vector>

#include "etdr/error.hpp"

namespace etdr::gf2 {

namespace {

// Minimal-weight irreducible polynomials, leading term omitted.
constexpr std::array<std::uint64_t, 64> kIrreducibleLow = {
    0x1ULL,        0x3ULL,        0x3ULL,   0x3ULL,   0x5ULL,    0x3ULL,   0x3ULL,
    0x1BULL,       0x3ULL,        0x9ULL,   0x5ULL,   0x9ULL,    0x1BULL,  0x21ULL,
    0x3ULL,        0x2BULL,       0x9ULL,   0x9ULL,   0x27ULL,   0x9ULL,   0x5ULL,
    0x3ULL,        0x21ULL,       0x1BULL,  0x9ULL,   0x1BULL,   0x27ULL,  0x3ULL,
    0x5ULL,        0x3ULL,        0x9ULL,   0x8DULL,  0x401ULL,  0x81ULL,  0x5ULL,
    0x201ULL,      0x53ULL,       0x63ULL,  0x11ULL,  0x39ULL,   0x9ULL,   0x81ULL,
    0x59ULL,       0x21ULL,       0x1BULL,  0x3ULL,   0x21ULL,   0x2DULL,  0x201ULL,
    0x1DULL,       0x4BULL,       0x9ULL,   0x47ULL,  0x201ULL,  0x81ULL,  0x95ULL,
    0x11ULL,       0x80001ULL,    0x95ULL,  0x3ULL,   0x27ULL,   0x20000001ULL,
    0x3ULL,        0x1BULL,
};

void check_degree(unsigned degree) {
  if (degree < kMinDegree || degree > kMaxDegree) {
    fail(ErrorKind::ParamDomain, "field degree " + std::to_string(degree) + " outside [1, 64]");
  }
}

// Polynomials of degree <= 64 with the leading term explicit.
__extension__ using Wide = unsigned __int128;

int wide_degree(Wide a) {
  int d = -1;
  while (a != 0) {
    a >>= 1;
    ++d;
  }
  return d;
}

Wide wide_mod(Wide a, Wide m) {
  const int dm = wide_degree(m);
  for (int da = wide_degree(a); da >= dm; da = wide_degree(a)) {
    a ^= m << (da - dm);
  }
  return a;
}

Wide wide_gcd(Wide a, Wide b) {
  while (b != 0) {
    const Wide r = wide_mod(a, b);
    a = b;
    b = r;
  }
  return a;
}

// x^(2^k) mod p, p given in reduced form.
std::uint64_t x_pow_pow2(unsigned k, const ReductionPoly& p) {
  std::uint64_t x = p.degree == 1 ? p.low : 2;  // x mod p
  for (unsigned i = 0; i < k; ++i) x = mul_raw(x, x, p);
  return x;
}

std::vector<unsigned> prime_factors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

FieldElem::FieldElem(std::uint64_t value, unsigned degree) : value_(value), degree_(degree) {
  check_degree(degree);
  if ((value & ~degree_mask(degree)) != 0) {
    fail(ErrorKind::DegreeMismatch,
         "value has bits above degree " + std::to_string(degree));
  }
}

std::uint64_t degree_mask(unsigned degree) {
  return degree >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << degree) - 1;
}

FieldElem gf_add(FieldElem a, FieldElem b) {
  if (a.degree() != b.degree()) fail(ErrorKind::DegreeMismatch, "gf_add: degree mismatch");
  return FieldElem(a.value() ^ b.value(), a.degree());
}

namespace {

// Carry-less 64x64 -> 128 product, four bits of b per step.
Wide clmul_portable(std::uint64_t a, std::uint64_t b) noexcept {
  Wide table[16];
  table[0] = 0;
  table[1] = a;
  for (unsigned i = 2; i < 16; i += 2) {
    table[i] = table[i / 2] << 1;
    table[i + 1] = table[i] ^ a;
  }
  Wide acc = 0;
  for (int shift = 60; shift >= 0; shift -= 4) {
    acc = (acc << 4) ^ table[(b >> shift) & 0xFU];
  }
  return acc;
}

#if defined(__x86_64__)
__attribute__((target("pclmul,sse4.1"))) Wide clmul_hw(std::uint64_t a, std::uint64_t b) noexcept {
  const __m128i r = _mm_clmulepi64_si128(_mm_cvtsi64_si128(static_cast<long long>(a)),
                                         _mm_cvtsi64_si128(static_cast<long long>(b)), 0);
  return (Wide{static_cast<std::uint64_t>(_mm_extract_epi64(r, 1))} << 64) |
         static_cast<std::uint64_t>(_mm_cvtsi128_si64(r));
}

const bool kHasClmul = __builtin_cpu_supports("pclmul");
#endif

inline Wide clmul(std::uint64_t a, std::uint64_t b) noexcept {
#if defined(__x86_64__)
  if (kHasClmul) return clmul_hw(a, b);
#endif
  return clmul_portable(a, b);
}

}  // namespace

std::uint64_t mul_raw(std::uint64_t a, std::uint64_t b, const ReductionPoly& p) noexcept {
  Wide v = clmul(a, b);
  // x^degree = low (mod p): fold the high part down until it vanishes. Each
  // fold lowers the top degree by degree - deg(low) >= 1.
  for (Wide hi = v >> p.degree; hi != 0; hi = v >> p.degree) {
    v = (v & degree_mask(p.degree)) ^ clmul(static_cast<std::uint64_t>(hi), p.low);
    if (const auto top = static_cast<std::uint64_t>(hi >> 64); top != 0) v ^= clmul(top, p.low) << 64;
  }
  return static_cast<std::uint64_t>(v);
}

FieldElem gf_mul(FieldElem a, FieldElem b, const ReductionPoly& p) {
  if (a.degree() != b.degree() || a.degree() != p.degree) {
    fail(ErrorKind::DegreeMismatch, "gf_mul: degree mismatch");
  }
  return FieldElem(mul_raw(a.value(), b.value(), p), p.degree);
}

FieldElem gf_pow(FieldElem a, std::uint64_t e, const ReductionPoly& p) {
  if (a.degree() != p.degree) fail(ErrorKind::DegreeMismatch, "gf_pow: degree mismatch");
  std::uint64_t result = 1 & degree_mask(p.degree);
  std::uint64_t base = a.value();
  while (e != 0) {
    if (e & 1U) result = mul_raw(result, base, p);
    base = mul_raw(base, base, p);
    e >>= 1;
  }
  return FieldElem(result, p.degree);
}

ReductionPoly irreducible_poly(unsigned degree) {
  check_degree(degree);
  return ReductionPoly{degree, kIrreducibleLow[degree - 1]};
}

bool is_irreducible(const ReductionPoly& p) {
  if (p.degree < kMinDegree || p.degree > kMaxDegree) return false;
  if ((p.low & ~degree_mask(p.degree)) != 0) return false;
  const std::uint64_t x = p.degree == 1 ? p.low : 2;
  if (x_pow_pow2(p.degree, p) != x) return false;
  const Wide full = (Wide{1} << p.degree) | p.low;
  for (unsigned q : prime_factors(p.degree)) {
    const std::uint64_t h = x_pow_pow2(p.degree / q, p) ^ x;
    if (wide_degree(wide_gcd(full, h)) != 0) return false;
  }
  return true;
}

}  // namespace etdr::gf2
