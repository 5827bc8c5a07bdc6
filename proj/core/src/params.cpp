#include "etdr/params.hpp"

#include <sstream>

#include "etdr/error.hpp"

namespace etdr {

unsigned ceil_log2(std::uint64_t x) {
  if (x == 0) fail(ErrorKind::ParamDomain, "ceil_log2 of 0");
  unsigned l = 0;
  while (l < 64 && (std::uint64_t{1} << l) < x) ++l;
  return l;
}

namespace {

// Smallest n with 2^n >= (16/eps)^3, i.e. n = ceil(3 log2(16/eps)).
unsigned omega_size(const Rational& eps) {
  const BigInt a = eps.get_num();
  const BigInt b = eps.get_den();
  const BigInt lhs = BigInt(4096) * b * b * b;
  const BigInt a3 = a * a * a;
  unsigned n = 0;
  BigInt scaled = a3;  // 2^n * a^3
  while (scaled < lhs) {
    scaled *= 2;
    ++n;
  }
  return n;
}

}  // namespace

Params derive_params(std::uint64_t r, const Rational& epsilon) {
  if (r < 256) {
    fail(ErrorKind::ParamDomain, "data length r=" + std::to_string(r) + " below 256 bits");
  }
  if (epsilon <= 0 || epsilon > Rational(1, 16)) {
    fail(ErrorKind::ParamDomain, "epsilon=" + to_string(epsilon) + " outside (0, 2^-4]");
  }
  Params p;
  p.r = r;
  p.epsilon = epsilon;
  p.n = omega_size(epsilon);
  p.l = ceil_log2(r);
  p.N = 2 * p.n;
  return p;
}

Params experimental_params(std::uint64_t r, unsigned n, unsigned l, unsigned N) {
  if (r == 0) fail(ErrorKind::ParamDomain, "r must be >= 1");
  if (n == 0 || n > N) fail(ErrorKind::ParamDomain, "need 1 <= n <= N");
  if (l == 0 || l > 64) fail(ErrorKind::ParamDomain, "need 1 <= l <= 64");
  Params p;
  p.r = r;
  p.epsilon = 0;
  p.n = n;
  p.l = l;
  p.N = N;
  p.experimental = true;
  return p;
}

std::string describe(const Params& p) {
  std::ostringstream os;
  os << "r=" << p.r << " n=" << p.n << " l=" << p.l << " N=" << p.N;
  if (!p.experimental) os << " epsilon=" << to_string(p.epsilon);
  os << " total_key_bits=" << p.total_key_bits() << " et_comm_budget_bits=" << p.et_comm_budget_bits()
     << " dr_comm_budget_bits=" << p.dr_comm_budget_bits();
  return os.str();
}

}  // namespace etdr
