#pragma once

#include <cstdint>
#include <string>

#include "etdr/rational.hpp"

namespace etdr {

/// Protocol parameters. All key/communication accounting is derived from
/// (r, n, l, N); with N = 2n it reduces to the closed forms
///   total key  = 8(nl + 2n + 2l)
///   ET traffic = 4(nl + 2n + 2l + 1)
///   DR traffic = 2(r + 4n + 4l + 2).
struct Params {
  std::uint64_t r = 0;  // data length in bits
  Rational epsilon;     // target security level (0 when experimental)
  unsigned n = 0;       // |Omega|
  unsigned l = 0;       // hash / subkey length
  unsigned N = 0;       // number of subkeys
  bool experimental = false;

  unsigned mac_bits() const noexcept { return n + l; }
  std::uint64_t hash_vector_bits() const noexcept { return std::uint64_t{N} * l; }

  std::uint64_t per_party_et_key_bits() const noexcept { return hash_vector_bits(); }
  /// OTP for one hash vector plus four MAC keys of 2(n+l) bits.
  std::uint64_t per_party_sc_key_bits() const noexcept {
    return hash_vector_bits() + 8ULL * mac_bits();
  }
  std::uint64_t total_key_bits() const noexcept {
    return 2 * (per_party_et_key_bits() + per_party_sc_key_bits());
  }
  /// Two hash vectors, four announcement bits, four rounds budgeted at 2(n+l).
  std::uint64_t et_comm_budget_bits() const noexcept {
    return 2 * hash_vector_bits() + 4 + 8ULL * mac_bits();
  }
  /// Two claims, four announcement bits, four rounds budgeted at 2(n+l).
  std::uint64_t dr_comm_budget_bits() const noexcept { return 2 * r + 4 + 8ULL * mac_bits(); }

  friend bool operator==(const Params&, const Params&) = default;
};

/// Standard derivation: r >= 256, 0 < epsilon <= 2^-4,
/// n = ceil(3 log2(16/epsilon)), l = ceil(log2 r), N = 2n.
/// Throws Error{ParamDomain} outside the domain.
Params derive_params(std::uint64_t r, const Rational& epsilon);

/// Explicit (r, n, l, N) for experiments at scaled-down sizes; only structural
/// checks (1 <= n <= N, 1 <= l <= 64, r >= 1) apply.
Params experimental_params(std::uint64_t r, unsigned n, unsigned l, unsigned N);

/// ceil(log2 x) for x >= 1.
unsigned ceil_log2(std::uint64_t x);

/// Human-readable summary ("n=24 l=8 N=48 ...").
std::string describe(const Params& p);

}  // namespace etdr
