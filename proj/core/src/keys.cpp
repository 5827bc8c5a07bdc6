#include "etdr/keys.hpp"

#include <algorithm>
#include <numeric>

#include "etdr/error.hpp"

namespace etdr {

const char* to_string(Role role) noexcept {
  switch (role) {
    case Role::Alice: return "alice";
    case Role::Bob: return "bob";
    case Role::Ttp: return "ttp";
  }
  return "?";
}

Role peer(Role party) {
  if (party == Role::Ttp) fail(ErrorKind::ProtocolState, "the TTP has no peer party");
  return party == Role::Alice ? Role::Bob : Role::Alice;
}

std::string SessionId::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(32);
  for (std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

SessionId SessionId::from_hex(const std::string& hex) {
  if (hex.size() != 32) fail(ErrorKind::KeyIo, "session id must be 32 hex digits");
  auto nibble = [](char c) -> std::uint8_t {
    if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
    if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
    if (c >= 'A' && c <= 'F') return static_cast<std::uint8_t>(c - 'A' + 10);
    fail(ErrorKind::KeyIo, "bad hex digit in session id");
  };
  SessionId id;
  for (std::size_t i = 0; i < 16; ++i) {
    id.bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  }
  return id;
}

std::uint64_t PartyKeys::et_key_bits() const {
  std::uint64_t bits = 0;
  for (const auto& k : et_keys) bits += k.degree();
  return bits;
}

std::uint64_t PartyKeys::sc_key_bits() const {
  std::uint64_t bits = otp.size();
  for (const auto& k : mac) bits += 2ULL * k.tag_bits();
  return bits;
}

const PartyKeys& TtpSecret::keys(Role party) const {
  if (party == Role::Ttp) fail(ErrorKind::ProtocolState, "no party keys for the TTP role");
  return party == Role::Alice ? alice : bob;
}

PartyKeys& TtpSecret::keys(Role party) {
  if (party == Role::Ttp) fail(ErrorKind::ProtocolState, "no party keys for the TTP role");
  return party == Role::Alice ? alice : bob;
}

bool TtpSecret::in_omega(unsigned index) const {
  return std::binary_search(omega.begin(), omega.end(), index);
}

namespace {

gf2::FieldElem random_elem(EntropySource& e, unsigned degree) {
  return gf2::FieldElem(e.bits(degree), degree);
}

void fill_sc(PartyKeys& keys, EntropySource& e) {
  const Params& p = keys.params;
  BitString pad;
  for (std::uint64_t left = p.hash_vector_bits(); left > 0;) {
    const auto take = static_cast<unsigned>(left < 64 ? left : 64);
    pad.append(e.bits(take), take);
    left -= take;
  }
  keys.otp = OtpPad(std::move(pad));
  for (auto& k : keys.mac) {
    const auto k1 = random_elem(e, p.mac_bits());
    const auto k2 = random_elem(e, p.mac_bits());
    k = MacKey(k1, k2);
  }
}

}  // namespace

KeyBundle keygen(const Params& params, EntropySource& entropy) {
  if (params.mac_bits() > gf2::kMaxDegree) {
    fail(ErrorKind::ParamDomain, "MAC tag length n+l=" + std::to_string(params.mac_bits()) +
                                     " exceeds the supported field degree 64");
  }
  if (params.n == 0 || params.n > params.N || params.l == 0 || params.l > gf2::kMaxDegree) {
    fail(ErrorKind::ParamDomain, "inconsistent parameters: " + describe(params));
  }

  KeyBundle out;
  SessionId session;
  entropy.fill(session.bytes);

  // Omega: first n positions of a partial Fisher-Yates shuffle of [N].
  std::vector<unsigned> perm(params.N);
  std::iota(perm.begin(), perm.end(), 0U);
  for (unsigned i = 0; i < params.n; ++i) {
    const auto j = i + static_cast<unsigned>(entropy.uniform(params.N - i));
    std::swap(perm[i], perm[j]);
  }
  std::vector<unsigned> omega(perm.begin(), perm.begin() + params.n);
  std::sort(omega.begin(), omega.end());

  PartyKeys& a = out.alice;
  PartyKeys& b = out.bob;
  a.role = Role::Alice;
  b.role = Role::Bob;
  a.session = b.session = session;
  a.params = b.params = params;

  a.et_keys.reserve(params.N);
  for (unsigned i = 0; i < params.N; ++i) a.et_keys.push_back(random_elem(entropy, params.l));
  b.et_keys.reserve(params.N);
  for (unsigned i = 0; i < params.N; ++i) {
    const bool shared = std::binary_search(omega.begin(), omega.end(), i);
    b.et_keys.push_back(shared ? a.et_keys[i] : random_elem(entropy, params.l));
  }

  fill_sc(a, entropy);
  fill_sc(b, entropy);

  out.ttp.session = session;
  out.ttp.params = params;
  out.ttp.omega = std::move(omega);
  out.ttp.alice = a;
  out.ttp.bob = b;
  entropy.fill(out.ttp.store_key);
  return out;
}

KeyBundle swap_roles(KeyBundle bundle) {
  std::swap(bundle.alice, bundle.bob);
  bundle.alice.role = Role::Alice;
  bundle.bob.role = Role::Bob;
  std::swap(bundle.ttp.alice, bundle.ttp.bob);
  bundle.ttp.alice.role = Role::Alice;
  bundle.ttp.bob.role = Role::Bob;
  return bundle;
}

}  // namespace etdr
