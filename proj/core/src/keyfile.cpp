#include "etdr/keyfile.hpp"

#include <fstream>
#include <sstream>

#include "etdr/error.hpp"
#include "etdr/wire.hpp"

namespace etdr {

namespace {

constexpr char kMagic[] = "ETDR";

std::uint64_t to_u64(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 64) {
    fail(ErrorKind::KeyIo, "epsilon numerator/denominator does not fit in 64 bits");
  }
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
  return out;
}

void write_header(wire::Writer& w, Role role, const SessionId& session, const Params& p) {
  w.raw(std::string(kMagic, 4));
  w.u8(kKeyFileVersion);
  w.u8(static_cast<std::uint8_t>(role));
  w.bytes(session.bytes);
  w.u64(p.r);
  if (p.experimental) {
    w.u64(0);
    w.u64(1);
  } else {
    w.u64(to_u64(p.epsilon.get_num()));
    w.u64(to_u64(p.epsilon.get_den()));
  }
  w.u32(p.n);
  w.u32(p.l);
  w.u32(p.N);
}

struct Header {
  Role role;
  SessionId session;
  Params params;
};

Header read_header(wire::Reader& r) {
  const auto magic = r.bytes(4);
  if (std::string(magic.begin(), magic.end()) != std::string(kMagic, 4)) {
    fail(ErrorKind::KeyIo, "not an ETDR key file");
  }
  if (const auto v = r.u8(); v != kKeyFileVersion) {
    fail(ErrorKind::KeyIo, "unsupported key file version " + std::to_string(v));
  }
  Header h;
  const auto role = r.u8();
  if (role > 2) fail(ErrorKind::KeyIo, "bad role byte");
  h.role = static_cast<Role>(role);
  const auto id = r.bytes(16);
  std::copy(id.begin(), id.end(), h.session.bytes.begin());
  const std::uint64_t rbits = r.u64();
  const std::uint64_t num = r.u64();
  const std::uint64_t den = r.u64();
  const std::uint32_t n = r.u32();
  const std::uint32_t l = r.u32();
  const std::uint32_t N = r.u32();
  try {
    if (num == 0) {
      h.params = experimental_params(rbits, n, l, N);
    } else {
      h.params = derive_params(rbits, make_rational(num, den));
      if (h.params.n != n || h.params.l != l || h.params.N != N) {
        fail(ErrorKind::KeyIo, "stored n/l/N disagree with (r, epsilon)");
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::KeyIo) throw;
    fail(ErrorKind::KeyIo, std::string("invalid parameter block: ") + e.what());
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::KeyIo, std::string("invalid parameter block: ") + e.what());
  }
  if (h.params.mac_bits() > gf2::kMaxDegree) fail(ErrorKind::KeyIo, "n+l exceeds 64");
  return h;
}

std::uint64_t key_block_bits(const Params& p) {
  return p.per_party_et_key_bits() + p.per_party_sc_key_bits();
}

void write_key_block(wire::Writer& w, const PartyKeys& k) {
  BitString bits;
  for (const auto& e : k.et_keys) bits.append(e.value(), e.degree());
  bits.append(k.otp.bits());
  for (const auto& m : k.mac) {
    bits.append(m.k1().value(), m.tag_bits());
    bits.append(m.k2().value(), m.tag_bits());
  }
  w.bytes(bits.bytes());
}

PartyKeys read_key_block(wire::Reader& r, Role role, const SessionId& session, const Params& p) {
  const std::uint64_t nbits = key_block_bits(p);
  const auto raw = r.bytes((nbits + 7) / 8);
  const BitString bits(std::vector<std::uint8_t>(raw.begin(), raw.end()), nbits);
  if (nbits % 8 != 0 && (raw.back() & (0xFFU >> (nbits % 8))) != 0) {
    fail(ErrorKind::KeyIo, "nonzero padding in key block");
  }
  PartyKeys k;
  k.role = role;
  k.session = session;
  k.params = p;
  std::uint64_t off = 0;
  for (unsigned i = 0; i < p.N; ++i, off += p.l) k.et_keys.emplace_back(bits.read(off, p.l), p.l);
  k.otp = OtpPad(bits.slice(off, p.hash_vector_bits()));
  off += p.hash_vector_bits();
  const unsigned d = p.mac_bits();
  for (auto& m : k.mac) {
    const gf2::FieldElem k1(bits.read(off, d), d);
    const gf2::FieldElem k2(bits.read(off + d, d), d);
    m = MacKey(k1, k2);
    off += 2ULL * d;
  }
  return k;
}

}  // namespace

std::vector<std::uint8_t> encode_party_keys(const PartyKeys& keys) {
  if (keys.role == Role::Ttp) fail(ErrorKind::KeyIo, "party key file cannot carry the TTP role");
  wire::Writer w;
  write_header(w, keys.role, keys.session, keys.params);
  write_key_block(w, keys);
  return w.take();
}

PartyKeys decode_party_keys(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes, ErrorKind::KeyIo);
  const Header h = read_header(r);
  if (h.role == Role::Ttp) fail(ErrorKind::KeyIo, "expected a party key file, found a TTP file");
  PartyKeys k = read_key_block(r, h.role, h.session, h.params);
  r.expect_end("party key file");
  return k;
}

std::vector<std::uint8_t> encode_ttp_secret(const TtpSecret& secret) {
  wire::Writer w;
  write_header(w, Role::Ttp, secret.session, secret.params);
  for (unsigned j : secret.omega) w.u32(j);
  write_key_block(w, secret.alice);
  write_key_block(w, secret.bob);
  w.bytes(secret.store_key);
  return w.take();
}

TtpSecret decode_ttp_secret(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes, ErrorKind::KeyIo);
  const Header h = read_header(r);
  if (h.role != Role::Ttp) fail(ErrorKind::KeyIo, "expected a TTP secret file");
  TtpSecret s;
  s.session = h.session;
  s.params = h.params;
  for (unsigned i = 0; i < h.params.n; ++i) {
    const std::uint32_t j = r.u32();
    if (j >= h.params.N || (!s.omega.empty() && j <= s.omega.back())) {
      fail(ErrorKind::KeyIo, "omega indices must be sorted, distinct and < N");
    }
    s.omega.push_back(j);
  }
  s.alice = read_key_block(r, Role::Alice, h.session, h.params);
  s.bob = read_key_block(r, Role::Bob, h.session, h.params);
  const auto key = r.bytes(s.store_key.size());
  std::copy(key.begin(), key.end(), s.store_key.begin());
  r.expect_end("TTP secret file");
  for (unsigned j : s.omega) {
    if (!(s.alice.et_keys[j] == s.bob.et_keys[j])) {
      fail(ErrorKind::KeyIo, "TTP secret inconsistent: subkeys differ on omega");
    }
  }
  return s;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::KeyIo, "cannot open " + path.string());
  std::vector<std::uint8_t> out((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) fail(ErrorKind::KeyIo, "read error on " + path.string());
  return out;
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::KeyIo, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::KeyIo, "write error on " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::KeyIo, "cannot rename into " + path.string() + ": " + ec.message());
}

void write_party_keys(const std::filesystem::path& path, const PartyKeys& keys) {
  write_file_atomic(path, encode_party_keys(keys));
}

PartyKeys read_party_keys(const std::filesystem::path& path) {
  return decode_party_keys(read_file(path));
}

void write_ttp_secret(const std::filesystem::path& path, const TtpSecret& secret) {
  write_file_atomic(path, encode_ttp_secret(secret));
}

TtpSecret read_ttp_secret(const std::filesystem::path& path) {
  return decode_ttp_secret(read_file(path));
}

KeyLedger KeyLedger::capture(const PartyKeys& keys) {
  KeyLedger l;
  l.otp_consumed = keys.otp.consumed();
  for (std::size_t i = 0; i < kMacSlots; ++i) l.mac_consumed[i] = keys.mac[i].consumed();
  return l;
}

void KeyLedger::apply(PartyKeys& keys) const {
  keys.otp.advance_to(std::max(otp_consumed, keys.otp.consumed()));
  for (std::size_t i = 0; i < kMacSlots; ++i) {
    if (mac_consumed[i]) keys.mac[i].mark_consumed();
  }
}

std::filesystem::path ledger_path(const std::filesystem::path& key_file) {
  auto p = key_file;
  p += ".used";
  return p;
}

KeyLedger read_ledger(const std::filesystem::path& key_file) {
  KeyLedger l;
  const auto path = ledger_path(key_file);
  if (!std::filesystem::exists(path)) return l;
  std::ifstream in(path);
  std::string tag, mac;
  if (!(in >> tag >> l.otp_consumed >> mac) || tag != "otp" || mac.size() != kMacSlots) {
    fail(ErrorKind::KeyIo, "corrupted key ledger " + path.string());
  }
  for (std::size_t i = 0; i < kMacSlots; ++i) {
    if (mac[i] != '0' && mac[i] != '1') fail(ErrorKind::KeyIo, "corrupted key ledger " + path.string());
    l.mac_consumed[i] = mac[i] == '1';
  }
  return l;
}

void write_ledger(const std::filesystem::path& key_file, const KeyLedger& ledger) {
  std::ostringstream os;
  os << "otp " << ledger.otp_consumed << ' ';
  for (bool b : ledger.mac_consumed) os << (b ? '1' : '0');
  os << '\n';
  const std::string s = os.str();
  write_file_atomic(ledger_path(key_file),
                    std::span(reinterpret_cast<const std::uint8_t*>(s.data()), s.size()));
}

}  // namespace etdr
