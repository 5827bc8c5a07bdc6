#include "etdr/session_store.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include "etdr/error.hpp"
#include "etdr/keyfile.hpp"
#include "etdr/wire.hpp"

namespace etdr {

namespace {

constexpr char kMagic[] = "ETSR";
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kAbsent = 0xFF;
constexpr std::size_t kTagBytes = 32;

std::array<std::uint8_t, kTagBytes> hmac(const StoreKey& key, std::span<const std::uint8_t> data) {
  std::array<std::uint8_t, kTagBytes> out{};
  unsigned len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), data.data(), data.size(),
           out.data(), &len) == nullptr ||
      len != kTagBytes) {
    fail(ErrorKind::KeyIo, "HMAC computation failed");
  }
  return out;
}

void field(wire::Writer& w, std::span<const std::uint8_t> bytes) {
  w.u32(static_cast<std::uint32_t>(bytes.size()));
  w.bytes(bytes);
}

template <typename Fn>
void nested_field(wire::Writer& w, Fn&& fill) {
  wire::Writer inner;
  fill(inner);
  field(w, inner.data());
}

std::span<const std::uint8_t> read_field(wire::Reader& r) { return r.bytes(r.u32()); }

void write_params(wire::Writer& w, const Params& p) {
  w.u64(p.r);
  if (p.experimental) {
    w.u64(0);
    w.u64(1);
  } else {
    w.u64(p.epsilon.get_num().get_ui());
    w.u64(p.epsilon.get_den().get_ui());
  }
  w.u32(p.n);
  w.u32(p.l);
  w.u32(p.N);
}

Params read_params(std::span<const std::uint8_t> bytes) {
  wire::Reader r(bytes, ErrorKind::KeyIo);
  const auto rbits = r.u64();
  const auto num = r.u64();
  const auto den = r.u64();
  const auto n = r.u32();
  const auto l = r.u32();
  const auto N = r.u32();
  r.expect_end("params field");
  Params p = num == 0 ? experimental_params(rbits, n, l, N) : derive_params(rbits, make_rational(num, den));
  if (p.n != n || p.l != l || p.N != N) fail(ErrorKind::KeyIo, "session params inconsistent");
  return p;
}

std::uint8_t single_byte(std::span<const std::uint8_t> f) {
  if (f.size() != 1) fail(ErrorKind::KeyIo, "session field has wrong width");
  return f[0];
}

std::uint64_t u64_field(std::span<const std::uint8_t> f) {
  if (f.size() != 8) fail(ErrorKind::KeyIo, "session field has wrong width");
  wire::Reader r(f, ErrorKind::KeyIo);
  return r.u64();
}

}  // namespace

std::vector<std::uint8_t> encode_session(const SessionRecord& record, const StoreKey& key) {
  const auto raw = record.raw();
  wire::Writer w;
  w.raw(std::string(kMagic, 4));
  w.u8(kVersion);
  field(w, raw.id.bytes);
  nested_field(w, [&](wire::Writer& f) { write_params(f, raw.params); });
  for (const auto* hv : {&raw.s_a, &raw.s_b}) {
    if (*hv) {
      field(w, (*hv)->to_bits().bytes());
    } else {
      field(w, std::span<const std::uint8_t>{});
    }
  }
  nested_field(w, [&](wire::Writer& f) { f.u8(static_cast<std::uint8_t>(raw.et_outcome)); });
  nested_field(w, [&](wire::Writer& f) {
    f.u8(raw.dr_outcome ? static_cast<std::uint8_t>(*raw.dr_outcome) : kAbsent);
  });
  nested_field(w, [&](wire::Writer& f) { f.u8(raw.aborted ? 1 : 0); });
  nested_field(w, [&](wire::Writer& f) { f.u64(raw.created_ms); });
  nested_field(w, [&](wire::Writer& f) { f.u64(raw.et_decided_ms); });
  nested_field(w, [&](wire::Writer& f) { f.u64(raw.dr_decided_ms); });
  const auto tag = hmac(key, w.data());
  w.bytes(tag);
  return w.take();
}

SessionRecord decode_session(std::span<const std::uint8_t> bytes, const StoreKey& key) {
  if (bytes.size() < kTagBytes + 5) fail(ErrorKind::KeyIo, "session record truncated");
  const auto body = bytes.first(bytes.size() - kTagBytes);
  const auto tag = hmac(key, body);
  if (CRYPTO_memcmp(tag.data(), bytes.data() + body.size(), kTagBytes) != 0) {
    fail(ErrorKind::KeyIo, "session record integrity check failed");
  }
  wire::Reader r(body, ErrorKind::KeyIo);
  const auto magic = r.bytes(4);
  if (std::string(magic.begin(), magic.end()) != std::string(kMagic, 4)) {
    fail(ErrorKind::KeyIo, "not a session record");
  }
  if (r.u8() != kVersion) fail(ErrorKind::KeyIo, "unsupported session record version");

  SessionRecord::Raw raw;
  const auto id = read_field(r);
  if (id.size() != 16) fail(ErrorKind::KeyIo, "bad session id field");
  std::copy(id.begin(), id.end(), raw.id.bytes.begin());
  raw.params = read_params(read_field(r));
  const std::uint64_t hv_bits = raw.params.hash_vector_bits();
  for (auto [slot, owner] : {std::pair{&raw.s_a, Role::Alice}, std::pair{&raw.s_b, Role::Bob}}) {
    const auto f = read_field(r);
    if (f.empty()) continue;
    if (f.size() != (hv_bits + 7) / 8) fail(ErrorKind::KeyIo, "bad hash vector field");
    const BitString bits(std::vector<std::uint8_t>(f.begin(), f.end()), hv_bits);
    *slot = HashVector::from_bits(bits, raw.params.l, raw.params.N, owner);
  }
  const auto et = single_byte(read_field(r));
  if (et > 2) fail(ErrorKind::KeyIo, "bad et_outcome");
  raw.et_outcome = static_cast<EtOutcome>(et);
  const auto dr = single_byte(read_field(r));
  if (dr != kAbsent) {
    if (dr > 3) fail(ErrorKind::KeyIo, "bad dr_outcome");
    raw.dr_outcome = static_cast<Verdict>(dr);
  }
  const auto aborted = single_byte(read_field(r));
  if (aborted > 1) fail(ErrorKind::KeyIo, "bad aborted flag");
  raw.aborted = aborted == 1;
  raw.created_ms = u64_field(read_field(r));
  raw.et_decided_ms = u64_field(read_field(r));
  raw.dr_decided_ms = u64_field(read_field(r));
  r.expect_end("session record");
  if (raw.dr_outcome && raw.et_outcome != EtOutcome::Success) {
    fail(ErrorKind::KeyIo, "session record has a verdict without a successful equality test");
  }
  return SessionRecord::from_raw(std::move(raw));
}

SessionStore::SessionStore(std::filesystem::path dir, StoreKey key)
    : dir_(std::move(dir)), key_(key) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) fail(ErrorKind::KeyIo, "cannot create session store " + dir_.string() + ": " + ec.message());
}

std::filesystem::path SessionStore::path_of(const SessionId& id) const {
  return dir_ / (id.hex() + ".session");
}

bool SessionStore::contains(const SessionId& id) const {
  std::lock_guard lock(mu_);
  return std::filesystem::exists(path_of(id));
}

void SessionStore::put(const SessionRecord& record) {
  std::lock_guard lock(mu_);
  const auto path = path_of(record.id());
  if (std::filesystem::exists(path)) {
    const SessionRecord old = decode_session(read_file(path), key_);
    if (!old.is_extended_by(record)) {
      fail(ErrorKind::ProtocolState, "session " + record.id().hex() + " is append-only");
    }
  }
  write_file_atomic(path, encode_session(record, key_));
}

SessionRecord SessionStore::get(const SessionId& id) const {
  std::lock_guard lock(mu_);
  const auto path = path_of(id);
  if (!std::filesystem::exists(path)) fail(ErrorKind::KeyIo, "unknown session " + id.hex());
  return decode_session(read_file(path), key_);
}

}  // namespace etdr
