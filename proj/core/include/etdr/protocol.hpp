#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "etdr/hash.hpp"
#include "etdr/keys.hpp"

namespace etdr {

/// The N digests s_i = f(k_i, m) one party submits.
struct HashVector {
  Role owner = Role::Alice;
  std::vector<Digest> values;

  /// values concatenated, l bits each, index-ascending.
  BitString to_bits() const;
  static HashVector from_bits(const BitString& bits, unsigned l, unsigned N, Role owner);

  friend bool operator==(const HashVector&, const HashVector&) = default;
};

/// Hashes `m` under every subkey in one streaming pass. |m| must equal r.
HashVector compute_hash_vector(const PartyKeys& keys, const Message& m);
HashVector compute_hash_vector(std::span<const gf2::FieldElem> keys, const Message& m, Role owner);

enum class EtOutcome : std::uint8_t { Pending = 0, Success = 1, Failure = 2 };
enum class Verdict : std::uint8_t { BothCorrect = 0, ACorrect = 1, BCorrect = 2, Undecidable = 3 };

const char* to_string(EtOutcome outcome) noexcept;
const char* to_string(Verdict verdict) noexcept;

/// g^{ab} = |{ j : f(k^a_j, m^b) = s^a_j }|.
struct GCounts {
  unsigned aa = 0;
  unsigned ab = 0;
  unsigned ba = 0;
  unsigned bb = 0;
};

/// The arbitration rule on precomputed counts: equal claims win outright,
/// then the A test, then its mirror, otherwise undecidable.
Verdict arbitration_rule(unsigned N, const GCounts& g, bool claims_equal);

/// TTP state between the two phases. Fields are write-once.
class SessionRecord {
 public:
  SessionRecord() = default;
  SessionRecord(SessionId id, Params params);

  const SessionId& id() const noexcept { return id_; }
  const Params& params() const noexcept { return params_; }
  const std::optional<HashVector>& hash_vector(Role party) const;
  EtOutcome et_outcome() const noexcept { return et_outcome_; }
  const std::optional<Verdict>& dr_outcome() const noexcept { return dr_outcome_; }
  bool aborted() const noexcept { return aborted_; }
  std::uint64_t created_ms() const noexcept { return created_ms_; }
  std::uint64_t et_decided_ms() const noexcept { return et_decided_ms_; }
  std::uint64_t dr_decided_ms() const noexcept { return dr_decided_ms_; }

  void set_hash_vector(const HashVector& hv);
  void set_et_outcome(EtOutcome outcome);
  void set_dr_outcome(Verdict verdict);
  /// Freezes the session after an authentication or protocol failure.
  void abort();

  /// Restores raw fields from storage; bypasses write-once checks.
  struct Raw {
    SessionId id;
    Params params;
    std::optional<HashVector> s_a, s_b;
    EtOutcome et_outcome = EtOutcome::Pending;
    std::optional<Verdict> dr_outcome;
    bool aborted = false;
    std::uint64_t created_ms = 0, et_decided_ms = 0, dr_decided_ms = 0;
  };
  static SessionRecord from_raw(Raw raw);
  Raw raw() const;

  /// True iff `newer` only fills in fields that are unset here.
  bool is_extended_by(const SessionRecord& newer) const;

  friend bool operator==(const SessionRecord& a, const SessionRecord& b);

 private:
  SessionId id_;
  Params params_;
  std::optional<HashVector> s_a_, s_b_;
  EtOutcome et_outcome_ = EtOutcome::Pending;
  std::optional<Verdict> dr_outcome_;
  bool aborted_ = false;
  std::uint64_t created_ms_ = 0, et_decided_ms_ = 0, dr_decided_ms_ = 0;
};

/// Announces success iff s^A_j = s^B_j for every j in Omega; records both
/// vectors and the outcome.
EtOutcome et_decide(SessionRecord& session, const TtpSecret& secret, const HashVector& s_a,
                    const HashVector& s_b);

/// Counts g^{ab} from the TTP's keys and the stored vectors.
GCounts g_counts(const TtpSecret& secret, const HashVector& s_a, const HashVector& s_b,
                 const Message& m_a, const Message& m_b);

/// Dispute resolution; only after a successful equality test.
Verdict dr_arbitrate(SessionRecord& session, const TtpSecret& secret, const Message& m_a_star,
                     const Message& m_b_star);

std::uint64_t now_ms();

}  // namespace etdr
