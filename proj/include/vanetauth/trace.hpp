#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "vanetauth/aead.hpp"
#include "vanetauth/aggregate.hpp"
#include "vanetauth/signcryption.hpp"

namespace vanetauth {

enum class PseudonymKind : uint8_t { long_term = 0, short_term = 1 };

struct ValidityWindow {
    uint32_t first_epoch = 0;
    uint32_t last_epoch = 0;  // inclusive

    bool covers(uint32_t epoch) const {
        return first_epoch <= epoch && epoch <= last_epoch;
    }
    friend bool operator==(const ValidityWindow&,
                           const ValidityWindow&) = default;
};

struct PseudonymRecord {
    Bytes pseudonym;  // exactly l1 bits
    Bytes rid;        // real identity
    ValidityWindow validity;
    PseudonymKind kind = PseudonymKind::long_term;
};

struct VehicleChannelKey {
    Bytes ltp;
    Bytes k;
};

enum class TraceStrictness : uint8_t { strict, lenient };

// Reply/Update payload: the short-term credentials a vehicle installs.
struct ReplyCredential {
    Bytes stp;
    G1Element d0;
    G1Element d1;
};

struct ReplyPayload {
    std::vector<ReplyCredential> credentials;
    ValidityWindow validity;
};

// KGC-side state: master secret, tracing key, vehicle registrations and the
// audit ledger of every pseudonym ever issued. Pseudonyms are authenticated
// encryptions under the tracing key, so tracing is a single decryption with
// no database lookup. Single writer; tracing is read-only.
//
// Pseudonym layout (l1/8 bytes, l1 >= 128): encrypted body of
//   rid_index:u24 || kind:u8 || first_epoch:u8 || last_epoch:u8 || counter
// followed by an 8-byte tag. The counter is a per-KGC issue counter, so
// repeated issuance always yields distinct pseudonyms. Epochs above 255 do
// not fit this layout; widen l1 for longer-lived deployments.
class KgcState {
public:
    KgcState(SystemParams params, MasterSecret master, Bytes trace_key,
             std::shared_ptr<const AeadCipher> cipher);

    // Creates (or loads) a registration; k must match the cipher key width.
    void register_vehicle(const Bytes& rid, const Bytes& k);
    bool is_registered(const Bytes& rid) const;
    const Bytes& channel_key(const Bytes& rid) const;
    std::optional<Bytes> channel_key_for_pseudonym(const Bytes& pseudonym) const;

    PseudonymRecord issue_pseudonym(const Bytes& rid, PseudonymKind kind,
                                    ValidityWindow validity);

    // RID of an authentic pseudonym, nullopt otherwise. Strict tracing also
    // requires the validity window to cover `epoch`.
    std::optional<Bytes> trace(const Bytes& pseudonym,
                               TraceStrictness strictness,
                               uint32_t epoch = 0) const;

    const std::vector<PseudonymRecord>& issued() const { return issued_; }
    const SystemParams& params() const { return params_; }
    const MasterSecret& master() const { return master_; }
    const AeadCipher& cipher() const { return *cipher_; }

private:
    size_t body_len() const;

    SystemParams params_;
    MasterSecret master_;
    Bytes trace_key_;
    std::shared_ptr<const AeadCipher> cipher_;
    std::vector<Bytes> rids_;           // index -> rid
    std::map<Bytes, uint32_t> rid_index_;
    std::map<Bytes, Bytes> channel_keys_;
    uint64_t issue_counter_ = 0;
    std::vector<PseudonymRecord> issued_;
};

// Authenticated wrap of the Reply/Update payload under the vehicle's
// channel key. Payload wire form:
//   be32(count) || repeat(stp || d0 || d1) || first:u32 || last:u32
Bytes encode_reply_payload(const SystemParams& params, const ReplyPayload& p);
ReplyPayload decode_reply_payload(const SystemParams& params, const Bytes& in);

Bytes wrap_reply(const SystemParams& params, const AeadCipher& cipher,
                 const VehicleChannelKey& key, const ReplyPayload& payload);
std::optional<ReplyPayload> unwrap_reply(const SystemParams& params,
                                         const AeadCipher& cipher,
                                         const VehicleChannelKey& key,
                                         const Bytes& ciphertext);

// Registration bootstrap file: one `rid<TAB>hex(k)` line per vehicle.
std::string write_registration_lines(
    const std::vector<std::pair<Bytes, Bytes>>& entries);
std::vector<std::pair<Bytes, Bytes>> parse_registration_lines(
    const std::string& text);

}  // namespace vanetauth
