#pragma once

#include <set>
#include <span>
#include <vector>

#include "vanetauth/signcryption.hpp"

namespace vanetauth {

// Beacon-signing credential: two key points hashed from the pseudonym with a
// one-byte domain suffix (stp||0x00, stp||0x01) and their private halves.
struct ShortTermCredential {
    Bytes stp;
    G1Element p0;
    G1Element p1;
    G1Element d0;  // private
    G1Element d1;  // private
};

struct CommonString {
    Bytes cs;
    uint64_t epoch = 0;
};

struct SignedBeacon {
    Bytes message;
    Bytes stp;
    G1Element s1;
    G1Element s2;
};

struct AggregateEntry {
    Bytes message;
    Bytes stp;

    friend bool operator==(const AggregateEntry&,
                           const AggregateEntry&) = default;
};

struct AggregateSignature {
    std::vector<AggregateEntry> entries;  // input order preserved
    G1Element s1;
    G1Element s2;
};

// Signer-side record of spent (pseudonym, common string) pairs; a common
// string anchors at most one signature per pseudonym. Single writer.
class CsUsageLedger {
public:
    // false if the pair was already spent
    bool try_mark(const Bytes& stp, const Bytes& cs);
    bool seen(const Bytes& stp, const Bytes& cs) const;
    size_t size() const { return used_.size(); }

private:
    static Bytes key(const Bytes& stp, const Bytes& cs);
    std::set<Bytes> used_;
};

ShortTermCredential extract_short_term_key(const SystemParams& params,
                                           const MasterSecret& master,
                                           const Bytes& stp);

// Challenge scalar c = H3 over length-framed (message, stp, cs).
Scalar beacon_challenge(const SystemParams& params, const Bytes& message,
                        const Bytes& stp, const Bytes& cs);

// When `ledger` is given, signing marks (stp, cs) and throws ProtocolError
// on reuse.
SignedBeacon sign_beacon(const SystemParams& params,
                         const ShortTermCredential& cred, const Bytes& message,
                         const CommonString& cs, Rng& rng,
                         CsUsageLedger* ledger = nullptr);

bool verify_single(const SystemParams& params, const SignedBeacon& beacon,
                   const CommonString& cs);

AggregateSignature aggregate(const SystemParams& params,
                             std::span<const SignedBeacon> beacons);

AggregateSignature re_aggregate(const SystemParams& params,
                                std::span<const AggregateSignature> aggs);

bool verify_aggregate(const SystemParams& params, const AggregateSignature& agg,
                      const CommonString& cs);

// Wire formats, all lengths fixed-width big-endian:
//   beacon:    be32(len m) || m || stp || S1 || S2
//   aggregate: be32(count) || repeat(be32(len m) || m || stp) || S1 || S2
Bytes encode_beacon(const SystemParams& params, const SignedBeacon& b);
SignedBeacon decode_beacon(const SystemParams& params, const Bytes& wire);
Bytes encode_aggregate(const SystemParams& params, const AggregateSignature& a);
AggregateSignature decode_aggregate(const SystemParams& params,
                                    const Bytes& wire);

}  // namespace vanetauth
