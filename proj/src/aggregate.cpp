#include "vanetauth/aggregate.hpp"

#include "vanetauth/errors.hpp"

namespace vanetauth {

Bytes CsUsageLedger::key(const Bytes& stp, const Bytes& cs) {
    Bytes k;
    append_be32(k, static_cast<uint32_t>(stp.size()));
    append(k, stp);
    append(k, cs);
    return k;
}

bool CsUsageLedger::try_mark(const Bytes& stp, const Bytes& cs) {
    return used_.insert(key(stp, cs)).second;
}

bool CsUsageLedger::seen(const Bytes& stp, const Bytes& cs) const {
    return used_.count(key(stp, cs)) != 0;
}

static Bytes key_point_label(const Bytes& stp, uint8_t j) {
    Bytes label = stp;
    label.push_back(j);
    return label;
}

ShortTermCredential extract_short_term_key(const SystemParams& params,
                                           const MasterSecret& master,
                                           const Bytes& stp) {
    if (stp.size() != params.pseudonym_len())
        throw InvalidArgumentError("short-term pseudonym has wrong length");
    const BilinearSuite& suite = params.suite;
    ShortTermCredential cred;
    cred.stp = stp;
    cred.p0 = suite.hash_to_g1(key_point_label(stp, 0));
    cred.p1 = suite.hash_to_g1(key_point_label(stp, 1));
    cred.d0 = suite.g1_mul(master.s, cred.p0);
    cred.d1 = suite.g1_mul(master.s, cred.p1);
    return cred;
}

Scalar beacon_challenge(const SystemParams& params, const Bytes& message,
                        const Bytes& stp, const Bytes& cs) {
    Bytes in;
    append_be32(in, static_cast<uint32_t>(message.size()));
    append(in, message);
    append_be32(in, static_cast<uint32_t>(stp.size()));
    append(in, stp);
    append(in, cs);
    return params.suite.hash_to_scalar(in);
}

SignedBeacon sign_beacon(const SystemParams& params,
                         const ShortTermCredential& cred, const Bytes& message,
                         const CommonString& cs, Rng& rng,
                         CsUsageLedger* ledger) {
    if (ledger && !ledger->try_mark(cred.stp, cs.cs))
        throw ProtocolError("common string already spent by this pseudonym");
    const BilinearSuite& suite = params.suite;

    Scalar r = suite.random_nonzero_scalar(rng);
    Scalar c = beacon_challenge(params, message, cred.stp, cs.cs);
    G1Element cs_point = suite.psi(suite.hash_to_g2(cs.cs));

    SignedBeacon b;
    b.message = message;
    b.stp = cred.stp;
    b.s2 = suite.g1_mul(r, suite.p1());
    b.s1 = suite.g1_add(suite.g1_mul(r, cs_point),
                        suite.g1_add(cred.d0, suite.g1_mul(c, cred.d1)));
    return b;
}

bool verify_single(const SystemParams& params, const SignedBeacon& beacon,
                   const CommonString& cs) {
    AggregateSignature as_agg;
    as_agg.entries.push_back({beacon.message, beacon.stp});
    as_agg.s1 = beacon.s1;
    as_agg.s2 = beacon.s2;
    return verify_aggregate(params, as_agg, cs);
}

AggregateSignature aggregate(const SystemParams& params,
                             std::span<const SignedBeacon> beacons) {
    if (beacons.empty())
        throw InvalidArgumentError("cannot aggregate an empty beacon list");
    const BilinearSuite& suite = params.suite;
    AggregateSignature agg;
    agg.s1 = suite.g1_identity();
    agg.s2 = suite.g1_identity();
    agg.entries.reserve(beacons.size());
    for (const SignedBeacon& b : beacons) {
        agg.entries.push_back({b.message, b.stp});
        agg.s1 = suite.g1_add(agg.s1, b.s1);
        agg.s2 = suite.g1_add(agg.s2, b.s2);
    }
    return agg;
}

AggregateSignature re_aggregate(const SystemParams& params,
                                std::span<const AggregateSignature> aggs) {
    if (aggs.empty())
        throw InvalidArgumentError("cannot re-aggregate an empty list");
    const BilinearSuite& suite = params.suite;
    AggregateSignature out;
    out.s1 = suite.g1_identity();
    out.s2 = suite.g1_identity();
    for (const AggregateSignature& a : aggs) {
        out.entries.insert(out.entries.end(), a.entries.begin(),
                           a.entries.end());
        out.s1 = suite.g1_add(out.s1, a.s1);
        out.s2 = suite.g1_add(out.s2, a.s2);
    }
    return out;
}

bool verify_aggregate(const SystemParams& params, const AggregateSignature& agg,
                      const CommonString& cs) {
    if (agg.entries.empty()) return false;
    const BilinearSuite& suite = params.suite;

    G2Element cs_hat = suite.hash_to_g2(cs.cs);
    G1Element point_sum = suite.g1_identity();
    for (const AggregateEntry& e : agg.entries) {
        G1Element p0 = suite.hash_to_g1(key_point_label(e.stp, 0));
        G1Element p1 = suite.hash_to_g1(key_point_label(e.stp, 1));
        Scalar c = beacon_challenge(params, e.message, e.stp, cs.cs);
        point_sum =
            suite.g1_add(point_sum, suite.g1_add(p0, suite.g1_mul(c, p1)));
    }
    GtElement lhs = suite.pair(agg.s1, suite.p2());
    GtElement rhs = suite.gt_mul(suite.pair(agg.s2, cs_hat),
                                 suite.pair(point_sum, params.u2));
    return lhs == rhs;
}

Bytes encode_beacon(const SystemParams& params, const SignedBeacon& b) {
    if (b.stp.size() != params.pseudonym_len())
        throw InvalidArgumentError("beacon pseudonym has wrong length");
    Bytes out;
    append_be32(out, static_cast<uint32_t>(b.message.size()));
    append(out, b.message);
    append(out, b.stp);
    append(out, params.suite.serialize(b.s1));
    append(out, params.suite.serialize(b.s2));
    return out;
}

SignedBeacon decode_beacon(const SystemParams& params, const Bytes& wire) {
    size_t off = 0;
    SignedBeacon b;
    uint32_t m_len = read_be32(wire, off);
    b.message = read_exact(wire, off, m_len);
    b.stp = read_exact(wire, off, params.pseudonym_len());
    size_t point_len = params.suite.descriptor().g1_len;
    b.s1 = params.suite.deserialize_g1(read_exact(wire, off, point_len));
    b.s2 = params.suite.deserialize_g1(read_exact(wire, off, point_len));
    if (off != wire.size()) throw DeserializeError("trailing beacon bytes");
    return b;
}

Bytes encode_aggregate(const SystemParams& params,
                       const AggregateSignature& a) {
    Bytes out;
    append_be32(out, static_cast<uint32_t>(a.entries.size()));
    for (const AggregateEntry& e : a.entries) {
        if (e.stp.size() != params.pseudonym_len())
            throw InvalidArgumentError("aggregate pseudonym has wrong length");
        append_be32(out, static_cast<uint32_t>(e.message.size()));
        append(out, e.message);
        append(out, e.stp);
    }
    append(out, params.suite.serialize(a.s1));
    append(out, params.suite.serialize(a.s2));
    return out;
}

AggregateSignature decode_aggregate(const SystemParams& params,
                                    const Bytes& wire) {
    size_t off = 0;
    AggregateSignature a;
    uint32_t count = read_be32(wire, off);
    if (count == 0) throw DeserializeError("aggregate with no entries");
    for (uint32_t i = 0; i < count; ++i) {
        AggregateEntry e;
        uint32_t m_len = read_be32(wire, off);
        e.message = read_exact(wire, off, m_len);
        e.stp = read_exact(wire, off, params.pseudonym_len());
        a.entries.push_back(std::move(e));
    }
    size_t point_len = params.suite.descriptor().g1_len;
    a.s1 = params.suite.deserialize_g1(read_exact(wire, off, point_len));
    a.s2 = params.suite.deserialize_g1(read_exact(wire, off, point_len));
    if (off != wire.size()) throw DeserializeError("trailing aggregate bytes");
    return a;
}

}  // namespace vanetauth
