#include <gtest/gtest.h>

#include <algorithm>

#include "test_util.hpp"
#include "vanetauth/aggregate.hpp"
#include "vanetauth/errors.hpp"
#include "vanetauth/oracle_table.hpp"

using namespace vanetauth;
using testutil::residue;

namespace {

Rng rng_with_first_nonzero(const BilinearSuite& suite, uint64_t target) {
    for (uint64_t seed = 0; seed < 2000000; ++seed) {
        Rng probe(seed);
        if (suite.scalar_to_u64(suite.random_nonzero_scalar(probe)) == target)
            return Rng(seed);
    }
    throw std::runtime_error("no seed found for fixture scalar");
}

Bytes challenge_key(const Bytes& message, const Bytes& stp, const Bytes& cs) {
    Bytes in;
    append_be32(in, static_cast<uint32_t>(message.size()));
    append(in, message);
    append_be32(in, static_cast<uint32_t>(stp.size()));
    append(in, stp);
    append(in, cs);
    return in;
}

struct Ag1Fixture {
    SystemParams params;
    MasterSecret master;
    std::shared_ptr<OracleTable> table;
    CommonString cs;
    Bytes stp_a, stp_b;
    Bytes msg_a, msg_b;
    nlohmann::json j;
};

Ag1Fixture make_ag1() {
    auto j = testutil::load_vectors()["ag1"];
    BilinearSuite base = BilinearSuite::make_toy();
    Rng setup_rng = rng_with_first_nonzero(base, j["s"].get<uint64_t>());
    auto [params, master] = setup(SetupOptions{}, setup_rng);
    auto table = OracleTable::create(params.suite, OracleFallback::digest, 0,
                                     params.l2_bits);
    SystemParams hooked = params.with_oracle(table);
    const BilinearSuite& suite = hooked.suite;

    Ag1Fixture fx{hooked, master, table,
                  CommonString{to_bytes("AG-1-common-string"), 0},
                  testutil::padded("stp-A"), testutil::padded("stp-B"),
                  to_bytes("beacon A"), to_bytes("beacon B"), j};

    auto program_point = [&](const Bytes& stp, uint8_t idx, uint64_t value) {
        Bytes label = stp;
        label.push_back(idx);
        table->program(OracleId::h1, label,
                       suite.serialize(suite.g1_mul(
                           suite.scalar_from_u64(value), suite.p1())));
    };
    program_point(fx.stp_a, 0, j["signer_a"]["p0"].get<uint64_t>());
    program_point(fx.stp_a, 1, j["signer_a"]["p1"].get<uint64_t>());
    program_point(fx.stp_b, 0, j["signer_b"]["p0"].get<uint64_t>());
    program_point(fx.stp_b, 1, j["signer_b"]["p1"].get<uint64_t>());
    table->program(OracleId::h2, fx.cs.cs,
                   suite.serialize(suite.g2_mul(
                       suite.scalar_from_u64(j["cs_hat"].get<uint64_t>()),
                       suite.p2())));
    table->program(OracleId::h3, challenge_key(fx.msg_a, fx.stp_a, fx.cs.cs),
                   suite.serialize(suite.scalar_from_u64(
                       j["signer_a"]["c"].get<uint64_t>())));
    table->program(OracleId::h3, challenge_key(fx.msg_b, fx.stp_b, fx.cs.cs),
                   suite.serialize(suite.scalar_from_u64(
                       j["signer_b"]["c"].get<uint64_t>())));
    return fx;
}

TEST(ShortTermKeys, Ag1FrozenValuesAndInvariants) {
    auto fx = make_ag1();
    const auto& suite = fx.params.suite;
    auto a = extract_short_term_key(fx.params, fx.master, fx.stp_a);
    EXPECT_EQ(residue(suite, a.d0), fx.j["signer_a"]["d0"].get<uint64_t>());
    EXPECT_EQ(residue(suite, a.d1), fx.j["signer_a"]["d1"].get<uint64_t>());
    auto b = extract_short_term_key(fx.params, fx.master, fx.stp_b);
    EXPECT_EQ(residue(suite, b.d0), fx.j["signer_b"]["d0"].get<uint64_t>());
    EXPECT_EQ(residue(suite, b.d1), fx.j["signer_b"]["d1"].get<uint64_t>());

    EXPECT_EQ(suite.pair(a.d0, suite.p2()), suite.pair(a.p0, fx.params.u2));
    EXPECT_EQ(suite.pair(a.d1, suite.p2()), suite.pair(a.p1, fx.params.u2));
}

TEST(ShortTermKeys, DeterministicAndPairingBoundForRandomPseudonyms) {
    Rng rng(50);
    auto [params, master] = setup(SetupOptions{}, rng);
    const auto& suite = params.suite;
    for (int i = 0; i < 100; ++i) {
        Bytes stp = random_bytes(rng, 16);
        auto c1 = extract_short_term_key(params, master, stp);
        auto c2 = extract_short_term_key(params, master, stp);
        ASSERT_EQ(c1.d0, c2.d0);
        ASSERT_EQ(suite.pair(c1.d0, suite.p2()),
                  suite.pair(c1.p0, params.u2));
        ASSERT_EQ(suite.pair(c1.d1, suite.p2()),
                  suite.pair(c1.p1, params.u2));
    }
    EXPECT_THROW(extract_short_term_key(params, master, to_bytes("x")),
                 InvalidArgumentError);
}

TEST(SignBeacon, Ag1VectorBitExact) {
    auto fx = make_ag1();
    const auto& suite = fx.params.suite;
    auto cred_a = extract_short_term_key(fx.params, fx.master, fx.stp_a);
    Rng ra = rng_with_first_nonzero(suite, fx.j["signer_a"]["r"].get<uint64_t>());
    auto beacon_a = sign_beacon(fx.params, cred_a, fx.msg_a, fx.cs, ra);
    EXPECT_EQ(residue(suite, beacon_a.s2),
              fx.j["signer_a"]["s2"].get<uint64_t>());
    EXPECT_EQ(residue(suite, beacon_a.s1),
              fx.j["signer_a"]["s1"].get<uint64_t>());
    EXPECT_TRUE(verify_single(fx.params, beacon_a, fx.cs));

    auto cred_b = extract_short_term_key(fx.params, fx.master, fx.stp_b);
    Rng rb = rng_with_first_nonzero(suite, fx.j["signer_b"]["r"].get<uint64_t>());
    auto beacon_b = sign_beacon(fx.params, cred_b, fx.msg_b, fx.cs, rb);
    EXPECT_EQ(residue(suite, beacon_b.s2),
              fx.j["signer_b"]["s2"].get<uint64_t>());
    EXPECT_EQ(residue(suite, beacon_b.s1),
              fx.j["signer_b"]["s1"].get<uint64_t>());

    auto agg = aggregate(fx.params, std::vector<SignedBeacon>{beacon_a,
                                                              beacon_b});
    EXPECT_EQ(residue(suite, agg.s1),
              fx.j["aggregate"]["s1"].get<uint64_t>());
    EXPECT_EQ(residue(suite, agg.s2),
              fx.j["aggregate"]["s2"].get<uint64_t>());
    EXPECT_TRUE(verify_aggregate(fx.params, agg, fx.cs));

    // verification equation sides against the frozen values
    G1Element point_sum = suite.g1_identity();
    for (auto& [stp, c_key] :
         {std::pair{fx.stp_a, fx.j["signer_a"]["c"].get<uint64_t>()},
          std::pair{fx.stp_b, fx.j["signer_b"]["c"].get<uint64_t>()}}) {
        Bytes l0 = stp;
        l0.push_back(0);
        Bytes l1 = stp;
        l1.push_back(1);
        point_sum = suite.g1_add(
            point_sum,
            suite.g1_add(suite.hash_to_g1(l0),
                         suite.g1_mul(suite.scalar_from_u64(c_key),
                                      suite.hash_to_g1(l1))));
    }
    auto lhs = suite.pair(agg.s1, suite.p2());
    auto rhs = suite.gt_mul(
        suite.pair(agg.s2, suite.hash_to_g2(fx.cs.cs)),
        suite.pair(point_sum, fx.params.u2));
    EXPECT_EQ(residue(suite, lhs), fx.j["aggregate"]["verify_lhs"].get<uint64_t>());
    EXPECT_EQ(residue(suite, rhs), fx.j["aggregate"]["verify_rhs"].get<uint64_t>());
}

TEST(SignBeacon, RandomizedSignaturesDiffer) {
    Rng rng(60);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto cred = extract_short_term_key(params, master, testutil::padded("s"));
    CommonString cs{to_bytes("cs-random"), 1};
    auto b1 = sign_beacon(params, cred, to_bytes("m"), cs, rng);
    auto b2 = sign_beacon(params, cred, to_bytes("m"), cs, rng);
    EXPECT_NE(b1.s2, b2.s2);
}

TEST(SignBeacon, CommonStringReuseEnforcedByLedger) {
    Rng rng(61);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto cred = extract_short_term_key(params, master, testutil::padded("l"));
    CommonString cs{to_bytes("cs-ledger"), 1};
    CsUsageLedger ledger;
    sign_beacon(params, cred, to_bytes("first"), cs, rng, &ledger);
    EXPECT_THROW(sign_beacon(params, cred, to_bytes("second"), cs, rng,
                             &ledger),
                 ProtocolError);
    // another pseudonym may still use the same common string
    auto other = extract_short_term_key(params, master, testutil::padded("m"));
    EXPECT_NO_THROW(sign_beacon(params, other, to_bytes("third"), cs, rng,
                                &ledger));
}

TEST(VerifySingle, RejectsPerturbationsAndForeignCs) {
    Rng rng(62);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto cred = extract_short_term_key(params, master, testutil::padded("v"));
    CommonString cs{to_bytes("cs-a"), 1};
    auto beacon = sign_beacon(params, cred, to_bytes("payload"), cs, rng);
    ASSERT_TRUE(verify_single(params, beacon, cs));

    SignedBeacon bumped = beacon;
    bumped.s2 = params.suite.g1_add(beacon.s2, params.suite.p1());
    EXPECT_FALSE(verify_single(params, bumped, cs));
    EXPECT_FALSE(verify_single(params, beacon,
                               CommonString{to_bytes("cs-b"), 2}));
}

TEST(Aggregate, SingleBeaconIdentityAndOrderIndependence) {
    Rng rng(63);
    auto [params, master] = setup(SetupOptions{}, rng);
    CommonString cs{to_bytes("cs-agg"), 1};
    std::vector<SignedBeacon> beacons;
    for (int i = 0; i < 5; ++i) {
        auto cred = extract_short_term_key(
            params, master, testutil::padded("agg" + std::to_string(i)));
        beacons.push_back(
            sign_beacon(params, cred, random_bytes(rng, 10), cs, rng));
    }
    auto single = aggregate(params, std::span(beacons.data(), 1));
    EXPECT_EQ(single.s1, beacons[0].s1);
    EXPECT_EQ(single.s2, beacons[0].s2);

    auto forward = aggregate(params, beacons);
    auto reversed_input = beacons;
    std::reverse(reversed_input.begin(), reversed_input.end());
    auto backward = aggregate(params, reversed_input);
    EXPECT_EQ(forward.s1, backward.s1);
    EXPECT_EQ(forward.s2, backward.s2);

    EXPECT_THROW(aggregate(params, std::span<const SignedBeacon>{}),
                 InvalidArgumentError);
}

TEST(Aggregate, CompletenessAcrossSizes) {
    Rng rng(64);
    auto [params, master] = setup(SetupOptions{}, rng);
    for (int trial = 0; trial < 40; ++trial) {
        CommonString cs{random_bytes(rng, 12),
                        static_cast<uint64_t>(trial)};
        size_t n = 1 + uniform_below(rng, 50);
        std::vector<SignedBeacon> beacons;
        for (size_t i = 0; i < n; ++i) {
            auto cred =
                extract_short_term_key(params, master, random_bytes(rng, 16));
            beacons.push_back(
                sign_beacon(params, cred, random_bytes(rng, 8), cs, rng));
        }
        ASSERT_TRUE(verify_aggregate(params, aggregate(params, beacons), cs));
    }
}

TEST(Aggregate, EquivalenceWithPerBeaconVerification) {
    Rng rng(65);
    auto [params, master] = setup(SetupOptions{}, rng);
    CommonString cs{to_bytes("cs-equiv"), 1};
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<SignedBeacon> beacons;
        for (size_t i = 0; i < 4; ++i) {
            auto cred =
                extract_short_term_key(params, master, random_bytes(rng, 16));
            beacons.push_back(
                sign_beacon(params, cred, random_bytes(rng, 8), cs, rng));
        }
        bool tampered = trial % 2 == 1;
        if (tampered) {
            size_t victim = uniform_below(rng, beacons.size());
            beacons[victim].s1 =
                params.suite.g1_add(beacons[victim].s1, params.suite.p1());
        }
        bool all_single = true;
        for (const auto& b : beacons)
            all_single = all_single && verify_single(params, b, cs);
        bool agg_ok = verify_aggregate(params, aggregate(params, beacons), cs);
        ASSERT_EQ(all_single, agg_ok);
        ASSERT_EQ(agg_ok, !tampered);
    }
}

TEST(Aggregate, DroppedEntryBreaksVerification) {
    Rng rng(66);
    auto [params, master] = setup(SetupOptions{}, rng);
    CommonString cs{to_bytes("cs-drop"), 1};
    std::vector<SignedBeacon> beacons;
    for (int i = 0; i < 3; ++i) {
        auto cred = extract_short_term_key(params, master,
                                           random_bytes(rng, 16));
        beacons.push_back(
            sign_beacon(params, cred, random_bytes(rng, 8), cs, rng));
    }
    auto agg = aggregate(params, beacons);
    agg.entries.pop_back();  // signature still covers the dropped beacon
    EXPECT_FALSE(verify_aggregate(params, agg, cs));
    AggregateSignature empty;
    empty.s1 = params.suite.g1_identity();
    empty.s2 = params.suite.g1_identity();
    EXPECT_FALSE(verify_aggregate(params, empty, cs));
}

TEST(ReAggregate, PartitionsEqualFlatAggregation) {
    Rng rng(67);
    auto [params, master] = setup(SetupOptions{}, rng);
    CommonString cs{to_bytes("cs-parts"), 1};
    std::vector<SignedBeacon> beacons;
    for (int i = 0; i < 30; ++i) {
        auto cred = extract_short_term_key(params, master,
                                           random_bytes(rng, 16));
        beacons.push_back(
            sign_beacon(params, cred, random_bytes(rng, 8), cs, rng));
    }
    auto flat = aggregate(params, beacons);

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<AggregateSignature> parts;
        size_t i = 0;
        while (i < beacons.size()) {
            size_t n = 1 + uniform_below(rng, beacons.size() - i);
            parts.push_back(
                aggregate(params, std::span(beacons.data() + i, n)));
            i += n;
        }
        auto merged = re_aggregate(params, parts);
        ASSERT_EQ(merged.s1, flat.s1);
        ASSERT_EQ(merged.s2, flat.s2);
        ASSERT_EQ(merged.entries, flat.entries);
        ASSERT_TRUE(verify_aggregate(params, merged, cs));
    }

    auto identity = re_aggregate(params, std::span(&flat, 1));
    EXPECT_EQ(identity.s1, flat.s1);
    EXPECT_EQ(identity.entries, flat.entries);
    EXPECT_THROW(re_aggregate(params, std::span<const AggregateSignature>{}),
                 InvalidArgumentError);
}

TEST(Wire, BeaconAndAggregateRoundTrip) {
    Rng rng(68);
    auto [params, master] = setup(SetupOptions{}, rng);
    CommonString cs{to_bytes("cs-wire"), 1};
    std::vector<SignedBeacon> beacons;
    for (int i = 0; i < 3; ++i) {
        auto cred = extract_short_term_key(params, master,
                                           random_bytes(rng, 16));
        beacons.push_back(
            sign_beacon(params, cred, random_bytes(rng, 1 + i * 7), cs, rng));
    }
    for (const auto& b : beacons) {
        auto decoded = decode_beacon(params, encode_beacon(params, b));
        ASSERT_EQ(decoded.message, b.message);
        ASSERT_EQ(decoded.stp, b.stp);
        ASSERT_EQ(decoded.s1, b.s1);
        ASSERT_EQ(decoded.s2, b.s2);
    }
    auto agg = aggregate(params, beacons);
    auto decoded = decode_aggregate(params, encode_aggregate(params, agg));
    EXPECT_EQ(decoded.entries, agg.entries);
    EXPECT_EQ(decoded.s1, agg.s1);
    EXPECT_EQ(decoded.s2, agg.s2);

    Bytes wire = encode_aggregate(params, agg);
    wire.pop_back();
    EXPECT_THROW(decode_aggregate(params, wire), DeserializeError);
    // zero-count aggregates are rejected at decode
    Bytes empty_wire;
    append_be32(empty_wire, 0);
    append(empty_wire, params.suite.serialize(params.suite.g1_identity()));
    append(empty_wire, params.suite.serialize(params.suite.g1_identity()));
    EXPECT_THROW(decode_aggregate(params, empty_wire), DeserializeError);
}

}  // namespace
