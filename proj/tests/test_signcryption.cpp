#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vanetauth/errors.hpp"
#include "vanetauth/oracle_table.hpp"
#include "vanetauth/signcryption.hpp"

using namespace vanetauth;
using testutil::residue;

namespace {

// Seed search so the first nonzero scalar drawn equals `target`; keeps the
// frozen fixtures runnable through the real signing path.
Rng rng_with_first_nonzero(const BilinearSuite& suite, uint64_t target) {
    for (uint64_t seed = 0; seed < 2000000; ++seed) {
        Rng probe(seed);
        if (suite.scalar_to_u64(suite.random_nonzero_scalar(probe)) == target)
            return Rng(seed);
    }
    throw std::runtime_error("no seed found for fixture scalar");
}

struct Sc1Fixture {
    SystemParams params;
    MasterSecret master;
    std::shared_ptr<OracleTable> table;
    LongTermCredential vehicle;
    RsuCredential rsu;
    RequestPlaintext m;
    nlohmann::json j;
};

Sc1Fixture make_sc1() {
    auto j = testutil::load_vectors()["sc1"];
    BilinearSuite base = BilinearSuite::make_toy();
    Rng setup_rng = rng_with_first_nonzero(base, j["s"].get<uint64_t>());
    auto [params, master] = setup(SetupOptions{}, setup_rng);

    auto table =
        OracleTable::create(params.suite, OracleFallback::digest, 0,
                            params.l2_bits);
    SystemParams hooked = params.with_oracle(table);

    Bytes ltp = from_hex(j["ltp_hex"].get<std::string>());
    Bytes id_r = from_hex(j["id_r_hex"].get<std::string>());
    const BilinearSuite& suite = hooked.suite;
    table->program(OracleId::h1, ltp,
                   suite.serialize(suite.g1_mul(
                       suite.scalar_from_u64(j["h1_pv"].get<uint64_t>()),
                       suite.p1())));
    table->program(OracleId::h2, id_r,
                   suite.serialize(suite.g2_mul(
                       suite.scalar_from_u64(j["h2_pr"].get<uint64_t>()),
                       suite.p2())));

    RequestPlaintext m{j["n"].get<uint64_t>(), ltp, j["tau"].get<uint64_t>()};
    // challenge point and mask key are known in advance from the vector
    Bytes h3_key = suite.serialize(suite.g1_mul(
        suite.scalar_from_u64(j["Y"].get<uint64_t>()), suite.p1()));
    append(h3_key, from_hex(j["m_hex"].get<std::string>()));
    table->program(OracleId::h3, h3_key,
                   suite.serialize(
                       suite.scalar_from_u64(j["h3"].get<uint64_t>())));
    Bytes omega_key = suite.serialize(suite.gt_pow(
        suite.pair(suite.p1(), suite.p2()),
        suite.scalar_from_u64(j["omega"].get<uint64_t>())));
    table->program(OracleId::h5, omega_key, Bytes(hooked.masked_len(), 0));

    Sc1Fixture fx{hooked, master, table,
                  extract_vehicle_key(hooked, master, ltp),
                  extract_rsu_key(hooked, master, id_r), m, j};
    return fx;
}

TEST(Setup, SeededMasterGivesFrozenPublicPoints) {
    auto j = testutil::load_vectors()["bilinear"];
    BilinearSuite base = BilinearSuite::make_toy();
    Rng rng = rng_with_first_nonzero(base, 7);
    auto [params, master] = setup(SetupOptions{}, rng);
    EXPECT_EQ(residue(params.suite, params.u1),
              j["setup_seed7_u1"].get<uint64_t>());
    EXPECT_EQ(residue(params.suite, params.u2),
              j["setup_seed7_u2"].get<uint64_t>());
    EXPECT_EQ(params.suite.scalar_to_u64(master.s), 7u);
}

TEST(Setup, PsiNormalizationHoldsAcrossSetups) {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        auto [params, master] = setup(SetupOptions{}, rng);
        EXPECT_EQ(params.u1, params.suite.psi(params.u2));
        EXPECT_EQ(params.u2,
                  params.suite.g2_mul(master.s, params.suite.p2()));
    }
}

TEST(Setup, DistinctSeedsDistinctMasters) {
    Rng r1(100), r2(101);
    auto [p1, m1] = setup(SetupOptions{}, r1);
    auto [p2, m2] = setup(SetupOptions{}, r2);
    EXPECT_NE(p1.u2, p2.u2);
}

TEST(Setup, MaskWidthCoversResponseAndRequest) {
    Rng rng(5);
    auto [params, master] = setup(SetupOptions{}, rng);
    EXPECT_EQ(params.l2_bits,
              8 * (params.suite.descriptor().g1_len + params.request_len()));
}

TEST(KeyExtraction, FrozenVectorAndPairingInvariant) {
    auto fx = make_sc1();
    EXPECT_EQ(residue(fx.params.suite, fx.vehicle.p_v),
              fx.j["h1_pv"].get<uint64_t>());
    EXPECT_EQ(residue(fx.params.suite, fx.vehicle.ltk),
              fx.j["ltk"].get<uint64_t>());
    EXPECT_EQ(residue(fx.params.suite, fx.rsu.p_r),
              fx.j["h2_pr"].get<uint64_t>());
    EXPECT_EQ(residue(fx.params.suite, fx.rsu.b), fx.j["b"].get<uint64_t>());

    const auto& suite = fx.params.suite;
    EXPECT_EQ(suite.pair(fx.vehicle.ltk, suite.p2()),
              suite.pair(fx.vehicle.p_v, fx.params.u2));
    EXPECT_EQ(suite.pair(suite.p1(), fx.rsu.b),
              suite.pair(fx.params.u1, fx.rsu.p_r));
}

TEST(KeyExtraction, PairingInvariantForRandomIdentities) {
    Rng rng(42);
    auto [params, master] = setup(SetupOptions{}, rng);
    const auto& suite = params.suite;
    for (int i = 0; i < 100; ++i) {
        auto cred = extract_vehicle_key(params, master,
                                        random_bytes(rng, 16));
        ASSERT_EQ(suite.pair(cred.ltk, suite.p2()),
                  suite.pair(cred.p_v, params.u2));
        auto rsu = extract_rsu_key(params, master, random_bytes(rng, 6));
        ASSERT_EQ(suite.pair(suite.p1(), rsu.b),
                  suite.pair(params.u1, rsu.p_r));
    }
    EXPECT_THROW(extract_vehicle_key(params, master, to_bytes("short")),
                 InvalidArgumentError);
}

TEST(Signcrypt, Sc1VectorBitExact) {
    auto fx = make_sc1();
    Rng r = rng_with_first_nonzero(fx.params.suite, fx.j["r"].get<uint64_t>());
    auto env = signcrypt(fx.params, fx.vehicle, fx.m, fx.rsu.id_r, r);
    EXPECT_EQ(residue(fx.params.suite, env.commitment),
              fx.j["Y"].get<uint64_t>());
    EXPECT_EQ(to_hex(env.masked), fx.j["y_hex"].get<std::string>());

    auto res = designcrypt(fx.params, fx.rsu, env);
    ASSERT_TRUE(res.accepted());
    EXPECT_EQ(*res.plaintext, fx.m);
    EXPECT_EQ(residue(fx.params.suite, res.signature->response),
              fx.j["Z"].get<uint64_t>());

    // verification equation sides, evaluated explicitly
    const auto& suite = fx.params.suite;
    auto lhs = suite.pair(res.signature->response, suite.p2());
    auto rhs = suite.pair(
        suite.g1_add(env.commitment,
                     suite.g1_mul(suite.scalar_from_u64(
                                      fx.j["h3"].get<uint64_t>()),
                                  fx.vehicle.p_v)),
        fx.params.u2);
    EXPECT_EQ(residue(suite, lhs), fx.j["verify_lhs"].get<uint64_t>());
    EXPECT_EQ(residue(suite, rhs), fx.j["verify_rhs"].get<uint64_t>());
    EXPECT_TRUE(verify_inner(fx.params, fx.m, *res.signature));
}

TEST(Signcrypt, MismatchedPseudonymRejected) {
    auto fx = make_sc1();
    RequestPlaintext wrong = fx.m;
    wrong.ltp = testutil::padded("someone-else");
    Rng rng(1);
    EXPECT_THROW(signcrypt(fx.params, fx.vehicle, wrong, fx.rsu.id_r, rng),
                 ProtocolError);
}

TEST(Signcrypt, FreshRandomnessChangesCommitment) {
    Rng rng(7);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto cred = extract_vehicle_key(params, master, testutil::padded("v"));
    RequestPlaintext m{1, cred.ltp, 0};
    std::set<Bytes> commitments, masks;
    for (int i = 0; i < 50; ++i) {
        auto env = signcrypt(params, cred, m, to_bytes("rsu"), rng);
        commitments.insert(params.suite.serialize(env.commitment));
        masks.insert(env.masked);
    }
    // pairwise distinct envelopes for a fixed plaintext
    EXPECT_GE(commitments.size(), 45u);
    EXPECT_GE(masks.size(), 45u);
}

TEST(Designcrypt, RoundTripThousandRandomTriples) {
    Rng rng(1234);
    auto [params, master] = setup(SetupOptions{}, rng);
    for (int i = 0; i < 1000; ++i) {
        auto vehicle =
            extract_vehicle_key(params, master, random_bytes(rng, 16));
        auto rsu = extract_rsu_key(params, master, random_bytes(rng, 5));
        RequestPlaintext m{rng(), vehicle.ltp, rng()};
        auto env = signcrypt(params, vehicle, m, rsu.id_r, rng);
        auto res = designcrypt(params, rsu, env);
        ASSERT_TRUE(res.accepted());
        ASSERT_EQ(*res.plaintext, m);
        ASSERT_TRUE(verify_inner(params, m, *res.signature));
    }
}

TEST(Designcrypt, ZeroResponseEdgeStillVerifies) {
    // challenge programmed to q - r so the response point is the identity
    auto j = testutil::load_vectors()["sc1"];
    BilinearSuite base = BilinearSuite::make_toy();
    Rng setup_rng = rng_with_first_nonzero(base, 7);
    auto [params, master] = setup(SetupOptions{}, setup_rng);
    auto table = OracleTable::create(params.suite, OracleFallback::digest, 0,
                                     params.l2_bits);
    SystemParams hooked = params.with_oracle(table);
    const auto& suite = hooked.suite;

    Bytes ltp = from_hex(j["ltp_hex"].get<std::string>());
    table->program(OracleId::h1, ltp,
                   suite.serialize(suite.g1_mul(suite.scalar_from_u64(3),
                                                suite.p1())));
    auto vehicle = extract_vehicle_key(hooked, master, ltp);
    auto rsu = extract_rsu_key(hooked, master, to_bytes("edge-rsu"));

    RequestPlaintext m{5, ltp, 9};
    // commitment for r=2 is 2*3 = 6; program h = q - 2 there
    Bytes h3_key = suite.serialize(
        suite.g1_mul(suite.scalar_from_u64(6), suite.p1()));
    append(h3_key, encode_request(hooked, m));
    table->program(OracleId::h3, h3_key,
                   suite.serialize(suite.scalar_from_u64(1007)));

    Rng r = rng_with_first_nonzero(suite, 2);
    auto env = signcrypt(hooked, vehicle, m, rsu.id_r, r);
    auto res = designcrypt(hooked, rsu, env);
    ASSERT_TRUE(res.accepted());
    EXPECT_TRUE(suite.g1_is_identity(res.signature->response));
    EXPECT_TRUE(verify_inner(hooked, m, *res.signature));
}

TEST(Designcrypt, SingleBitTamperRejected) {
    Rng rng(777);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto vehicle = extract_vehicle_key(params, master, testutil::padded("t"));
    auto rsu = extract_rsu_key(params, master, to_bytes("tamper-rsu"));
    int rejected = 0;
    const int trials = 200;
    for (int i = 0; i < trials; ++i) {
        RequestPlaintext m{rng(), vehicle.ltp, rng()};
        auto env = signcrypt(params, vehicle, m, rsu.id_r, rng);
        Bytes wire = encode_envelope(params, env);
        uint64_t bit = uniform_below(rng, wire.size() * 8);
        wire[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        try {
            auto mutated = decode_envelope(params, wire);
            if (!designcrypt(params, rsu, mutated).accepted()) ++rejected;
        } catch (const DeserializeError&) {
            ++rejected;
        }
    }
    EXPECT_GE(rejected, 199);
}

TEST(Designcrypt, WrongRsuKeyRejects) {
    Rng rng(888);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto vehicle = extract_vehicle_key(params, master, testutil::padded("w"));
    auto rsu_a = extract_rsu_key(params, master, to_bytes("rsu-a"));
    auto rsu_b = extract_rsu_key(params, master, to_bytes("rsu-b"));
    int rejected = 0;
    for (int i = 0; i < 50; ++i) {
        RequestPlaintext m{rng(), vehicle.ltp, rng()};
        auto env = signcrypt(params, vehicle, m, rsu_a.id_r, rng);
        if (!designcrypt(params, rsu_b, env).accepted()) ++rejected;
    }
    EXPECT_GE(rejected, 49);
}

TEST(Designcrypt, WrongMaskLengthReported) {
    Rng rng(999);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto rsu = extract_rsu_key(params, master, to_bytes("len-rsu"));
    SigncryptedEnvelope env{params.suite.p1(), Bytes(5, 0)};
    auto res = designcrypt(params, rsu, env);
    EXPECT_EQ(res.status, DesigncryptStatus::bad_length);
}

TEST(VerifyInner, PerturbationsFail) {
    Rng rng(321);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto vehicle = extract_vehicle_key(params, master, testutil::padded("p"));
    auto rsu = extract_rsu_key(params, master, to_bytes("rsu-v"));
    RequestPlaintext m{7, vehicle.ltp, 3};
    auto env = signcrypt(params, vehicle, m, rsu.id_r, rng);
    auto res = designcrypt(params, rsu, env);
    ASSERT_TRUE(res.accepted());
    auto sig = *res.signature;
    EXPECT_TRUE(verify_inner(params, m, sig));

    InnerSignature bumped = sig;
    bumped.response = params.suite.g1_add(sig.response, params.suite.p1());
    EXPECT_FALSE(verify_inner(params, m, bumped));

    // a signature bound to one pseudonym fails when the plaintext names
    // another
    RequestPlaintext rewritten = m;
    rewritten.ltp = testutil::padded("other-vehicle");
    EXPECT_FALSE(verify_inner(params, rewritten, sig));
}

TEST(EnvelopeWire, RoundTripAndLengthChecks) {
    Rng rng(654);
    auto [params, master] = setup(SetupOptions{}, rng);
    auto vehicle = extract_vehicle_key(params, master, testutil::padded("e"));
    RequestPlaintext m{2, vehicle.ltp, 4};
    auto env = signcrypt(params, vehicle, m, to_bytes("rsu-e"), rng);
    Bytes wire = encode_envelope(params, env);
    EXPECT_EQ(wire.size(),
              params.suite.descriptor().g1_len + params.masked_len());
    auto decoded = decode_envelope(params, wire);
    EXPECT_EQ(decoded.commitment, env.commitment);
    EXPECT_EQ(decoded.masked, env.masked);
    wire.push_back(0);
    EXPECT_THROW(decode_envelope(params, wire), DeserializeError);
}

TEST(RequestCodec, FixedWidthAndErrors) {
    Rng rng(11);
    auto [params, master] = setup(SetupOptions{}, rng);
    RequestPlaintext m{0x0102030405060708ull, testutil::padded("codec"),
                       0x1112131415161718ull};
    Bytes encoded = encode_request(params, m);
    EXPECT_EQ(encoded.size(), params.request_len());
    EXPECT_EQ(decode_request(params, encoded), m);
    encoded.pop_back();
    EXPECT_THROW(decode_request(params, encoded), DeserializeError);
    RequestPlaintext bad{1, to_bytes("tiny"), 2};
    EXPECT_THROW(encode_request(params, bad), InvalidArgumentError);
}

}  // namespace
