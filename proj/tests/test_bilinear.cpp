#include <gtest/gtest.h>

#include "test_util.hpp"
#include "vanetauth/errors.hpp"
#include "vanetauth/xof.hpp"

using namespace vanetauth;
using testutil::residue;

namespace {

BilinearSuite toy(uint64_t seed = 0) {
    return BilinearSuite::make_toy(ToyParams{1009, seed});
}

TEST(ToyBackend, PairMatchesFrozenVector) {
    auto j = testutil::load_vectors();
    auto suite = toy();
    auto x = suite.deserialize_g1(from_hex("0006"));
    auto y = suite.deserialize_g2(from_hex("001c"));
    EXPECT_EQ(residue(suite, suite.pair(x, y)),
              j["bilinear"]["pair_6_28"].get<uint64_t>());
}

TEST(ToyBackend, PairWithZeroIsGtIdentity) {
    auto suite = toy();
    auto zero = suite.g1_identity();
    auto y = suite.g2_mul(suite.scalar_from_u64(123), suite.p2());
    EXPECT_TRUE(suite.gt_is_identity(suite.pair(zero, y)));
}

TEST(ToyBackend, PairSymmetricInExponents) {
    auto suite = toy();
    Rng rng(7);
    for (int i = 0; i < 100; ++i) {
        auto a = suite.random_scalar(rng);
        auto b = suite.random_scalar(rng);
        auto lhs = suite.pair(suite.g1_mul(a, suite.p1()),
                              suite.g2_mul(b, suite.p2()));
        auto rhs = suite.pair(suite.g1_mul(b, suite.p1()),
                              suite.g2_mul(a, suite.p2()));
        EXPECT_EQ(lhs, rhs);
    }
}

TEST(ToyBackend, BilinearityAgainstExponentArithmetic) {
    auto suite = toy();
    Rng rng(11);
    auto base = suite.pair(suite.p1(), suite.p2());
    for (int i = 0; i < 500; ++i) {
        auto a = suite.random_scalar(rng);
        auto b = suite.random_scalar(rng);
        auto lhs = suite.pair(suite.g1_mul(a, suite.p1()),
                              suite.g2_mul(b, suite.p2()));
        auto rhs = suite.gt_pow(base, suite.scalar_mul(a, b));
        ASSERT_EQ(lhs, rhs);
    }
}

TEST(ToyBackend, NonDegenerate) {
    auto suite = toy();
    EXPECT_FALSE(suite.gt_is_identity(suite.pair(suite.p1(), suite.p2())));
}

TEST(ToyBackend, PsiIsNormalizedAndHomomorphic) {
    auto suite = toy();
    EXPECT_EQ(suite.psi(suite.p2()), suite.p1());
    auto seven = suite.g2_mul(suite.scalar_from_u64(7), suite.p2());
    EXPECT_EQ(residue(suite, suite.psi(seven)), 7u);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        auto a = suite.random_scalar(rng);
        EXPECT_EQ(suite.psi(suite.g2_mul(a, suite.p2())),
                  suite.g1_mul(a, suite.p1()));
    }
}

TEST(ToyBackend, PsiCompatibilityWithPairing) {
    auto suite = toy();
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        auto y = suite.g2_mul(suite.random_scalar(rng), suite.p2());
        EXPECT_EQ(suite.pair(suite.psi(y), suite.p2()),
                  suite.pair(suite.psi(suite.p2()), y));
    }
}

TEST(HashToGroup, DeterministicAndSeedRederivable) {
    auto suite = toy(99);
    auto a = suite.hash_to_g1(to_bytes("LTP-A"));
    auto b = suite.hash_to_g1(to_bytes("LTP-A"));
    EXPECT_EQ(a, b);

    // recompute via the documented rule: shake128(be64(seed)||0x01||be32(0)||data)
    Bytes input = be64(99);
    input.push_back(0x01);
    append_be32(input, 0);
    append(input, to_bytes("LTP-A"));
    Bytes digest = shake128(input, 8);
    size_t off = 0;
    EXPECT_EQ(residue(suite, a), read_be64(digest, off) % 1009);
}

TEST(HashToGroup, G2RederivableAndDomainSeparated) {
    auto suite = toy(99);
    auto g2 = suite.hash_to_g2(to_bytes("RSU-1"));
    Bytes input = be64(99);
    input.push_back(0x02);
    append_be32(input, 0);
    append(input, to_bytes("RSU-1"));
    Bytes digest = shake128(input, 8);
    size_t off = 0;
    EXPECT_EQ(residue(suite, g2), read_be64(digest, off) % 1009);

    // separate prefixes: collisions between h1 and h2 stay at the q floor
    Rng rng(17);
    int equal = 0;
    for (int i = 0; i < 200; ++i) {
        Bytes label = random_bytes(rng, 12);
        if (residue(suite, suite.hash_to_g1(label)) ==
            residue(suite, suite.hash_to_g2(label)))
            ++equal;
    }
    EXPECT_LE(equal, 2);
}

TEST(HashToGroup, DistinctInputsRarelyCollide) {
    auto suite = toy(1);
    Rng rng(23);
    int collisions = 0;
    for (int i = 0; i < 1000; ++i) {
        Bytes x = random_bytes(rng, 8);
        Bytes y = random_bytes(rng, 8);
        if (x == y) continue;
        if (suite.hash_to_g1(x) == suite.hash_to_g1(y)) ++collisions;
    }
    EXPECT_LE(collisions, 10);  // ~1/1009 expected rate
}

TEST(HashToScalar, NeverZero) {
    auto suite = toy(2);
    Rng rng(29);
    for (int i = 0; i < 10000; ++i) {
        auto s = suite.hash_to_scalar(random_bytes(rng, 6));
        ASSERT_FALSE(suite.scalar_is_zero(s));
    }
}

TEST(MaskBytes, LengthAndDeterminism) {
    auto suite = toy(3);
    auto w = suite.pair(suite.p1(), suite.p2());
    EXPECT_TRUE(suite.mask_bytes(w, 0).empty());
    EXPECT_EQ(suite.mask_bytes(w, 272).size(), 34u);
    EXPECT_EQ(suite.mask_bytes(w, 272), suite.mask_bytes(w, 272));
    EXPECT_THROW(suite.mask_bytes(w, -8), InvalidArgumentError);
    // trailing bits cleared for non-byte lengths
    auto m = suite.mask_bytes(w, 12);
    EXPECT_EQ(m.size(), 2u);
    EXPECT_EQ(m[1] & 0x0f, 0);
}

TEST(Serialization, FrozenScalarEncoding) {
    auto j = testutil::load_vectors();
    auto suite = toy();
    auto s = suite.scalar_from_u64(147);
    EXPECT_EQ(to_hex(suite.serialize(s)),
              j["bilinear"]["scalar_147_hex"].get<std::string>());
}

TEST(Serialization, RoundTripAndInjectivity) {
    auto suite = toy();
    Rng rng(31);
    std::set<Bytes> seen;
    for (int i = 0; i < 1000; ++i) {
        auto e = suite.g1_mul(suite.random_scalar(rng), suite.p1());
        auto bytes = suite.serialize(e);
        EXPECT_EQ(suite.deserialize_g1(bytes), e);
        seen.insert(bytes);
    }
    // distinct residues keep distinct encodings
    std::set<uint64_t> values;
    for (const auto& b : seen) {
        uint64_t v = 0;
        for (uint8_t c : b) v = v << 8 | c;
        values.insert(v);
    }
    EXPECT_EQ(values.size(), seen.size());
}

TEST(Serialization, RejectsOutOfRangeAndWrongLength) {
    auto suite = toy();
    EXPECT_THROW(suite.deserialize_scalar(from_hex("03f1")), DeserializeError);
    EXPECT_THROW(suite.deserialize_scalar(from_hex("ffff")), DeserializeError);
    EXPECT_THROW(suite.deserialize_scalar(from_hex("00")), DeserializeError);
    EXPECT_THROW(suite.deserialize_scalar(from_hex("000001")),
                 DeserializeError);
    EXPECT_NO_THROW(suite.deserialize_scalar(from_hex("03f0")));
}

TEST(Backends, MixedBackendElementsRejected) {
    auto suite = toy();
    G1Element alien(BackendId::external, from_hex("0001"));
    EXPECT_THROW(suite.pair(alien, suite.p2()), BackendMismatchError);
    EXPECT_THROW(suite.g1_add(alien, suite.p1()), BackendMismatchError);
}

TEST(Backends, ExternalBackendUnavailable) {
    EXPECT_THROW(BilinearSuite::make(BackendId::external),
                 BackendUnavailableError);
}

TEST(Backends, ToyModulusValidation) {
    EXPECT_THROW(BilinearSuite::make_toy(ToyParams{1000, 0}),
                 InvalidArgumentError);
    EXPECT_NO_THROW(BilinearSuite::make_toy(ToyParams{101, 0}));
}

TEST(ScalarField, InverseLaw) {
    auto suite = toy();
    Rng rng(37);
    for (int i = 0; i < 200; ++i) {
        auto x = suite.random_nonzero_scalar(rng);
        EXPECT_EQ(suite.scalar_to_u64(
                      suite.scalar_mul(x, suite.scalar_inverse(x))),
                  1u);
    }
    EXPECT_THROW(suite.scalar_inverse(suite.scalar_from_u64(0)),
                 InvalidArgumentError);
}

}  // namespace
