#pragma once

#include <cstdint>
#include <memory>
#include <optional>

#include "vanetauth/bytes.hpp"
#include "vanetauth/errors.hpp"

namespace vanetauth {

enum class BackendId : uint8_t { toy, external };

// Oracle identifiers double as the domain-separation prefix byte of the
// default hashing rule.
enum class OracleId : uint8_t { h1 = 0x01, h2 = 0x02, h3 = 0x03, h5 = 0x05 };

const char* backend_name(BackendId id);
const char* oracle_name(OracleId id);

namespace detail {
enum class GroupTag : uint8_t { scalar, g1, g2, gt };

// Value type for scalars and group elements. The representation is the
// canonical fixed-width encoding declared by the backend, so serialization
// is the identity and equality is bytewise.
template <GroupTag Tag>
class Element {
public:
    Element() = default;
    Element(BackendId backend, Bytes repr)
        : backend_(backend), repr_(std::move(repr)) {}

    BackendId backend() const { return backend_; }
    const Bytes& repr() const { return repr_; }
    bool empty() const { return repr_.empty(); }

    friend bool operator==(const Element&, const Element&) = default;

private:
    BackendId backend_ = BackendId::toy;
    Bytes repr_;
};
}  // namespace detail

using Scalar = detail::Element<detail::GroupTag::scalar>;
using G1Element = detail::Element<detail::GroupTag::g1>;
using G2Element = detail::Element<detail::GroupTag::g2>;
using GtElement = detail::Element<detail::GroupTag::gt>;

// Hook consulted by the suite's hash operations before the default digest
// rule. Returning nullopt falls through to the default. Queries are the raw
// input bytes; answers are canonical element encodings (or, for h5, the mask
// itself). The programmable oracle table implements this.
class OracleHook {
public:
    virtual ~OracleHook() = default;
    virtual std::optional<Bytes> lookup(OracleId oracle, const Bytes& query) = 0;
};

struct ToyParams {
    uint64_t q = 1009;       // small prime; group and scalar modulus
    uint64_t hash_seed = 0;  // mixed into the digest rule, see below
};

struct SuiteDescriptor {
    BackendId backend;
    size_t scalar_len;
    size_t g1_len;
    size_t g2_len;
    size_t gt_len;
    uint64_t toy_q;  // 0 for non-toy backends
};

// A bilinear group suite: G1/G2 additive, GT multiplicative, all of prime
// order q, with pairing e: G1 x G2 -> GT and isomorphism psi: G2 -> G1.
//
// Two backends share this interface. The toy backend represents G1 and G2 as
// residues mod q with generator 1 and GT elements as exponents of e(P1,P2),
// so e(x, y) = x*y mod q and GT multiplication is exponent addition. Every
// protocol equation can be checked by hand; it is transparent and offers no
// security whatsoever. The external backend is a seam for a real pairing
// library; it is not linked in this build and construction reports it
// unavailable. An adapter over a type-3 curve may implement psi only on
// points whose discrete log it knows, which covers every psi use in these
// protocols (hashed or public points derived in-system).
//
// Default hashing rule (re-derivable in tests): with prefix p the oracle id
// byte and attempt counter t starting at 0,
//     digest(t) = SHAKE128(be64(hash_seed) || p || be32(t) || data, 8)
// interpreted big-endian and reduced mod q. hash_to_g1/g2 accept attempt 0;
// hash_to_scalar rejects 0 and bumps t. mask_bytes reads ceil(bits/8) bytes
// of SHAKE128(be64(hash_seed) || 0x05 || be32(0) || serialize(w)) and clears
// trailing bits past the requested length.
//
// All operations are pure; a suite is safe to share across threads.
class BilinearSuite {
public:
    static BilinearSuite make_toy(const ToyParams& params = {});
    // Factory by id; throws BackendUnavailableError for `external`.
    static BilinearSuite make(BackendId id, const ToyParams& toy_params = {});

    // Same groups, hash operations consult `hook` first.
    BilinearSuite with_oracle(std::shared_ptr<OracleHook> hook) const;
    // Same groups, default hashing only.
    BilinearSuite without_oracle() const;

    const SuiteDescriptor& descriptor() const;
    BackendId backend() const { return descriptor().backend; }
    const G1Element& p1() const;
    const G2Element& p2() const;

    // --- scalar field ---
    Scalar scalar_from_u64(uint64_t v) const;
    uint64_t scalar_to_u64(const Scalar& s) const;  // toy backend only
    Scalar scalar_add(const Scalar& a, const Scalar& b) const;
    Scalar scalar_sub(const Scalar& a, const Scalar& b) const;
    Scalar scalar_mul(const Scalar& a, const Scalar& b) const;
    Scalar scalar_neg(const Scalar& a) const;
    Scalar scalar_inverse(const Scalar& a) const;  // throws on zero
    bool scalar_is_zero(const Scalar& a) const;
    Scalar random_scalar(Rng& rng) const;          // uniform over Z_q
    Scalar random_nonzero_scalar(Rng& rng) const;  // uniform over Z_q^*

    // --- group operations ---
    G1Element g1_identity() const;
    G1Element g1_add(const G1Element& a, const G1Element& b) const;
    G1Element g1_sub(const G1Element& a, const G1Element& b) const;
    G1Element g1_mul(const Scalar& k, const G1Element& p) const;
    bool g1_is_identity(const G1Element& a) const;

    G2Element g2_identity() const;
    G2Element g2_add(const G2Element& a, const G2Element& b) const;
    G2Element g2_mul(const Scalar& k, const G2Element& p) const;

    GtElement gt_identity() const;
    GtElement gt_mul(const GtElement& a, const GtElement& b) const;
    GtElement gt_pow(const GtElement& a, const Scalar& k) const;
    bool gt_is_identity(const GtElement& a) const;

    GtElement pair(const G1Element& x, const G2Element& y) const;
    G1Element psi(const G2Element& y) const;

    // --- hashing (h-prefix domain separation, oracle hook aware) ---
    G1Element hash_to_g1(const Bytes& label) const;
    G2Element hash_to_g2(const Bytes& label) const;
    Scalar hash_to_scalar(const Bytes& data) const;  // never zero
    Bytes mask_bytes(const GtElement& w, int64_t out_len_bits) const;

    // --- canonical serialization ---
    Bytes serialize(const Scalar& s) const;
    Bytes serialize(const G1Element& e) const;
    Bytes serialize(const G2Element& e) const;
    Bytes serialize(const GtElement& e) const;
    Scalar deserialize_scalar(const Bytes& in) const;
    G1Element deserialize_g1(const Bytes& in) const;
    G2Element deserialize_g2(const Bytes& in) const;
    GtElement deserialize_gt(const Bytes& in) const;

    const std::shared_ptr<OracleHook>& oracle() const { return oracle_; }

private:
    struct Impl;
    explicit BilinearSuite(std::shared_ptr<const Impl> impl,
                           std::shared_ptr<OracleHook> oracle = nullptr);

    std::shared_ptr<const Impl> impl_;
    std::shared_ptr<OracleHook> oracle_;
};

}  // namespace vanetauth
