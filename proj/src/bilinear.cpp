#include "vanetauth/bilinear.hpp"

#include <string>

#include "vanetauth/xof.hpp"

namespace vanetauth {

const char* backend_name(BackendId id) {
    switch (id) {
        case BackendId::toy: return "toy";
        case BackendId::external: return "external";
    }
    return "?";
}

const char* oracle_name(OracleId id) {
    switch (id) {
        case OracleId::h1: return "h1";
        case OracleId::h2: return "h2";
        case OracleId::h3: return "h3";
        case OracleId::h5: return "h5";
    }
    return "?";
}

namespace {

bool is_small_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

size_t residue_width(uint64_t q) {
    size_t w = 0;
    uint64_t top = q - 1;
    do {
        ++w;
        top >>= 8;
    } while (top != 0);
    return w;
}

// extended Euclid; q prime, 0 < a < q
uint64_t mod_inverse(uint64_t a, uint64_t q) {
    int64_t r0 = static_cast<int64_t>(q), r1 = static_cast<int64_t>(a);
    int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        int64_t k = r0 / r1;
        int64_t r2 = r0 - k * r1;
        r0 = r1;
        r1 = r2;
        int64_t t2 = t0 - k * t1;
        t0 = t1;
        t1 = t2;
    }
    if (t0 < 0) t0 += static_cast<int64_t>(q);
    return static_cast<uint64_t>(t0);
}

}  // namespace

// The toy backend keeps q and the seeded hashing rule; elements carry their
// own canonical bytes, so there is no per-element state to manage here.
struct BilinearSuite::Impl {
    BackendId id;
    uint64_t q = 0;
    uint64_t hash_seed = 0;
    size_t width = 0;
    SuiteDescriptor descr{};
    G1Element p1;
    G2Element p2;

    Bytes encode(uint64_t v) const {
        Bytes out(width);
        uint64_t x = v;
        for (size_t i = width; i-- > 0;) {
            out[i] = static_cast<uint8_t>(x & 0xff);
            x >>= 8;
        }
        return out;
    }

    uint64_t decode(const Bytes& in, const char* what) const {
        if (in.size() != width)
            throw DeserializeError(std::string(what) + ": expected " +
                                   std::to_string(width) + " bytes, got " +
                                   std::to_string(in.size()));
        uint64_t v = 0;
        for (uint8_t c : in) v = v << 8 | c;
        if (v >= q)
            throw DeserializeError(std::string(what) +
                                   ": residue out of range");
        return v;
    }

    template <typename E>
    uint64_t value(const E& e, const char* what) const {
        if (e.backend() != id)
            throw BackendMismatchError(std::string(what) +
                                       ": element from a different backend");
        return decode(e.repr(), what);
    }
};

BilinearSuite::BilinearSuite(std::shared_ptr<const Impl> impl,
                             std::shared_ptr<OracleHook> oracle)
    : impl_(std::move(impl)), oracle_(std::move(oracle)) {}

BilinearSuite BilinearSuite::make_toy(const ToyParams& params) {
    if (!is_small_prime(params.q))
        throw InvalidArgumentError("toy modulus must be a small prime");
    if (params.q >> 31)
        throw InvalidArgumentError("toy modulus must fit 31 bits");
    auto impl = std::make_shared<Impl>();
    impl->id = BackendId::toy;
    impl->q = params.q;
    impl->hash_seed = params.hash_seed;
    impl->width = residue_width(params.q);
    impl->descr = SuiteDescriptor{BackendId::toy, impl->width, impl->width,
                                  impl->width, impl->width, params.q};
    impl->p1 = G1Element(BackendId::toy, impl->encode(1));
    impl->p2 = G2Element(BackendId::toy, impl->encode(1));
    return BilinearSuite(std::move(impl));
}

BilinearSuite BilinearSuite::make(BackendId id, const ToyParams& toy_params) {
    switch (id) {
        case BackendId::toy: return make_toy(toy_params);
        case BackendId::external:
            throw BackendUnavailableError(
                "external pairing backend is not linked into this build");
    }
    throw InvalidArgumentError("unknown backend id");
}

BilinearSuite BilinearSuite::with_oracle(
    std::shared_ptr<OracleHook> hook) const {
    return BilinearSuite(impl_, std::move(hook));
}

BilinearSuite BilinearSuite::without_oracle() const {
    return BilinearSuite(impl_);
}

const SuiteDescriptor& BilinearSuite::descriptor() const {
    return impl_->descr;
}

const G1Element& BilinearSuite::p1() const { return impl_->p1; }
const G2Element& BilinearSuite::p2() const { return impl_->p2; }

Scalar BilinearSuite::scalar_from_u64(uint64_t v) const {
    return Scalar(impl_->id, impl_->encode(v % impl_->q));
}

uint64_t BilinearSuite::scalar_to_u64(const Scalar& s) const {
    return impl_->value(s, "scalar");
}

Scalar BilinearSuite::scalar_add(const Scalar& a, const Scalar& b) const {
    uint64_t x = impl_->value(a, "scalar_add");
    uint64_t y = impl_->value(b, "scalar_add");
    return Scalar(impl_->id, impl_->encode((x + y) % impl_->q));
}

Scalar BilinearSuite::scalar_sub(const Scalar& a, const Scalar& b) const {
    uint64_t x = impl_->value(a, "scalar_sub");
    uint64_t y = impl_->value(b, "scalar_sub");
    return Scalar(impl_->id, impl_->encode((x + impl_->q - y) % impl_->q));
}

Scalar BilinearSuite::scalar_mul(const Scalar& a, const Scalar& b) const {
    uint64_t x = impl_->value(a, "scalar_mul");
    uint64_t y = impl_->value(b, "scalar_mul");
    return Scalar(impl_->id, impl_->encode(x * y % impl_->q));
}

Scalar BilinearSuite::scalar_neg(const Scalar& a) const {
    uint64_t x = impl_->value(a, "scalar_neg");
    return Scalar(impl_->id, impl_->encode((impl_->q - x) % impl_->q));
}

Scalar BilinearSuite::scalar_inverse(const Scalar& a) const {
    uint64_t x = impl_->value(a, "scalar_inverse");
    if (x == 0) throw InvalidArgumentError("scalar_inverse: zero");
    return Scalar(impl_->id, impl_->encode(mod_inverse(x, impl_->q)));
}

bool BilinearSuite::scalar_is_zero(const Scalar& a) const {
    return impl_->value(a, "scalar_is_zero") == 0;
}

Scalar BilinearSuite::random_scalar(Rng& rng) const {
    return Scalar(impl_->id, impl_->encode(uniform_below(rng, impl_->q)));
}

Scalar BilinearSuite::random_nonzero_scalar(Rng& rng) const {
    return Scalar(impl_->id,
                  impl_->encode(1 + uniform_below(rng, impl_->q - 1)));
}

G1Element BilinearSuite::g1_identity() const {
    return G1Element(impl_->id, impl_->encode(0));
}

G1Element BilinearSuite::g1_add(const G1Element& a, const G1Element& b) const {
    uint64_t x = impl_->value(a, "g1_add");
    uint64_t y = impl_->value(b, "g1_add");
    return G1Element(impl_->id, impl_->encode((x + y) % impl_->q));
}

G1Element BilinearSuite::g1_sub(const G1Element& a, const G1Element& b) const {
    uint64_t x = impl_->value(a, "g1_sub");
    uint64_t y = impl_->value(b, "g1_sub");
    return G1Element(impl_->id, impl_->encode((x + impl_->q - y) % impl_->q));
}

G1Element BilinearSuite::g1_mul(const Scalar& k, const G1Element& p) const {
    uint64_t a = impl_->value(k, "g1_mul");
    uint64_t x = impl_->value(p, "g1_mul");
    return G1Element(impl_->id, impl_->encode(a * x % impl_->q));
}

bool BilinearSuite::g1_is_identity(const G1Element& a) const {
    return impl_->value(a, "g1_is_identity") == 0;
}

G2Element BilinearSuite::g2_identity() const {
    return G2Element(impl_->id, impl_->encode(0));
}

G2Element BilinearSuite::g2_add(const G2Element& a, const G2Element& b) const {
    uint64_t x = impl_->value(a, "g2_add");
    uint64_t y = impl_->value(b, "g2_add");
    return G2Element(impl_->id, impl_->encode((x + y) % impl_->q));
}

G2Element BilinearSuite::g2_mul(const Scalar& k, const G2Element& p) const {
    uint64_t a = impl_->value(k, "g2_mul");
    uint64_t x = impl_->value(p, "g2_mul");
    return G2Element(impl_->id, impl_->encode(a * x % impl_->q));
}

GtElement BilinearSuite::gt_identity() const {
    return GtElement(impl_->id, impl_->encode(0));
}

GtElement BilinearSuite::gt_mul(const GtElement& a, const GtElement& b) const {
    // GT is written multiplicatively; the toy representation stores
    // exponents, so the group law is exponent addition.
    uint64_t x = impl_->value(a, "gt_mul");
    uint64_t y = impl_->value(b, "gt_mul");
    return GtElement(impl_->id, impl_->encode((x + y) % impl_->q));
}

GtElement BilinearSuite::gt_pow(const GtElement& a, const Scalar& k) const {
    uint64_t x = impl_->value(a, "gt_pow");
    uint64_t e = impl_->value(k, "gt_pow");
    return GtElement(impl_->id, impl_->encode(x * e % impl_->q));
}

bool BilinearSuite::gt_is_identity(const GtElement& a) const {
    return impl_->value(a, "gt_is_identity") == 0;
}

GtElement BilinearSuite::pair(const G1Element& x, const G2Element& y) const {
    uint64_t a = impl_->value(x, "pair");
    uint64_t b = impl_->value(y, "pair");
    return GtElement(impl_->id, impl_->encode(a * b % impl_->q));
}

G1Element BilinearSuite::psi(const G2Element& y) const {
    return G1Element(impl_->id, impl_->encode(impl_->value(y, "psi")));
}

struct HashInput {
    static Bytes build(uint64_t seed, OracleId oracle, uint32_t attempt,
                       const Bytes& data) {
        Bytes in = be64(seed);
        append_u8(in, static_cast<uint8_t>(oracle));
        append_be32(in, attempt);
        append(in, data);
        return in;
    }
};

static uint64_t reduce_digest(uint64_t seed, uint64_t q, OracleId oracle,
                              uint32_t attempt, const Bytes& data) {
    Bytes digest = shake128(HashInput::build(seed, oracle, attempt, data), 8);
    size_t off = 0;
    return read_be64(digest, off) % q;
}

G1Element BilinearSuite::hash_to_g1(const Bytes& label) const {
    if (oracle_) {
        if (auto ans = oracle_->lookup(OracleId::h1, label))
            return deserialize_g1(*ans);
    }
    uint64_t v =
        reduce_digest(impl_->hash_seed, impl_->q, OracleId::h1, 0, label);
    return G1Element(impl_->id, impl_->encode(v));
}

G2Element BilinearSuite::hash_to_g2(const Bytes& label) const {
    if (oracle_) {
        if (auto ans = oracle_->lookup(OracleId::h2, label))
            return deserialize_g2(*ans);
    }
    uint64_t v =
        reduce_digest(impl_->hash_seed, impl_->q, OracleId::h2, 0, label);
    return G2Element(impl_->id, impl_->encode(v));
}

Scalar BilinearSuite::hash_to_scalar(const Bytes& data) const {
    if (oracle_) {
        if (auto ans = oracle_->lookup(OracleId::h3, data))
            return deserialize_scalar(*ans);
    }
    // rejection of 0 keeps outputs in Z_q^*
    for (uint32_t attempt = 0;; ++attempt) {
        uint64_t v = reduce_digest(impl_->hash_seed, impl_->q, OracleId::h3,
                                   attempt, data);
        if (v != 0) return Scalar(impl_->id, impl_->encode(v));
    }
}

Bytes BilinearSuite::mask_bytes(const GtElement& w, int64_t out_len_bits) const {
    if (out_len_bits < 0)
        throw InvalidArgumentError("mask_bytes: negative length");
    size_t n_bytes = static_cast<size_t>((out_len_bits + 7) / 8);
    Bytes key = serialize(w);
    Bytes mask;
    if (oracle_) {
        if (auto ans = oracle_->lookup(OracleId::h5, key)) {
            if (ans->size() != n_bytes)
                throw OracleError("mask_bytes: programmed answer has wrong length");
            mask = *ans;
        }
    }
    if (mask.empty() && n_bytes > 0)
        mask = shake128(HashInput::build(impl_->hash_seed, OracleId::h5, 0, key),
                        n_bytes);
    if (out_len_bits % 8 != 0 && !mask.empty())
        mask.back() &= static_cast<uint8_t>(0xff << (8 - out_len_bits % 8));
    mask.resize(n_bytes);
    return mask;
}

Bytes BilinearSuite::serialize(const Scalar& s) const {
    impl_->value(s, "serialize scalar");
    return s.repr();
}
Bytes BilinearSuite::serialize(const G1Element& e) const {
    impl_->value(e, "serialize g1");
    return e.repr();
}
Bytes BilinearSuite::serialize(const G2Element& e) const {
    impl_->value(e, "serialize g2");
    return e.repr();
}
Bytes BilinearSuite::serialize(const GtElement& e) const {
    impl_->value(e, "serialize gt");
    return e.repr();
}

Scalar BilinearSuite::deserialize_scalar(const Bytes& in) const {
    impl_->decode(in, "scalar");
    return Scalar(impl_->id, in);
}
G1Element BilinearSuite::deserialize_g1(const Bytes& in) const {
    impl_->decode(in, "g1");
    return G1Element(impl_->id, in);
}
G2Element BilinearSuite::deserialize_g2(const Bytes& in) const {
    impl_->decode(in, "g2");
    return G2Element(impl_->id, in);
}
GtElement BilinearSuite::deserialize_gt(const Bytes& in) const {
    impl_->decode(in, "gt");
    return GtElement(impl_->id, in);
}

}  // namespace vanetauth
