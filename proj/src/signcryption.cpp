#include "vanetauth/signcryption.hpp"

#include "vanetauth/errors.hpp"

namespace vanetauth {

std::pair<SystemParams, MasterSecret> setup(const SetupOptions& opts,
                                            Rng& rng) {
    if (opts.l1_bits == 0 || opts.l1_bits % 8 != 0)
        throw InvalidArgumentError("l1 must be a positive multiple of 8 bits");
    if (opts.l3_bits == 0 || opts.l3_bits % 8 != 0)
        throw InvalidArgumentError("l3 must be a positive multiple of 8 bits");

    BilinearSuite suite = BilinearSuite::make(opts.backend, opts.toy);
    MasterSecret master{suite.random_nonzero_scalar(rng)};
    G2Element u2 = suite.g2_mul(master.s, suite.p2());

    SystemParams params{
        .suite = suite,
        .u1 = suite.psi(u2),
        .u2 = u2,
        .l1_bits = opts.l1_bits,
        .l2_bits = 0,
        .l3_bits = opts.l3_bits,
        .id_kgc = to_bytes(opts.id_kgc),
        .p_kgc = suite.hash_to_g2(to_bytes(opts.id_kgc)),
        .cipher = SymmetricCipherDescriptor{.name = "toy-siv-shake128",
                                            .key_bits = opts.l3_bits,
                                            .tag_bits = 64},
    };
    params.l2_bits = static_cast<uint32_t>(
        8 * (suite.descriptor().g1_len + params.request_len()));
    return {std::move(params), std::move(master)};
}

Bytes encode_request(const SystemParams& params, const RequestPlaintext& m) {
    if (m.ltp.size() != params.pseudonym_len())
        throw InvalidArgumentError("request pseudonym has wrong length");
    Bytes out;
    out.reserve(params.request_len());
    append_be64(out, m.nonce);
    append(out, m.ltp);
    append_be64(out, m.tau);
    return out;
}

RequestPlaintext decode_request(const SystemParams& params, const Bytes& in) {
    if (in.size() != params.request_len())
        throw DeserializeError("request plaintext has wrong length");
    size_t off = 0;
    RequestPlaintext m;
    m.nonce = read_be64(in, off);
    m.ltp = read_exact(in, off, params.pseudonym_len());
    m.tau = read_be64(in, off);
    return m;
}

LongTermCredential extract_vehicle_key(const SystemParams& params,
                                       const MasterSecret& master,
                                       const Bytes& ltp) {
    if (ltp.size() != params.pseudonym_len())
        throw InvalidArgumentError("pseudonym has wrong length");
    LongTermCredential cred;
    cred.ltp = ltp;
    cred.p_v = params.suite.hash_to_g1(ltp);
    cred.ltk = params.suite.g1_mul(master.s, cred.p_v);
    return cred;
}

RsuCredential extract_rsu_key(const SystemParams& params,
                              const MasterSecret& master, const Bytes& id_r) {
    if (id_r.empty()) throw InvalidArgumentError("empty RSU identity");
    RsuCredential cred;
    cred.id_r = id_r;
    cred.p_r = params.suite.hash_to_g2(id_r);
    cred.b = params.suite.g2_mul(master.s, cred.p_r);
    return cred;
}

static Bytes challenge_input(const SystemParams& params,
                             const G1Element& commitment,
                             const Bytes& encoded_request) {
    Bytes in = params.suite.serialize(commitment);
    append(in, encoded_request);
    return in;
}

SigncryptedEnvelope signcrypt(const SystemParams& params,
                              const LongTermCredential& cred,
                              const RequestPlaintext& m, const Bytes& id_r,
                              Rng& rng) {
    if (m.ltp != cred.ltp)
        throw ProtocolError("plaintext pseudonym does not match credential");
    const BilinearSuite& suite = params.suite;

    Bytes encoded = encode_request(params, m);
    Scalar r = suite.random_nonzero_scalar(rng);
    G1Element commitment = suite.g1_mul(r, cred.p_v);
    Scalar h = suite.hash_to_scalar(challenge_input(params, commitment, encoded));
    G1Element response = suite.g1_mul(suite.scalar_add(r, h), cred.ltk);
    G2Element p_r = suite.hash_to_g2(id_r);
    GtElement omega = suite.pair(suite.g1_mul(r, cred.ltk), p_r);

    Bytes payload = suite.serialize(response);
    append(payload, encoded);
    Bytes mask = suite.mask_bytes(omega, params.l2_bits);

    SigncryptedEnvelope env;
    env.commitment = commitment;
    env.masked = xor_bytes(mask, payload);
    return env;
}

const char* to_string(DesigncryptStatus s) {
    switch (s) {
        case DesigncryptStatus::accepted: return "accepted";
        case DesigncryptStatus::bad_length: return "bad_length";
        case DesigncryptStatus::parse_failed: return "parse_failed";
        case DesigncryptStatus::equation_failed: return "equation_failed";
    }
    return "?";
}

DesigncryptResult designcrypt(const SystemParams& params,
                              const RsuCredential& rsu,
                              const SigncryptedEnvelope& env) {
    const BilinearSuite& suite = params.suite;
    DesigncryptResult result;
    if (env.masked.size() != params.masked_len()) {
        result.status = DesigncryptStatus::bad_length;
        return result;
    }

    GtElement omega = suite.pair(env.commitment, rsu.b);
    Bytes payload = xor_bytes(suite.mask_bytes(omega, params.l2_bits),
                              env.masked);
    size_t z_len = suite.descriptor().g1_len;
    Bytes z_bytes(payload.begin(), payload.begin() + static_cast<ptrdiff_t>(z_len));
    Bytes m_bytes(payload.begin() + static_cast<ptrdiff_t>(z_len), payload.end());

    G1Element response;
    RequestPlaintext m;
    try {
        response = suite.deserialize_g1(z_bytes);
        m = decode_request(params, m_bytes);
    } catch (const DeserializeError&) {
        result.status = DesigncryptStatus::parse_failed;
        return result;
    }

    InnerSignature sig{env.commitment, response};
    if (!verify_inner(params, m, sig)) {
        result.status = DesigncryptStatus::equation_failed;
        return result;
    }
    result.status = DesigncryptStatus::accepted;
    result.plaintext = std::move(m);
    result.signature = std::move(sig);
    return result;
}

bool verify_inner(const SystemParams& params, const RequestPlaintext& m,
                  const InnerSignature& sig) {
    const BilinearSuite& suite = params.suite;
    Bytes encoded = encode_request(params, m);
    G1Element p_v = suite.hash_to_g1(m.ltp);
    Scalar h =
        suite.hash_to_scalar(challenge_input(params, sig.commitment, encoded));
    GtElement lhs = suite.pair(sig.response, suite.p2());
    GtElement rhs = suite.pair(
        suite.g1_add(sig.commitment, suite.g1_mul(h, p_v)), params.u2);
    return lhs == rhs;
}

Bytes encode_envelope(const SystemParams& params,
                      const SigncryptedEnvelope& env) {
    Bytes out = params.suite.serialize(env.commitment);
    append(out, env.masked);
    return out;
}

SigncryptedEnvelope decode_envelope(const SystemParams& params,
                                    const Bytes& wire) {
    size_t y_len = params.suite.descriptor().g1_len;
    if (wire.size() != y_len + params.masked_len())
        throw DeserializeError("envelope has wrong length");
    size_t off = 0;
    SigncryptedEnvelope env;
    env.commitment = params.suite.deserialize_g1(read_exact(wire, off, y_len));
    env.masked = read_exact(wire, off, params.masked_len());
    return env;
}

}  // namespace vanetauth
