#pragma once

#include <optional>
#include <string>
#include <utility>

#include "vanetauth/bilinear.hpp"
#include "vanetauth/bytes.hpp"

namespace vanetauth {

struct SymmetricCipherDescriptor {
    std::string name = "toy-siv-shake128";
    uint32_t key_bits = 128;
    uint32_t tag_bits = 64;
};

// Public parameters shared by every party. u1 = psi(u2) always holds; l2 is
// forced to the bit width of one serialized G1 element plus one encoded
// request plaintext so the masked payload splits at a constant offset.
struct SystemParams {
    BilinearSuite suite;
    G1Element u1;
    G2Element u2;
    uint32_t l1_bits = 128;  // pseudonym width
    uint32_t l2_bits = 0;    // masked payload width, derived
    uint32_t l3_bits = 128;  // symmetric key width
    Bytes id_kgc;
    G2Element p_kgc;
    SymmetricCipherDescriptor cipher;

    size_t pseudonym_len() const { return l1_bits / 8; }
    size_t request_len() const { return 8 + pseudonym_len() + 8; }
    size_t masked_len() const { return l2_bits / 8; }

    SystemParams with_oracle(std::shared_ptr<OracleHook> hook) const {
        SystemParams p = *this;
        p.suite = suite.with_oracle(std::move(hook));
        return p;
    }
};

struct MasterSecret {
    Scalar s;
};

struct LongTermCredential {
    Bytes ltp;       // long-term pseudonym, l1 bits
    G1Element p_v;   // public key point, H1(ltp)
    G1Element ltk;   // private key, s * p_v
};

struct RsuCredential {
    Bytes id_r;
    G2Element p_r;   // H2(id_r)
    G2Element b;     // private key, s * p_r
};

struct RequestPlaintext {
    uint64_t nonce = 0;
    Bytes ltp;
    uint64_t tau = 0;  // timestamp; the simulator uses epoch numbers

    friend bool operator==(const RequestPlaintext&,
                           const RequestPlaintext&) = default;
};

struct SigncryptedEnvelope {
    G1Element commitment;  // r * P_V
    Bytes masked;          // H5(omega) xor (Z || m), exactly l2 bits
};

// The signature a receiver can hand to a third party: the commitment plus
// the response point checked by the pairing equation.
struct InnerSignature {
    G1Element commitment;
    G1Element response;
};

struct SetupOptions {
    BackendId backend = BackendId::toy;
    ToyParams toy;
    uint32_t l1_bits = 128;
    uint32_t l3_bits = 128;
    std::string id_kgc = "kgc";
};

std::pair<SystemParams, MasterSecret> setup(const SetupOptions& opts, Rng& rng);

// Fixed-width request encoding: be64(nonce) || ltp || be64(tau).
Bytes encode_request(const SystemParams& params, const RequestPlaintext& m);
RequestPlaintext decode_request(const SystemParams& params, const Bytes& in);

LongTermCredential extract_vehicle_key(const SystemParams& params,
                                       const MasterSecret& master,
                                       const Bytes& ltp);
RsuCredential extract_rsu_key(const SystemParams& params,
                              const MasterSecret& master, const Bytes& id_r);

SigncryptedEnvelope signcrypt(const SystemParams& params,
                              const LongTermCredential& cred,
                              const RequestPlaintext& m, const Bytes& id_r,
                              Rng& rng);

enum class DesigncryptStatus : uint8_t {
    accepted,
    bad_length,       // masked payload is not l2 bits
    parse_failed,     // recovered Z is not a valid group encoding
    equation_failed,  // pairing check rejected
};

const char* to_string(DesigncryptStatus s);

struct DesigncryptResult {
    DesigncryptStatus status = DesigncryptStatus::equation_failed;
    std::optional<RequestPlaintext> plaintext;
    std::optional<InnerSignature> signature;

    bool accepted() const { return status == DesigncryptStatus::accepted; }
};

DesigncryptResult designcrypt(const SystemParams& params,
                              const RsuCredential& rsu,
                              const SigncryptedEnvelope& env);

bool verify_inner(const SystemParams& params, const RequestPlaintext& m,
                  const InnerSignature& sig);

// Wire form: serialize(commitment) || masked. Lengths come from the suite
// descriptor and l2.
Bytes encode_envelope(const SystemParams& params,
                      const SigncryptedEnvelope& env);
SigncryptedEnvelope decode_envelope(const SystemParams& params,
                                    const Bytes& wire);

}  // namespace vanetauth
