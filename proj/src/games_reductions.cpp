#include "vanetauth/errors.hpp"
#include "vanetauth/games.hpp"

namespace vanetauth {

namespace {

Bytes stp_label(const Bytes& stp, uint8_t j) {
    Bytes label = stp;
    label.push_back(j);
    return label;
}

Bytes h3_point_key(const SystemParams& params, const G1Element& commitment,
                   const Bytes& encoded_request) {
    Bytes key = params.suite.serialize(commitment);
    append(key, encoded_request);
    return key;
}

Bytes h3_beacon_key(const Bytes& message, const Bytes& stp, const Bytes& cs) {
    Bytes in;
    append_be32(in, static_cast<uint32_t>(message.size()));
    append(in, message);
    append_be32(in, static_cast<uint32_t>(stp.size()));
    append(in, stp);
    append(in, cs);
    return in;
}

SystemParams reduction_params(const BilinearSuite& base, const G2Element& u2,
                              uint32_t l1_bits) {
    SystemParams params{
        .suite = base.without_oracle(),
        .u1 = base.psi(u2),
        .u2 = u2,
        .l1_bits = l1_bits,
        .l2_bits = 0,
        .l3_bits = 128,
        .id_kgc = to_bytes("kgc"),
        .p_kgc = base.hash_to_g2(to_bytes("kgc")),
        .cipher = SymmetricCipherDescriptor{},
    };
    params.l2_bits = static_cast<uint32_t>(
        8 * (base.descriptor().g1_len + params.request_len()));
    return params;
}

// The table-membership-checking de-signcryption shared by the Theorem 1
// case-1 and Theorem 2 procedures: every hash value must already be in the
// oracle lists, otherwise the query is answered with reject.
std::optional<std::pair<RequestPlaintext, InnerSignature>>
table_checking_designcrypt(OracleTable& table, const SystemParams& params,
                           const G2Element& rsu_private,
                           const SigncryptedEnvelope& env) {
    const BilinearSuite& suite = params.suite;
    if (env.masked.size() != params.masked_len()) return std::nullopt;

    GtElement omega = suite.pair(env.commitment, rsu_private);
    const OracleEntry* mask_entry =
        table.find(OracleId::h5, suite.serialize(omega));
    if (!mask_entry) return std::nullopt;

    Bytes payload = xor_bytes(env.masked, mask_entry->answer);
    size_t z_len = suite.descriptor().g1_len;
    G1Element response;
    RequestPlaintext m;
    try {
        response = suite.deserialize_g1(
            Bytes(payload.begin(), payload.begin() + static_cast<ptrdiff_t>(z_len)));
        m = decode_request(
            params, Bytes(payload.begin() + static_cast<ptrdiff_t>(z_len),
                          payload.end()));
    } catch (const DeserializeError&) {
        return std::nullopt;
    }

    const OracleEntry* vehicle = table.find(OracleId::h1, m.ltp);
    if (!vehicle) return std::nullopt;
    G1Element p_v = suite.deserialize_g1(vehicle->answer);

    Bytes key3 =
        h3_point_key(params, env.commitment, encode_request(params, m));
    const OracleEntry* challenge = table.find(OracleId::h3, key3);
    if (!challenge) return std::nullopt;
    Scalar h = suite.deserialize_scalar(challenge->answer);

    GtElement lhs = suite.pair(response, suite.p2());
    GtElement rhs = suite.pair(
        suite.g1_add(env.commitment, suite.g1_mul(h, p_v)), params.u2);
    if (!(lhs == rhs)) return std::nullopt;
    return std::make_pair(m, InnerSignature{env.commitment, response});
}

}  // namespace

// ---------------------------------------------------------------------------
// Theorem 1 reduction (confidentiality game machinery)
// ---------------------------------------------------------------------------

Theorem1Reduction::Theorem1Reduction(const BilinearSuite& base,
                                     const Instance& instance,
                                     size_t target_h2_index, uint64_t seed,
                                     uint32_t l1_bits)
    : base_(base.without_oracle()),
      instance_(instance),
      params_(reduction_params(base_, instance.b_p2, l1_bits)),
      rng_(derive_rng(seed, "thm1-reduction")),
      target_h2_index_(target_h2_index),
      cipher_(std::make_shared<ToyAead>()) {
    table_ = OracleTable::create(base_, OracleFallback::sample, seed,
                                 params_.l2_bits);
    params_ = params_.with_oracle(table_);
}

G1Element Theorem1Reduction::h1(const Bytes& ltp) {
    if (const OracleEntry* e = table_->find(OracleId::h1, ltp))
        return params_.suite.deserialize_g1(e->answer);
    auto t = program_vehicle_honest_form(*table_, params_, ltp, rng_);
    transcript_.add("h1", ltp, params_.suite.serialize(t.public_point), true);
    return t.public_point;
}

G2Element Theorem1Reduction::h2(const Bytes& id_r) {
    if (const OracleEntry* e = table_->find(OracleId::h2, id_r))
        return params_.suite.deserialize_g2(e->answer);
    ++h2_new_queries_;
    if (h2_new_queries_ == target_h2_index_) {
        target_rsu_id_ = id_r;
        table_->program(OracleId::h2, id_r,
                        params_.suite.serialize(instance_.a_p2), {}, {});
        transcript_.add("h2", id_r, params_.suite.serialize(instance_.a_p2),
                        false, "embedded instance point");
        return instance_.a_p2;
    }
    auto t = program_rsu_honest_form(*table_, params_, id_r, rng_);
    transcript_.add("h2", id_r, params_.suite.serialize(t.public_point), true);
    return t.public_point;
}

G1Element Theorem1Reduction::q4_vehicle_key(const Bytes& ltp) {
    h1(ltp);
    const OracleEntry* e = table_->find(OracleId::h1, ltp);
    transcript_.add("q4_vehicle", ltp, e->aux[0], true);
    return params_.suite.deserialize_g1(e->aux[0]);
}

G2Element Theorem1Reduction::q4_rsu_key(const Bytes& id_r) {
    h2(id_r);
    if (id_r == target_rsu_id_) {
        transcript_.add("abort", id_r, {}, false,
                        "private key of the target asked");
        throw SimulationAbort("key extraction for the embedded target");
    }
    const OracleEntry* e = table_->find(OracleId::h2, id_r);
    transcript_.add("q4_rsu", id_r, e->aux[0], true);
    return params_.suite.deserialize_g2(e->aux[0]);
}

SigncryptedEnvelope Theorem1Reduction::q1(const RequestPlaintext& m,
                                          const Bytes& id_r) {
    h1(m.ltp);
    h2(id_r);
    const OracleEntry* e = table_->find(OracleId::h1, m.ltp);
    LongTermCredential cred{m.ltp, params_.suite.deserialize_g1(e->answer),
                            params_.suite.deserialize_g1(e->aux[0])};
    auto env = signcrypt(params_, cred, m, id_r, rng_);
    transcript_.add("q1", encode_request(params_, m),
                    encode_envelope(params_, env));
    return env;
}

std::optional<std::pair<RequestPlaintext, InnerSignature>>
Theorem1Reduction::q2_case1(const SigncryptedEnvelope& env,
                            const Bytes& id_r) {
    const OracleEntry* e = table_->find(OracleId::h2, id_r);
    G2Element b = params_.suite.deserialize_g2(e->aux[0]);
    return table_checking_designcrypt(*table_, params_, b, env);
}

std::optional<std::pair<RequestPlaintext, InnerSignature>>
Theorem1Reduction::q2_case2(const SigncryptedEnvelope& env) {
    const BilinearSuite& suite = params_.suite;
    if (env.masked.size() != params_.masked_len()) return std::nullopt;
    size_t z_len = suite.descriptor().g1_len;

    // walk the mask list: each entry proposes a decryption, which is kept
    // only if every derived value is already on the lists and consistent
    for (const auto& [omega_key, mask_entry] : table_->entries(OracleId::h5)) {
        if (mask_entry.answer.size() != env.masked.size()) continue;
        Bytes payload = xor_bytes(env.masked, mask_entry.answer);
        G1Element response;
        RequestPlaintext m;
        try {
            response = suite.deserialize_g1(Bytes(
                payload.begin(), payload.begin() + static_cast<ptrdiff_t>(z_len)));
            m = decode_request(
                params_, Bytes(payload.begin() + static_cast<ptrdiff_t>(z_len),
                               payload.end()));
        } catch (const DeserializeError&) {
            continue;
        }
        const OracleEntry* vehicle = table_->find(OracleId::h1, m.ltp);
        if (!vehicle) continue;
        G1Element p_v = suite.deserialize_g1(vehicle->answer);
        G1Element ltk = suite.deserialize_g1(vehicle->aux[0]);

        Bytes key3 =
            h3_point_key(params_, env.commitment, encode_request(params_, m));
        const OracleEntry* challenge = table_->find(OracleId::h3, key3);
        if (!challenge) continue;
        Scalar h = suite.deserialize_scalar(challenge->answer);

        GtElement probe = suite.pair(
            suite.g1_sub(response, suite.g1_mul(h, ltk)), instance_.a_p2);
        if (suite.serialize(probe) != omega_key) continue;

        GtElement lhs = suite.pair(response, suite.p2());
        GtElement rhs = suite.pair(
            suite.g1_add(env.commitment, suite.g1_mul(h, p_v)), params_.u2);
        if (lhs == rhs)
            return std::make_pair(m, InnerSignature{env.commitment, response});
    }
    return std::nullopt;
}

std::optional<std::pair<RequestPlaintext, InnerSignature>>
Theorem1Reduction::q2(const SigncryptedEnvelope& env, const Bytes& id_r) {
    h2(id_r);
    auto result = id_r == target_rsu_id_ ? q2_case2(env) : q2_case1(env, id_r);
    transcript_.add("q2", encode_envelope(params_, env), {}, false,
                    result ? "accepted" : "rejected");
    return result;
}

Bytes Theorem1Reduction::q3_wrap(const Bytes& ltp, const Bytes& plaintext) {
    h1(ltp);
    const OracleEntry* e = table_->find(OracleId::h1, ltp);
    Bytes ct = cipher_->seal(e->aux[1], plaintext, to_bytes("q3"));
    transcript_.add("q3_wrap", ltp, ct);
    return ct;
}

std::optional<Bytes> Theorem1Reduction::q3_unwrap(const Bytes& ltp,
                                                  const Bytes& ciphertext) {
    h1(ltp);
    const OracleEntry* e = table_->find(OracleId::h1, ltp);
    transcript_.add("q3_unwrap", ltp, {});
    return cipher_->open(e->aux[1], ciphertext, to_bytes("q3"));
}

SigncryptedEnvelope Theorem1Reduction::challenge(const Bytes& ltp_star,
                                                 const Bytes& id_r_star) {
    h1(ltp_star);
    h2(id_r_star);
    if (id_r_star != target_rsu_id_) {
        transcript_.add("abort", id_r_star, {}, false,
                        "challenge RSU is not the embedded target");
        throw SimulationAbort("challenge identity misses the target slot");
    }
    SigncryptedEnvelope env;
    env.commitment = instance_.c_p1;
    env.masked = random_bytes(rng_, params_.masked_len());
    transcript_.add("challenge", ltp_star, encode_envelope(params_, env),
                    false, "commitment is the instance point");
    return env;
}

std::optional<GtElement> Theorem1Reduction::final_guess(const Bytes& ltp_star) {
    const OracleEntry* vehicle = table_->find(OracleId::h1, ltp_star);
    const auto& masks = table_->entries(OracleId::h5);
    if (!vehicle || vehicle->trapdoors.empty() || masks.empty()) {
        transcript_.add("final_guess", ltp_star, {}, false,
                        "no candidate mask entries");
        return std::nullopt;
    }
    size_t pick = static_cast<size_t>(
        uniform_below(rng_, static_cast<uint64_t>(masks.size())));
    GtElement omega = params_.suite.deserialize_gt(masks[pick].first);
    GtElement guess = params_.suite.gt_pow(
        omega, params_.suite.scalar_inverse(vehicle->trapdoors[0]));
    transcript_.add("final_guess", ltp_star, params_.suite.serialize(guess),
                    true, "omega^(1/x*), recorded not asserted");
    return guess;
}

// ---------------------------------------------------------------------------
// Theorem 2 reduction (signcryption unforgeability)
// ---------------------------------------------------------------------------

Theorem2Reduction::Theorem2Reduction(const BilinearSuite& base,
                                     const Instance& instance,
                                     size_t target_h1_index, uint64_t seed,
                                     uint32_t l1_bits)
    : base_(base.without_oracle()),
      instance_(instance),
      params_(reduction_params(base_, instance.b_p2, l1_bits)),
      rng_(derive_rng(seed, "thm2-reduction")),
      target_h1_index_(target_h1_index) {
    table_ = OracleTable::create(base_, OracleFallback::sample, seed,
                                 params_.l2_bits);
    params_ = params_.with_oracle(table_);
}

std::optional<Bytes> Theorem2Reduction::target_ltp() const {
    return target_ltp_;
}

G1Element Theorem2Reduction::h1(const Bytes& ltp) {
    if (const OracleEntry* e = table_->find(OracleId::h1, ltp))
        return params_.suite.deserialize_g1(e->answer);
    ++h1_new_queries_;
    if (h1_new_queries_ == target_h1_index_) {
        target_ltp_ = ltp;
        G1Element p_v = params_.suite.psi(instance_.a_p2);
        Bytes k = random_bytes(rng_, params_.l3_bits / 8);
        table_->program(OracleId::h1, ltp, params_.suite.serialize(p_v), {},
                        {Bytes{}, k});
        transcript_.add("h1", ltp, params_.suite.serialize(p_v), false,
                        "embedded instance point");
        return p_v;
    }
    auto t = program_vehicle_honest_form(*table_, params_, ltp, rng_);
    transcript_.add("h1", ltp, params_.suite.serialize(t.public_point), true);
    return t.public_point;
}

G2Element Theorem2Reduction::h2(const Bytes& id_r) {
    if (const OracleEntry* e = table_->find(OracleId::h2, id_r))
        return params_.suite.deserialize_g2(e->answer);
    auto t = program_rsu_honest_form(*table_, params_, id_r, rng_);
    transcript_.add("h2", id_r, params_.suite.serialize(t.public_point), true);
    return t.public_point;
}

G1Element Theorem2Reduction::q4_vehicle_key(const Bytes& ltp) {
    h1(ltp);
    if (target_ltp_ && ltp == *target_ltp_) {
        transcript_.add("abort", ltp, {}, false,
                        "private key of the target asked");
        throw SimulationAbort("key extraction for the embedded target");
    }
    const OracleEntry* e = table_->find(OracleId::h1, ltp);
    transcript_.add("q4_vehicle", ltp, e->aux[0], true);
    return params_.suite.deserialize_g1(e->aux[0]);
}

G2Element Theorem2Reduction::q4_rsu_key(const Bytes& id_r) {
    h2(id_r);
    const OracleEntry* e = table_->find(OracleId::h2, id_r);
    transcript_.add("q4_rsu", id_r, e->aux[0], true);
    return params_.suite.deserialize_g2(e->aux[0]);
}

SigncryptedEnvelope Theorem2Reduction::q1(const RequestPlaintext& m,
                                          const Bytes& id_r) {
    h1(m.ltp);
    h2(id_r);
    if (target_ltp_ && m.ltp == *target_ltp_) {
        auto env = simulate_signcrypt_without_key(table_, params_, m, id_r,
                                                  rng_);
        transcript_.add("q1", encode_request(params_, m),
                        encode_envelope(params_, env), false,
                        "no-key simulation");
        return env;
    }
    const OracleEntry* e = table_->find(OracleId::h1, m.ltp);
    LongTermCredential cred{m.ltp, params_.suite.deserialize_g1(e->answer),
                            params_.suite.deserialize_g1(e->aux[0])};
    auto env = signcrypt(params_, cred, m, id_r, rng_);
    transcript_.add("q1", encode_request(params_, m),
                    encode_envelope(params_, env));
    return env;
}

std::optional<std::pair<RequestPlaintext, InnerSignature>>
Theorem2Reduction::q2(const SigncryptedEnvelope& env, const Bytes& id_r) {
    h2(id_r);
    const OracleEntry* e = table_->find(OracleId::h2, id_r);
    G2Element b = params_.suite.deserialize_g2(e->aux[0]);
    auto result = table_checking_designcrypt(*table_, params_, b, env);
    transcript_.add("q2", encode_envelope(params_, env), {}, false,
                    result ? "accepted" : "rejected");
    return result;
}

// ---------------------------------------------------------------------------
// Theorem 4 reduction (aggregate unforgeability)
// ---------------------------------------------------------------------------

Theorem4Reduction::Theorem4Reduction(const BilinearSuite& base,
                                     const G2Element& u2_instance,
                                     size_t target_h1_index,
                                     size_t target_h2_index,
                                     size_t degenerate_h3_index, uint64_t seed,
                                     uint32_t l1_bits)
    : base_(base.without_oracle()),
      params_(reduction_params(base_, u2_instance, l1_bits)),
      rng_(derive_rng(seed, "thm4-reduction")),
      target_h1_index_(target_h1_index),
      target_h2_index_(target_h2_index),
      degenerate_h3_index_(degenerate_h3_index) {
    table_ = OracleTable::create(base_, OracleFallback::sample, seed,
                                 params_.l2_bits);
    params_ = params_.with_oracle(table_);
    // tracing state; the master secret is embedded in u2 and unknown here,
    // so the KGC record keeps a placeholder scalar it never uses
    auto cipher = std::make_shared<ToyAead>();
    kgc_ = std::make_unique<KgcState>(
        params_, MasterSecret{params_.suite.scalar_from_u64(0)},
        random_bytes(rng_, cipher->key_len()), cipher);
}

void Theorem4Reduction::ensure_h1(const Bytes& stp) {
    if (table_->contains(OracleId::h1, stp_label(stp, 0))) return;
    ++h1_new_;
    if (h1_new_ == target_h1_index_) {
        target_stp_ = stp;
        auto t = program_stp_target_form(*table_, params_, stp, rng_);
        transcript_.add("h1", stp, params_.suite.serialize(t.p0), true,
                        "target form");
        return;
    }
    auto t = program_stp_honest_form(*table_, params_, stp, rng_);
    transcript_.add("h1", stp, params_.suite.serialize(t.p0), true);
}

void Theorem4Reduction::ensure_h2(const Bytes& cs) {
    if (table_->contains(OracleId::h2, cs)) return;
    ++h2_new_;
    if (h2_new_ == target_h2_index_) {
        target_cs_ = cs;
        auto t = program_cs_target(*table_, params_, cs, rng_);
        transcript_.add("h2", cs, params_.suite.serialize(t.point), true,
                        "target common string");
        return;
    }
    auto t = program_cs_nontarget(*table_, params_, cs, rng_);
    transcript_.add("h2", cs, params_.suite.serialize(t.point), true);
}

G1Element Theorem4Reduction::h1(const Bytes& stp, uint8_t j) {
    if (j > 1) throw InvalidArgumentError("key point index must be 0 or 1");
    ensure_h1(stp);
    return params_.suite.deserialize_g1(
        table_->find(OracleId::h1, stp_label(stp, j))->answer);
}

G2Element Theorem4Reduction::h2(const Bytes& cs) {
    ensure_h2(cs);
    return params_.suite.deserialize_g2(table_->find(OracleId::h2, cs)->answer);
}

Scalar Theorem4Reduction::h3(const Bytes& message, const Bytes& stp,
                             const Bytes& cs) {
    Bytes key = h3_beacon_key(message, stp, cs);
    if (const OracleEntry* e = table_->find(OracleId::h3, key))
        return params_.suite.deserialize_scalar(e->answer);
    ensure_h1(stp);
    ensure_h2(cs);
    bool target_pair = target_stp_ && stp == *target_stp_ && target_cs_ &&
                       cs == *target_cs_;
    if (target_pair) {
        ++h3_target_pair_;
        if (h3_target_pair_ == degenerate_h3_index_) {
            const OracleEntry* e0 =
                table_->find(OracleId::h1, stp_label(stp, 0));
            const OracleEntry* e1 =
                table_->find(OracleId::h1, stp_label(stp, 1));
            Scalar c = params_.suite.scalar_mul(
                params_.suite.scalar_neg(e0->trapdoors[1]),
                params_.suite.scalar_inverse(e1->trapdoors[1]));
            table_->program(OracleId::h3, key, params_.suite.serialize(c));
            transcript_.add("h3", key, params_.suite.serialize(c), false,
                            "degenerate challenge slot");
            return c;
        }
    }
    Scalar c = params_.suite.random_nonzero_scalar(rng_);
    table_->program(OracleId::h3, key, params_.suite.serialize(c));
    transcript_.add("h3", key, params_.suite.serialize(c));
    return c;
}

std::pair<G1Element, G1Element> Theorem4Reduction::q5(const Bytes& stp) {
    ensure_h1(stp);
    ledger_.record_key_extraction(stp);
    if (target_stp_ && stp == *target_stp_) {
        transcript_.add("abort", stp, {}, false,
                        "private key of the target asked");
        throw SimulationAbort("key extraction for the embedded target");
    }
    const OracleEntry* e0 = table_->find(OracleId::h1, stp_label(stp, 0));
    const OracleEntry* e1 = table_->find(OracleId::h1, stp_label(stp, 1));
    G1Element d0 = params_.suite.g1_mul(e0->trapdoors[0], params_.u1);
    G1Element d1 = params_.suite.g1_mul(e1->trapdoors[0], params_.u1);
    transcript_.add("q5", stp, params_.suite.serialize(d0), true);
    return {d0, d1};
}

SignedBeacon Theorem4Reduction::q6(const Bytes& cs, const Bytes& message,
                                   const Bytes& stp) {
    ensure_h1(stp);
    ensure_h2(cs);
    h3(message, stp, cs);  // fix the challenge through the policy above
    Bytes sign_key;
    append_be32(sign_key, static_cast<uint32_t>(message.size()));
    append(sign_key, message);
    append(sign_key, stp);
    ledger_.record_signing(sign_key);
    auto beacon = simulate_sign_without_key(table_, params_, message, stp, cs,
                                            rng_);
    transcript_.add("q6", sign_key, encode_beacon(params_, beacon));
    return beacon;
}

std::optional<Bytes> Theorem4Reduction::q7_trace(const Bytes& pseudonym) {
    transcript_.add("q7", pseudonym, {});
    return kgc_->trace(pseudonym, TraceStrictness::lenient);
}

G1Element Theorem4Reduction::respond(const AggregateSignature& agg,
                                     const Bytes& cs) {
    if (!target_cs_ || cs != *target_cs_) {
        transcript_.add("abort", cs, {}, false,
                        "forgery common string is not the target");
        throw SimulationAbort("forgery misses the target common string");
    }
    size_t target_at = agg.entries.size();
    for (size_t i = 0; i < agg.entries.size(); ++i) {
        if (target_stp_ && agg.entries[i].stp == *target_stp_) {
            if (target_at != agg.entries.size())
                throw ProtocolError(
                    "target pseudonym appears more than once in the forgery");
            target_at = i;
        }
    }
    if (target_at == agg.entries.size()) {
        transcript_.add("abort", cs, {}, false,
                        "forgery does not involve the target pseudonym");
        throw SimulationAbort("forgery misses the target pseudonym");
    }
    const AggregateEntry& target_entry = agg.entries[target_at];
    Bytes sign_key;
    append_be32(sign_key, static_cast<uint32_t>(target_entry.message.size()));
    append(sign_key, target_entry.message);
    append(sign_key, target_entry.stp);
    if (ledger_.signed_before(sign_key)) {
        transcript_.add("abort", sign_key, {}, false,
                        "target entry was a signing-query answer");
        throw SimulationAbort("target entry is not fresh");
    }
    CommonString cs_struct{cs, 0};
    if (!verify_aggregate(params_, agg, cs_struct)) {
        transcript_.add("abort", cs, {}, false, "forgery fails verification");
        throw SimulationAbort("forged aggregate does not verify");
    }
    AggregateSignature ordered = agg;
    std::swap(ordered.entries[0], ordered.entries[target_at]);
    G1Element extracted =
        extract_cdh_from_aggregate_forgery(table_, params_, ordered, cs);
    transcript_.add("extract", cs, params_.suite.serialize(extracted), true);
    return extracted;
}

// ---------------------------------------------------------------------------
// Cooperative drivers
// ---------------------------------------------------------------------------

SigncryptForkResult cooperative_signcrypt_fork(uint64_t seed,
                                               const ToyParams& toy) {
    BilinearSuite base = BilinearSuite::make_toy(toy);
    Rng inst_rng = derive_rng(seed, "fork-instance");
    Scalar a = base.random_nonzero_scalar(inst_rng);
    Scalar b = base.random_nonzero_scalar(inst_rng);
    Theorem2Reduction::Instance instance{base.g2_mul(a, base.p2()),
                                         base.g2_mul(b, base.p2())};
    // the forger is granted the target key ab*P1 to make both runs succeed
    G1Element target_key =
        base.g1_mul(base.scalar_mul(a, b), base.p1());

    Bytes ltp = to_bytes("fork-target-vehicle");
    ltp.resize(16, 0);

    struct RunOutput {
        G1Element commitment;
        Scalar challenge;
        G1Element response;
    };
    auto run_forger = [&](Theorem2Reduction& red,
                          std::optional<std::pair<Bytes, Bytes>> swap_h3)
        -> RunOutput {
        // same tape both times
        Rng tape = derive_rng(seed, "fork-forger-tape");
        if (swap_h3)
            red.table()->program(OracleId::h3, swap_h3->first, swap_h3->second);
        const SystemParams& params = red.pub();
        G1Element p_v = red.h1(ltp);
        Scalar r = params.suite.random_nonzero_scalar(tape);
        RequestPlaintext m{uniform_below(tape, 1u << 30), ltp, 7};
        G1Element commitment = params.suite.g1_mul(r, p_v);
        Scalar h = params.suite.hash_to_scalar(
            h3_point_key(params, commitment, encode_request(params, m)));
        G1Element response =
            params.suite.g1_mul(params.suite.scalar_add(r, h), target_key);
        return RunOutput{commitment, h, response};
    };

    Theorem2Reduction first(base, instance, 1, seed);
    RunOutput out1 = run_forger(first, std::nullopt);

    // replay with the same tape but a different challenge at that point
    Rng swap_rng = derive_rng(seed, "fork-swap");
    Scalar swapped = first.pub().suite.random_nonzero_scalar(swap_rng);
    while (swapped == out1.challenge)
        swapped = first.pub().suite.random_nonzero_scalar(swap_rng);

    Theorem2Reduction second(base, instance, 1, seed);
    Bytes h3_key;
    {
        // reconstruct the exact first-run query point for the programmed swap
        Rng tape = derive_rng(seed, "fork-forger-tape");
        const SystemParams& params = second.pub();
        Scalar r = params.suite.random_nonzero_scalar(tape);
        RequestPlaintext m{uniform_below(tape, 1u << 30), ltp, 7};
        G1Element commitment =
            params.suite.g1_mul(r, params.suite.psi(instance.a_p2));
        h3_key = h3_point_key(params, commitment, encode_request(params, m));
    }
    RunOutput out2 = run_forger(
        second, std::make_pair(h3_key, second.pub().suite.serialize(swapped)));

    SigncryptForkResult result{
        .params = second.pub(),
        .pair = ForgeryPair{out1.commitment, out1.response, out2.response,
                            out1.challenge, out2.challenge},
        .target_public = second.pub().suite.psi(instance.a_p2),
        .expected_key = target_key,
    };
    return result;
}

AggregateExtractionResult cooperative_aggregate_extraction(
    uint64_t seed, size_t extra_entries, const ToyParams& toy) {
    BilinearSuite base = BilinearSuite::make_toy(toy);
    Rng inst_rng = derive_rng(seed, "agg-instance");
    Scalar s = base.random_nonzero_scalar(inst_rng);
    G2Element u2 = base.g2_mul(s, base.p2());

    Theorem4Reduction red(base, u2, 1, 1, 1, seed);
    const SystemParams& params = red.pub();
    Rng forger = derive_rng(seed, "agg-forger");

    Bytes stp = to_bytes("agg-target-stp");
    stp.resize(16, 0);
    Bytes cs = to_bytes("agg-target-cs");

    G1Element p0 = red.h1(stp, 0);
    G1Element p1 = red.h1(stp, 1);
    G2Element cs_hat = red.h2(cs);

    // burn the degenerate challenge slot on a throwaway message so the
    // actual forgery draws a random challenge
    red.h3(to_bytes("burn"), stp, cs);

    // the cooperative forger holds the honest key s*P_j
    G1Element d0 = params.suite.g1_mul(s, p0);
    G1Element d1 = params.suite.g1_mul(s, p1);

    Bytes message = random_bytes(forger, 12);
    Scalar c = red.h3(message, stp, cs);
    Scalar r = params.suite.random_nonzero_scalar(forger);
    SignedBeacon target_beacon;
    target_beacon.message = message;
    target_beacon.stp = stp;
    target_beacon.s2 = params.suite.g1_mul(r, params.suite.p1());
    target_beacon.s1 = params.suite.g1_add(
        params.suite.g1_mul(r, params.suite.psi(cs_hat)),
        params.suite.g1_add(d0, params.suite.g1_mul(c, d1)));

    std::vector<SignedBeacon> beacons{target_beacon};
    for (size_t i = 0; i < extra_entries; ++i) {
        Bytes other = to_bytes("agg-filler-" + std::to_string(i));
        other.resize(16, 0);
        beacons.push_back(red.q6(cs, random_bytes(forger, 10), other));
    }
    AggregateSignature agg = aggregate(params, beacons);

    AggregateExtractionResult result{
        .params = params,
        .extracted = red.respond(agg, cs),
        .expected = params.suite.g1_mul(s, params.u1),
    };
    return result;
}

}  // namespace vanetauth
