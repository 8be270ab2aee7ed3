#include "vanetauth/games.hpp"

#include <json.hpp>

#include "vanetauth/errors.hpp"
#include "vanetauth/xof.hpp"

namespace vanetauth {

// ---------------------------------------------------------------------------
// QueryLedger / Transcript
// ---------------------------------------------------------------------------

void QueryLedger::record_key_extraction(const Bytes& identity) {
    key_queries_.insert(identity);
}

void QueryLedger::record_signing(const Bytes& message_key) {
    sign_queries_.insert(message_key);
}

bool QueryLedger::key_extracted(const Bytes& identity) const {
    return key_queries_.count(identity) != 0;
}

bool QueryLedger::signed_before(const Bytes& message_key) const {
    return sign_queries_.count(message_key) != 0;
}

std::string digest8_hex(const Bytes& data) {
    return to_hex(shake128(data, 8));
}

void Transcript::add(std::string kind, const Bytes& input, const Bytes& answer,
                     bool trapdoor_present, std::string note) {
    records_.push_back(TranscriptRecord{std::move(kind), digest8_hex(input),
                                        answer.empty() ? "" : digest8_hex(answer),
                                        trapdoor_present, std::move(note)});
}

size_t Transcript::count(const std::string& kind) const {
    size_t n = 0;
    for (const auto& r : records_)
        if (r.kind == kind) ++n;
    return n;
}

std::string Transcript::to_jsonl() const {
    std::string out;
    for (const auto& r : records_) {
        nlohmann::json j;
        j["kind"] = r.kind;
        j["input"] = r.input_digest;
        j["answer"] = r.answer_digest;
        j["trapdoor"] = r.trapdoor_present;
        if (!r.note.empty()) j["note"] = r.note;
        out += j.dump();
        out += '\n';
    }
    return out;
}

// ---------------------------------------------------------------------------
// Oracle programming helpers
// ---------------------------------------------------------------------------

namespace {

const Bytes kTargetMarker{0x01};

Bytes stp_label(const Bytes& stp, uint8_t j) {
    Bytes label = stp;
    label.push_back(j);
    return label;
}

Bytes ledger_signcrypt_key(const Bytes& encoded_request, const Bytes& id_r) {
    Bytes key;
    append_be32(key, static_cast<uint32_t>(encoded_request.size()));
    append(key, encoded_request);
    append(key, id_r);
    return key;
}

Bytes ledger_sign_key(const Bytes& message, const Bytes& stp) {
    Bytes key;
    append_be32(key, static_cast<uint32_t>(message.size()));
    append(key, message);
    append(key, stp);
    return key;
}

Bytes challenge_point_input(const SystemParams& params,
                            const G1Element& commitment,
                            const RequestPlaintext& m) {
    Bytes in = params.suite.serialize(commitment);
    append(in, encode_request(params, m));
    return in;
}

void require_table_attached(const SystemParams& params,
                            const std::shared_ptr<OracleTable>& table) {
    if (params.suite.oracle().get() != table.get())
        throw InvalidArgumentError(
            "params must carry the oracle table as its hash hook");
}

}  // namespace

VehicleTrapdoor program_vehicle_honest_form(OracleTable& table,
                                            const SystemParams& params,
                                            const Bytes& ltp, Rng& rng) {
    const BilinearSuite& suite = params.suite;
    Scalar x = suite.random_nonzero_scalar(rng);
    G1Element p_v = suite.g1_mul(x, suite.p1());
    G1Element ltk = suite.g1_mul(x, params.u1);
    Bytes k = random_bytes(rng, params.l3_bits / 8);
    table.program(OracleId::h1, ltp, suite.serialize(p_v), {x},
                  {suite.serialize(ltk), k});
    return VehicleTrapdoor{x, p_v, ltk, k};
}

RsuTrapdoor program_rsu_honest_form(OracleTable& table,
                                    const SystemParams& params,
                                    const Bytes& id_r, Rng& rng) {
    const BilinearSuite& suite = params.suite;
    Scalar x = suite.random_nonzero_scalar(rng);
    G2Element p_r = suite.g2_mul(x, suite.p2());
    G2Element b = suite.g2_mul(x, params.u2);
    table.program(OracleId::h2, id_r, suite.serialize(p_r), {x},
                  {suite.serialize(b)});
    return RsuTrapdoor{x, p_r, b};
}

StpTrapdoor program_stp_target_form(OracleTable& table,
                                    const SystemParams& params,
                                    const Bytes& stp, Rng& rng) {
    const BilinearSuite& suite = params.suite;
    StpTrapdoor t;
    t.alpha0 = suite.random_scalar(rng);
    t.alpha1 = suite.random_scalar(rng);
    t.alpha0p = suite.random_nonzero_scalar(rng);
    t.alpha1p = suite.random_nonzero_scalar(rng);
    t.p0 = suite.g1_add(suite.g1_mul(t.alpha0, suite.p1()),
                        suite.g1_mul(t.alpha0p, params.u1));
    t.p1 = suite.g1_add(suite.g1_mul(t.alpha1, suite.p1()),
                        suite.g1_mul(t.alpha1p, params.u1));
    t.target_form = true;
    table.program(OracleId::h1, stp_label(stp, 0), suite.serialize(t.p0),
                  {t.alpha0, t.alpha0p}, {kTargetMarker});
    table.program(OracleId::h1, stp_label(stp, 1), suite.serialize(t.p1),
                  {t.alpha1, t.alpha1p}, {kTargetMarker});
    return t;
}

StpTrapdoor program_stp_honest_form(OracleTable& table,
                                    const SystemParams& params,
                                    const Bytes& stp, Rng& rng) {
    const BilinearSuite& suite = params.suite;
    StpTrapdoor t;
    t.alpha0 = suite.random_scalar(rng);
    t.alpha1 = suite.random_scalar(rng);
    t.alpha0p = suite.scalar_from_u64(0);
    t.alpha1p = suite.scalar_from_u64(0);
    t.p0 = suite.g1_mul(t.alpha0, suite.p1());
    t.p1 = suite.g1_mul(t.alpha1, suite.p1());
    table.program(OracleId::h1, stp_label(stp, 0), suite.serialize(t.p0),
                  {t.alpha0, t.alpha0p}, {});
    table.program(OracleId::h1, stp_label(stp, 1), suite.serialize(t.p1),
                  {t.alpha1, t.alpha1p}, {});
    return t;
}

CsTrapdoor program_cs_target(OracleTable& table, const SystemParams& params,
                             const Bytes& cs, Rng& rng) {
    const BilinearSuite& suite = params.suite;
    CsTrapdoor t;
    t.beta = suite.random_nonzero_scalar(rng);
    t.point = suite.g2_mul(t.beta, suite.p2());
    t.target = true;
    table.program(OracleId::h2, cs, suite.serialize(t.point), {t.beta},
                  {kTargetMarker});
    return t;
}

CsTrapdoor program_cs_nontarget(OracleTable& table, const SystemParams& params,
                                const Bytes& cs, Rng& rng) {
    const BilinearSuite& suite = params.suite;
    CsTrapdoor t;
    t.beta = suite.random_nonzero_scalar(rng);
    t.point = suite.g2_mul(t.beta, params.u2);
    t.target = false;
    table.program(OracleId::h2, cs, suite.serialize(t.point), {t.beta}, {});
    return t;
}

// ---------------------------------------------------------------------------
// No-key simulators
// ---------------------------------------------------------------------------

SigncryptedEnvelope simulate_signcrypt_without_key(
    const std::shared_ptr<OracleTable>& table, const SystemParams& params,
    const RequestPlaintext& m, const Bytes& id_r, Rng& rng) {
    require_table_attached(params, table);
    const BilinearSuite& suite = params.suite;

    if (!table->contains(OracleId::h2, id_r))
        program_rsu_honest_form(*table, params, id_r, rng);
    const OracleEntry* rsu = table->find(OracleId::h2, id_r);
    if (rsu->aux.empty())
        throw OracleError("rsu entry lacks the private-key trapdoor");
    G2Element b = suite.deserialize_g2(rsu->aux[0]);

    Scalar r = suite.random_nonzero_scalar(rng);
    Scalar h = suite.random_nonzero_scalar(rng);
    G1Element p_v = suite.hash_to_g1(m.ltp);
    G1Element commitment =
        suite.g1_sub(suite.g1_mul(r, suite.p1()), suite.g1_mul(h, p_v));

    Bytes h3_key = challenge_point_input(params, commitment, m);
    if (table->contains(OracleId::h3, h3_key))
        throw SimulationAbort(
            "challenge hash already fixed at the back-patched point");
    table->program(OracleId::h3, h3_key, suite.serialize(h));

    G1Element response = suite.g1_mul(r, params.u1);
    GtElement omega = suite.pair(commitment, b);

    Bytes payload = suite.serialize(response);
    append(payload, encode_request(params, m));
    SigncryptedEnvelope env;
    env.commitment = commitment;
    env.masked = xor_bytes(suite.mask_bytes(omega, params.l2_bits), payload);
    return env;
}

SignedBeacon simulate_sign_without_key(const std::shared_ptr<OracleTable>& table,
                                       const SystemParams& params,
                                       const Bytes& message, const Bytes& stp,
                                       const Bytes& cs, Rng& rng) {
    require_table_attached(params, table);
    const BilinearSuite& suite = params.suite;

    if (!table->contains(OracleId::h1, stp_label(stp, 0)))
        program_stp_honest_form(*table, params, stp, rng);
    const OracleEntry* e0 = table->find(OracleId::h1, stp_label(stp, 0));
    const OracleEntry* e1 = table->find(OracleId::h1, stp_label(stp, 1));
    if (!e0 || !e1 || e0->trapdoors.size() != 2 || e1->trapdoors.size() != 2)
        throw OracleError("pseudonym entries lack alpha trapdoors");
    bool target_stp = !e0->aux.empty() && e0->aux[0] == kTargetMarker;

    if (!table->contains(OracleId::h2, cs))
        program_cs_nontarget(*table, params, cs, rng);
    const OracleEntry* ecs = table->find(OracleId::h2, cs);
    if (ecs->trapdoors.empty())
        throw OracleError("common-string entry lacks the beta trapdoor");
    bool target_cs = !ecs->aux.empty() && ecs->aux[0] == kTargetMarker;

    Scalar alpha0 = e0->trapdoors[0], alpha0p = e0->trapdoors[1];
    Scalar alpha1 = e1->trapdoors[0], alpha1p = e1->trapdoors[1];
    Scalar beta = ecs->trapdoors[0];
    G2Element cs_hat = suite.deserialize_g2(ecs->answer);
    Scalar c = beacon_challenge(params, message, stp, cs);

    SignedBeacon beacon;
    beacon.message = message;
    beacon.stp = stp;

    if (target_stp && target_cs) {
        Scalar degenerate = suite.scalar_mul(suite.scalar_neg(alpha0p),
                                             suite.scalar_inverse(alpha1p));
        if (!(c == degenerate))
            throw SimulationAbort(
                "target pseudonym signed twice under the target common string");
        // free commitment, response built to satisfy the equation
        beacon.s2 = suite.g1_mul(suite.random_nonzero_scalar(rng), suite.p1());
        Scalar coeff = suite.scalar_add(alpha0, suite.scalar_mul(c, alpha1));
        beacon.s1 = suite.g1_add(suite.g1_mul(beta, beacon.s2),
                                 suite.g1_mul(coeff, params.u1));
        return beacon;
    }

    if (target_stp) {
        // commitment absorbs the key points, response rides the cs point
        G1Element p0 = suite.deserialize_g1(e0->answer);
        G1Element p1 = suite.deserialize_g1(e1->answer);
        Scalar r = suite.random_scalar(rng);
        G1Element shift = suite.g1_mul(
            suite.scalar_inverse(beta),
            suite.g1_add(p0, suite.g1_mul(c, p1)));
        beacon.s2 = suite.g1_sub(suite.g1_mul(r, suite.p1()), shift);
        beacon.s1 = suite.g1_mul(r, suite.psi(cs_hat));
        return beacon;
    }

    // honest-form pseudonym: the alpha trapdoors are the real keys
    Scalar r = suite.random_scalar(rng);
    Scalar coeff = suite.scalar_add(alpha0, suite.scalar_mul(c, alpha1));
    beacon.s2 = suite.g1_mul(r, suite.p1());
    beacon.s1 = suite.g1_add(suite.g1_mul(r, suite.psi(cs_hat)),
                             suite.g1_mul(coeff, params.u1));
    return beacon;
}

// ---------------------------------------------------------------------------
// Extractors
// ---------------------------------------------------------------------------

G1Element extract_cdh_from_signcryption_forgeries(const SystemParams& params,
                                                  const ForgeryPair& pair) {
    const BilinearSuite& suite = params.suite;
    if (pair.challenge_first == pair.challenge_second)
        throw ProtocolError("no fork: both challenges are equal");
    Scalar dh = suite.scalar_sub(pair.challenge_first, pair.challenge_second);
    G1Element dz = suite.g1_sub(pair.response_first, pair.response_second);
    return suite.g1_mul(suite.scalar_inverse(dh), dz);
}

G1Element extract_cdh_from_aggregate_forgery(
    const std::shared_ptr<OracleTable>& table, const SystemParams& params,
    const AggregateSignature& agg, const Bytes& cs) {
    require_table_attached(params, table);
    const BilinearSuite& suite = params.suite;
    if (agg.entries.empty())
        throw ProtocolError("aggregate forgery has no entries");

    const OracleEntry* ecs = table->find(OracleId::h2, cs);
    if (!ecs || ecs->trapdoors.empty())
        throw OracleError("common-string entry lacks the beta trapdoor");
    if (ecs->aux.empty() || ecs->aux[0] != kTargetMarker)
        throw ProtocolError("common string is not the designated target");
    Scalar beta = ecs->trapdoors[0];

    struct EntryData {
        Scalar alpha0, alpha0p, alpha1, alpha1p;
        Scalar c;
        bool target;
    };
    std::vector<EntryData> data;
    for (const AggregateEntry& e : agg.entries) {
        const OracleEntry* e0 = table->find(OracleId::h1, stp_label(e.stp, 0));
        const OracleEntry* e1 = table->find(OracleId::h1, stp_label(e.stp, 1));
        if (!e0 || !e1 || e0->trapdoors.size() != 2 ||
            e1->trapdoors.size() != 2)
            throw OracleError("pseudonym entries lack alpha trapdoors");
        EntryData d;
        d.alpha0 = e0->trapdoors[0];
        d.alpha0p = e0->trapdoors[1];
        d.alpha1 = e1->trapdoors[0];
        d.alpha1p = e1->trapdoors[1];
        d.c = beacon_challenge(params, e.message, e.stp, cs);
        d.target = !e0->aux.empty() && e0->aux[0] == kTargetMarker;
        data.push_back(d);
    }
    if (!data[0].target)
        throw ProtocolError("first entry is not in target form");
    for (size_t i = 1; i < data.size(); ++i)
        if (data[i].target)
            throw ProtocolError("a later entry also uses the target pseudonym");

    Scalar denom = suite.scalar_add(
        data[0].alpha0p, suite.scalar_mul(data[0].c, data[0].alpha1p));
    if (suite.scalar_is_zero(denom))
        throw ProtocolError("degenerate fork: alpha' combination vanishes");

    G1Element acc = agg.s1;
    for (size_t i = 1; i < data.size(); ++i) {
        acc = suite.g1_sub(acc, suite.g1_mul(data[i].alpha0, params.u1));
        acc = suite.g1_sub(
            acc, suite.g1_mul(suite.scalar_mul(data[i].alpha1, data[i].c),
                              params.u1));
    }
    acc = suite.g1_sub(acc, suite.g1_mul(beta, agg.s2));
    Scalar coeff1 = suite.scalar_add(
        data[0].alpha0, suite.scalar_mul(data[0].c, data[0].alpha1));
    acc = suite.g1_sub(acc, suite.g1_mul(coeff1, params.u1));
    return suite.g1_mul(suite.scalar_inverse(denom), acc);
}

// ---------------------------------------------------------------------------
// Forgery games with an honest challenger
// ---------------------------------------------------------------------------

const char* to_string(GameOutcome o) {
    switch (o) {
        case GameOutcome::lose: return "lose";
        case GameOutcome::win_forgery: return "win_forgery";
        case GameOutcome::win_key_compromise: return "win_key_compromise";
        case GameOutcome::disqualified: return "disqualified";
    }
    return "?";
}

namespace {

Bytes fixed_width_id(const SystemParams& params, const std::string& stem,
                     size_t i) {
    Bytes id = to_bytes(stem + std::to_string(i));
    id.resize(params.pseudonym_len(), 0);
    return id;
}

class SigncryptChallenger final : public SigncryptGameView {
public:
    SigncryptChallenger(uint64_t seed, const GameOptions& opts)
        : rng_(derive_rng(seed, "signcrypt-game")),
          adversary_rng_(derive_rng(seed, "signcrypt-adversary")),
          cipher_(std::make_shared<ToyAead>()),
          system_(vanetauth::setup(opts.setup, rng_)),
          params_(system_.first),
          master_(system_.second) {
        for (size_t i = 0; i < opts.vehicles; ++i) {
            Bytes ltp = fixed_width_id(params_, "game-vehicle-", i);
            vehicle_ltps_.push_back(ltp);
            channel_keys_[ltp] = random_bytes(rng_, cipher_->key_len());
        }
        for (size_t i = 0; i < opts.rsus; ++i)
            rsu_ids_.push_back(to_bytes("game-rsu-" + std::to_string(i)));
    }

    const SystemParams& pub() const override { return params_; }
    const std::vector<Bytes>& vehicle_ltps() const override {
        return vehicle_ltps_;
    }
    const std::vector<Bytes>& rsu_ids() const override { return rsu_ids_; }
    Rng& rng() override { return adversary_rng_; }

    SigncryptedEnvelope q1_signcrypt(const RequestPlaintext& m,
                                     const Bytes& id_r) override {
        auto cred = extract_vehicle_key(params_, master_, m.ltp);
        auto env = signcrypt(params_, cred, m, id_r, rng_);
        ledger_.record_signing(
            ledger_signcrypt_key(encode_request(params_, m), id_r));
        transcript_.add("q1", encode_request(params_, m),
                        encode_envelope(params_, env));
        return env;
    }

    DesigncryptResult q2_designcrypt(const SigncryptedEnvelope& env,
                                     const Bytes& id_r) override {
        auto rsu = extract_rsu_key(params_, master_, id_r);
        auto res = designcrypt(params_, rsu, env);
        transcript_.add("q2", encode_envelope(params_, env), {}, false,
                        to_string(res.status));
        return res;
    }

    Bytes q3_wrap(const Bytes& ltp, const ReplyPayload& payload) override {
        auto key = channel_key(ltp);
        Bytes ct = wrap_reply(params_, *cipher_, {ltp, key}, payload);
        transcript_.add("q3_wrap", ltp, ct);
        return ct;
    }

    std::optional<ReplyPayload> q3_unwrap(const Bytes& ltp,
                                          const Bytes& ciphertext) override {
        auto key = channel_key(ltp);
        transcript_.add("q3_unwrap", ltp, {});
        return unwrap_reply(params_, *cipher_, {ltp, key}, ciphertext);
    }

    G1Element q4_vehicle_key(const Bytes& ltp) override {
        ledger_.record_key_extraction(ltp);
        transcript_.add("q4_vehicle", ltp, {}, true);
        return extract_vehicle_key(params_, master_, ltp).ltk;
    }

    G2Element q4_rsu_key(const Bytes& id_r) override {
        transcript_.add("q4_rsu", id_r, {}, true);
        return extract_rsu_key(params_, master_, id_r).b;
    }

    GameResult adjudicate(const std::optional<SigncryptForgery>& forgery) {
        GameResult result;
        if (!forgery) {
            result.detail = "adversary produced no forgery";
            result.transcript = std::move(transcript_);
            return result;
        }
        auto rsu = extract_rsu_key(params_, master_, forgery->id_r);
        auto res = designcrypt(params_, rsu, forgery->envelope);
        if (!res.accepted()) {
            result.detail = std::string("de-signcryption rejected: ") +
                            to_string(res.status);
            result.transcript = std::move(transcript_);
            return result;
        }
        const RequestPlaintext& m = *res.plaintext;
        Bytes sign_key =
            ledger_signcrypt_key(encode_request(params_, m), forgery->id_r);
        bool key_fresh = !ledger_.key_extracted(m.ltp);
        bool message_fresh = !ledger_.signed_before(sign_key);
        if (message_fresh && key_fresh) {
            result.outcome = GameOutcome::win_forgery;
            result.detail = "verifying envelope on fresh pseudonym and message";
        } else if (message_fresh) {
            result.outcome = GameOutcome::win_key_compromise;
            result.detail = "verifying envelope but the key was extracted";
        } else {
            result.detail = "freshness violated: message was a query answer";
        }
        transcript_.add("adjudication", encode_request(params_, m), {}, false,
                        to_string(result.outcome));
        result.transcript = std::move(transcript_);
        return result;
    }

private:
    Bytes channel_key(const Bytes& ltp) {
        auto it = channel_keys_.find(ltp);
        if (it == channel_keys_.end()) {
            auto k = random_bytes(rng_, cipher_->key_len());
            it = channel_keys_.emplace(ltp, k).first;
        }
        return it->second;
    }

    Rng rng_;
    Rng adversary_rng_;
    std::shared_ptr<ToyAead> cipher_;
    std::pair<SystemParams, MasterSecret> system_;
    SystemParams& params_;
    MasterSecret& master_;
    std::vector<Bytes> vehicle_ltps_;
    std::vector<Bytes> rsu_ids_;
    std::map<Bytes, Bytes> channel_keys_;
    QueryLedger ledger_;
    Transcript transcript_;
};

class AggregateChallenger final : public AggregateGameView {
public:
    AggregateChallenger(uint64_t seed, const GameOptions& opts)
        : rng_(derive_rng(seed, "aggregate-game")),
          adversary_rng_(derive_rng(seed, "aggregate-adversary")),
          cipher_(std::make_shared<ToyAead>()),
          system_(vanetauth::setup(opts.setup, rng_)),
          params_(system_.first),
          master_(system_.second) {
        kgc_ = std::make_unique<KgcState>(
            params_, master_, random_bytes(rng_, cipher_->key_len()), cipher_);
        for (size_t i = 0; i < opts.stps; ++i) {
            Bytes rid = to_bytes("game-rid-" + std::to_string(i));
            kgc_->register_vehicle(rid, random_bytes(rng_, cipher_->key_len()));
            auto rec = kgc_->issue_pseudonym(rid, PseudonymKind::short_term,
                                             ValidityWindow{0, 0});
            population_.push_back(rec.pseudonym);
        }
        cs_ = CommonString{random_bytes(rng_, 16), 0};
    }

    const SystemParams& pub() const override { return params_; }
    const std::vector<Bytes>& population_stps() const override {
        return population_;
    }
    const CommonString& cs() const override { return cs_; }
    Rng& rng() override { return adversary_rng_; }

    ShortTermCredential q5_extract(const Bytes& stp) override {
        ledger_.record_key_extraction(stp);
        transcript_.add("q5", stp, {}, true);
        return extract_short_term_key(params_, master_, stp);
    }

    SignedBeacon q6_sign(const Bytes& message, const Bytes& stp) override {
        auto cred = extract_short_term_key(params_, master_, stp);
        auto beacon = sign_beacon(params_, cred, message, cs_, rng_, &cs_ledger_);
        ledger_.record_signing(ledger_sign_key(message, stp));
        transcript_.add("q6", ledger_sign_key(message, stp),
                        encode_beacon(params_, beacon));
        return beacon;
    }

    std::optional<Bytes> q7_trace(const Bytes& stp) override {
        transcript_.add("q7", stp, {});
        return kgc_->trace(stp, TraceStrictness::lenient);
    }

    GameResult adjudicate(const std::optional<AggregateForgery>& forgery) {
        GameResult result;
        if (!forgery) {
            result.detail = "adversary produced no forgery";
            result.transcript = std::move(transcript_);
            return result;
        }
        const AggregateSignature& agg = forgery->agg;
        if (agg.entries.empty()) {
            result.outcome = GameOutcome::disqualified;
            result.detail = "empty forgery entry list";
            result.transcript = std::move(transcript_);
            return result;
        }
        for (const auto& e : agg.entries) {
            if (e.stp.size() != params_.pseudonym_len()) {
                result.outcome = GameOutcome::disqualified;
                result.detail = "malformed pseudonym in forgery";
                result.transcript = std::move(transcript_);
                return result;
            }
        }
        if (!verify_aggregate(params_, agg, cs_)) {
            result.detail = "aggregate verification rejected";
            result.transcript = std::move(transcript_);
            return result;
        }
        bool any_unsigned = false;
        for (const auto& e : agg.entries) {
            bool message_fresh =
                !ledger_.signed_before(ledger_sign_key(e.message, e.stp));
            if (!message_fresh) continue;
            any_unsigned = true;
            if (!ledger_.key_extracted(e.stp)) {
                result.outcome = GameOutcome::win_forgery;
                result.detail = "valid aggregate with a fresh entry";
                break;
            }
        }
        if (result.outcome != GameOutcome::win_forgery) {
            if (any_unsigned) {
                result.outcome = GameOutcome::win_key_compromise;
                result.detail = "unsigned entry but its key was extracted";
            } else {
                result.detail = "freshness violated: every entry was signed";
            }
        }
        transcript_.add("adjudication", encode_aggregate(params_, agg), {},
                        false, to_string(result.outcome));
        result.transcript = std::move(transcript_);
        return result;
    }

private:
    Rng rng_;
    Rng adversary_rng_;
    std::shared_ptr<ToyAead> cipher_;
    std::pair<SystemParams, MasterSecret> system_;
    SystemParams& params_;
    MasterSecret& master_;
    std::unique_ptr<KgcState> kgc_;
    std::vector<Bytes> population_;
    CommonString cs_;
    QueryLedger ledger_;
    CsUsageLedger cs_ledger_;
    Transcript transcript_;
};

}  // namespace

GameResult run_signcrypt_forgery_game(const SigncryptAdversary& adversary,
                                      uint64_t seed, const GameOptions& opts) {
    SigncryptChallenger challenger(seed, opts);
    std::optional<SigncryptForgery> forgery;
    try {
        forgery = adversary(challenger);
    } catch (const Error& e) {
        GameResult r;
        r.outcome = GameOutcome::disqualified;
        r.detail = std::string("adversary protocol violation: ") + e.what();
        return r;
    }
    return challenger.adjudicate(forgery);
}

GameResult run_aggregate_forgery_game(const AggregateAdversary& adversary,
                                      uint64_t seed, const GameOptions& opts) {
    AggregateChallenger challenger(seed, opts);
    std::optional<AggregateForgery> forgery;
    try {
        forgery = adversary(challenger);
    } catch (const Error& e) {
        GameResult r;
        r.outcome = GameOutcome::disqualified;
        r.detail = std::string("adversary protocol violation: ") + e.what();
        return r;
    }
    return challenger.adjudicate(forgery);
}

GameResult run_forgery_game(GameId id, const AdversaryCallback& adversary,
                            uint64_t seed, const GameOptions& opts) {
    switch (id) {
        case GameId::signcrypt_auth:
            if (auto* a = std::get_if<SigncryptAdversary>(&adversary))
                return run_signcrypt_forgery_game(*a, seed, opts);
            break;
        case GameId::aggregate_auth:
            if (auto* a = std::get_if<AggregateAdversary>(&adversary))
                return run_aggregate_forgery_game(*a, seed, opts);
            break;
    }
    throw InvalidArgumentError("adversary callback does not match the game id");
}

}  // namespace vanetauth
