#pragma once

#include <functional>
#include <memory>
#include <variant>

#include "vanetauth/aggregate.hpp"
#include "vanetauth/oracle_table.hpp"
#include "vanetauth/trace.hpp"

namespace vanetauth {

// Append-only record of the adversary's key-extraction and signing queries;
// the win conditions check freshness against it.
class QueryLedger {
public:
    void record_key_extraction(const Bytes& identity);
    void record_signing(const Bytes& message_key);
    bool key_extracted(const Bytes& identity) const;
    bool signed_before(const Bytes& message_key) const;
    size_t key_extraction_count() const { return key_queries_.size(); }
    size_t signing_count() const { return sign_queries_.size(); }

private:
    std::set<Bytes> key_queries_;
    std::set<Bytes> sign_queries_;
};

struct TranscriptRecord {
    std::string kind;
    std::string input_digest;
    std::string answer_digest;
    bool trapdoor_present = false;
    std::string note;
};

// Audit log of a security game: queries, aborts, challenge, adjudication.
class Transcript {
public:
    void add(std::string kind, const Bytes& input, const Bytes& answer,
             bool trapdoor_present = false, std::string note = "");
    const std::vector<TranscriptRecord>& records() const { return records_; }
    size_t count(const std::string& kind) const;
    std::string to_jsonl() const;

private:
    std::vector<TranscriptRecord> records_;
};

std::string digest8_hex(const Bytes& data);

// ---------------------------------------------------------------------------
// Oracle programming helpers shared by the reductions and their tests. The
// trapdoor layout per entry:
//   h1 vehicle honest form:  trapdoors = [x], aux = [LTK bytes, k]
//   h1 vehicle target form:  trapdoors = [],  aux = [<empty>, k]
//   h1 stp (per j entry):    trapdoors = [alpha_j, alpha_j'], aux(target) = [0x01]
//   h2 rsu honest form:      trapdoors = [x'], aux = [B bytes]
//   h2 common string:        trapdoors = [beta], aux = [0x01] if target
// ---------------------------------------------------------------------------

struct VehicleTrapdoor {
    Scalar x;
    G1Element public_point;
    G1Element private_key;
    Bytes channel_key;
};
VehicleTrapdoor program_vehicle_honest_form(OracleTable& table,
                                            const SystemParams& params,
                                            const Bytes& ltp, Rng& rng);

struct RsuTrapdoor {
    Scalar x;
    G2Element public_point;
    G2Element private_key;
};
RsuTrapdoor program_rsu_honest_form(OracleTable& table,
                                    const SystemParams& params,
                                    const Bytes& id_r, Rng& rng);

struct StpTrapdoor {
    Scalar alpha0, alpha0p, alpha1, alpha1p;  // primed parts zero = honest
    G1Element p0, p1;
    bool target_form = false;
};
// Target form: P_j = alpha_j*P1 + alpha_j'*U1 with alpha_j' nonzero.
StpTrapdoor program_stp_target_form(OracleTable& table,
                                    const SystemParams& params,
                                    const Bytes& stp, Rng& rng);
// Honest form: P_j = alpha_j*P1; private keys are alpha_j*U1.
StpTrapdoor program_stp_honest_form(OracleTable& table,
                                    const SystemParams& params,
                                    const Bytes& stp, Rng& rng);

struct CsTrapdoor {
    Scalar beta;
    G2Element point;
    bool target = false;
};
// Target (the reduction's designated CS_J): hat_P = beta*P2.
CsTrapdoor program_cs_target(OracleTable& table, const SystemParams& params,
                             const Bytes& cs, Rng& rng);
// Every other common string: hat_P = beta*U2, which keeps the no-key signing
// cases verifiable under the one embedded unknown.
CsTrapdoor program_cs_nontarget(OracleTable& table, const SystemParams& params,
                                const Bytes& cs, Rng& rng);

// ---------------------------------------------------------------------------
// No-key simulators. Both require `params` to carry `table` as its oracle
// hook so the produced artifacts verify under the same oracle view.
// ---------------------------------------------------------------------------

// Produces an envelope that passes honest de-signcryption although the
// caller holds no private key for m.ltp: commitment = r*P1 - h*H1(ltp),
// response = r*U1, with H3 back-patched to h at the resulting point.
// Throws SimulationAbort when H3 was already fixed there. The RSU entry is
// programmed honest-form on first use.
SigncryptedEnvelope simulate_signcrypt_without_key(
    const std::shared_ptr<OracleTable>& table, const SystemParams& params,
    const RequestPlaintext& m, const Bytes& id_r, Rng& rng);

// Produces a beacon that passes honest verification without the signer key.
// Case selection follows the programmed forms: target pseudonym + target CS
// with the degenerate challenge -> algebraic construction on a free S2;
// target pseudonym + other CS -> commitment shifted by -beta^{-1}(P0+c*P1);
// honest-form pseudonym -> real signature from the alpha trapdoors.
// Throws SimulationAbort for target pseudonym + target CS with a
// non-degenerate challenge (the one-time-use collision).
SignedBeacon simulate_sign_without_key(const std::shared_ptr<OracleTable>& table,
                                       const SystemParams& params,
                                       const Bytes& message, const Bytes& stp,
                                       const Bytes& cs, Rng& rng);

// ---------------------------------------------------------------------------
// Extractors
// ---------------------------------------------------------------------------

// Two verifying responses for one commitment under different challenges.
struct ForgeryPair {
    G1Element commitment;
    G1Element response_first;
    G1Element response_second;
    Scalar challenge_first;
    Scalar challenge_second;
};

// (h - h_hat)^{-1} (Z - Z_hat); with the target key embedded this is the
// forged identity's private key. Throws ProtocolError when the challenges
// coincide (no fork).
G1Element extract_cdh_from_signcryption_forgeries(const SystemParams& params,
                                                  const ForgeryPair& pair);

// Aggregate-forgery extractor. Entry 1 must be in target form and every
// later entry honest-form; `cs` must be the designated target common string.
// Computes
//   (a'_{1,0}+c_1 a'_{1,1})^{-1} (S1 - sum a_{i,0} U1 - sum c_i a_{i,1} U1
//                                 - beta S2 - (a_{1,0}+c_1 a_{1,1}) U1)
// verbatim from the table trapdoors. Throws ProtocolError on a degenerate
// denominator or wrong entry forms.
G1Element extract_cdh_from_aggregate_forgery(
    const std::shared_ptr<OracleTable>& table, const SystemParams& params,
    const AggregateSignature& agg, const Bytes& cs);

// ---------------------------------------------------------------------------
// Forgery games: the challenger runs the real protocol algorithms and
// adjudicates the win conditions against the query ledger.
// ---------------------------------------------------------------------------

enum class GameId : uint8_t { signcrypt_auth, aggregate_auth };
enum class GameOutcome : uint8_t {
    lose,
    win_forgery,
    win_key_compromise,  // verifies and is unsigned, but the key was queried
    disqualified,
};
const char* to_string(GameOutcome o);

struct GameResult {
    GameOutcome outcome = GameOutcome::lose;
    std::string detail;
    Transcript transcript;
};

class SigncryptGameView {
public:
    virtual ~SigncryptGameView() = default;
    virtual const SystemParams& pub() const = 0;
    virtual const std::vector<Bytes>& vehicle_ltps() const = 0;
    virtual const std::vector<Bytes>& rsu_ids() const = 0;
    virtual SigncryptedEnvelope q1_signcrypt(const RequestPlaintext& m,
                                             const Bytes& id_r) = 0;
    virtual DesigncryptResult q2_designcrypt(const SigncryptedEnvelope& env,
                                             const Bytes& id_r) = 0;
    virtual Bytes q3_wrap(const Bytes& ltp, const ReplyPayload& payload) = 0;
    virtual std::optional<ReplyPayload> q3_unwrap(const Bytes& ltp,
                                                  const Bytes& ciphertext) = 0;
    virtual G1Element q4_vehicle_key(const Bytes& ltp) = 0;
    virtual G2Element q4_rsu_key(const Bytes& id_r) = 0;
    virtual Rng& rng() = 0;
};

struct SigncryptForgery {
    SigncryptedEnvelope envelope;
    Bytes id_r;
};
using SigncryptAdversary =
    std::function<std::optional<SigncryptForgery>(SigncryptGameView&)>;

class AggregateGameView {
public:
    virtual ~AggregateGameView() = default;
    virtual const SystemParams& pub() const = 0;
    virtual const std::vector<Bytes>& population_stps() const = 0;
    virtual const CommonString& cs() const = 0;
    virtual ShortTermCredential q5_extract(const Bytes& stp) = 0;
    virtual SignedBeacon q6_sign(const Bytes& message, const Bytes& stp) = 0;
    virtual std::optional<Bytes> q7_trace(const Bytes& stp) = 0;
    virtual Rng& rng() = 0;
};

struct AggregateForgery {
    AggregateSignature agg;
};
using AggregateAdversary =
    std::function<std::optional<AggregateForgery>(AggregateGameView&)>;

struct GameOptions {
    SetupOptions setup;
    size_t vehicles = 4;
    size_t rsus = 2;
    size_t stps = 6;
};

GameResult run_signcrypt_forgery_game(const SigncryptAdversary& adversary,
                                      uint64_t seed,
                                      const GameOptions& opts = {});
GameResult run_aggregate_forgery_game(const AggregateAdversary& adversary,
                                      uint64_t seed,
                                      const GameOptions& opts = {});

using AdversaryCallback = std::variant<SigncryptAdversary, AggregateAdversary>;
GameResult run_forgery_game(GameId id, const AdversaryCallback& adversary,
                            uint64_t seed, const GameOptions& opts = {});

// ---------------------------------------------------------------------------
// Reduction drivers
// ---------------------------------------------------------------------------

// Confidentiality-game challenger: honest-form vehicle entries, one embedded
// target RSU slot, table-driven H3/H5, the two de-signcryption procedures
// with their oracle-membership checks, and the final random-guess step
// (recorded in the transcript, never asserted).
class Theorem1Reduction {
public:
    struct Instance {
        G2Element a_p2;
        G2Element b_p2;
        G1Element c_p1;
    };

    Theorem1Reduction(const BilinearSuite& base, const Instance& instance,
                      size_t target_h2_index, uint64_t seed,
                      uint32_t l1_bits = 128);

    const SystemParams& pub() const { return params_; }
    const std::shared_ptr<OracleTable>& table() const { return table_; }
    Transcript& transcript() { return transcript_; }
    const Bytes& target_rsu() const { return target_rsu_id_; }

    G1Element h1(const Bytes& ltp);
    G2Element h2(const Bytes& id_r);
    G1Element q4_vehicle_key(const Bytes& ltp);   // never aborts
    G2Element q4_rsu_key(const Bytes& id_r);      // aborts on the target
    SigncryptedEnvelope q1(const RequestPlaintext& m, const Bytes& id_r);
    std::optional<std::pair<RequestPlaintext, InnerSignature>> q2(
        const SigncryptedEnvelope& env, const Bytes& id_r);
    Bytes q3_wrap(const Bytes& ltp, const Bytes& plaintext);
    std::optional<Bytes> q3_unwrap(const Bytes& ltp, const Bytes& ciphertext);

    // Response stage: challenge envelope (commitment = cP1, random mask) and
    // the recorded BDH guess omega*^{1/x*}.
    SigncryptedEnvelope challenge(const Bytes& ltp_star, const Bytes& id_r_star);
    std::optional<GtElement> final_guess(const Bytes& ltp_star);

private:
    std::optional<std::pair<RequestPlaintext, InnerSignature>> q2_case1(
        const SigncryptedEnvelope& env, const Bytes& id_r);
    std::optional<std::pair<RequestPlaintext, InnerSignature>> q2_case2(
        const SigncryptedEnvelope& env);

    BilinearSuite base_;
    Instance instance_;
    SystemParams params_;
    std::shared_ptr<OracleTable> table_;
    Transcript transcript_;
    Rng rng_;
    size_t target_h2_index_;  // 1-based
    size_t h2_new_queries_ = 0;
    Bytes target_rsu_id_;
    std::shared_ptr<const AeadCipher> cipher_;
};

// Unforgeability-game challenger for the signcryption protocol: one embedded
// target pseudonym, honest-form RSUs, no-key signing for the target.
class Theorem2Reduction {
public:
    struct Instance {
        G2Element a_p2;
        G2Element b_p2;
    };

    Theorem2Reduction(const BilinearSuite& base, const Instance& instance,
                      size_t target_h1_index, uint64_t seed,
                      uint32_t l1_bits = 128);

    const SystemParams& pub() const { return params_; }
    const std::shared_ptr<OracleTable>& table() const { return table_; }
    Transcript& transcript() { return transcript_; }
    std::optional<Bytes> target_ltp() const;

    G1Element h1(const Bytes& ltp);
    G2Element h2(const Bytes& id_r);
    G1Element q4_vehicle_key(const Bytes& ltp);  // aborts on the target
    G2Element q4_rsu_key(const Bytes& id_r);
    SigncryptedEnvelope q1(const RequestPlaintext& m, const Bytes& id_r);
    std::optional<std::pair<RequestPlaintext, InnerSignature>> q2(
        const SigncryptedEnvelope& env, const Bytes& id_r);

private:
    BilinearSuite base_;
    Instance instance_;
    SystemParams params_;
    std::shared_ptr<OracleTable> table_;
    Transcript transcript_;
    Rng rng_;
    size_t target_h1_index_;  // 1-based
    size_t h1_new_queries_ = 0;
    std::optional<Bytes> target_ltp_;
};

// Aggregate-protocol challenger: target pseudonym/common-string embedding,
// the four signing cases, tracing through a KGC it owns.
class Theorem4Reduction {
public:
    Theorem4Reduction(const BilinearSuite& base, const G2Element& u2_instance,
                      size_t target_h1_index, size_t target_h2_index,
                      size_t degenerate_h3_index, uint64_t seed,
                      uint32_t l1_bits = 128);

    const SystemParams& pub() const { return params_; }
    const std::shared_ptr<OracleTable>& table() const { return table_; }
    Transcript& transcript() { return transcript_; }
    std::optional<Bytes> target_stp() const { return target_stp_; }
    std::optional<Bytes> target_cs() const { return target_cs_; }

    G1Element h1(const Bytes& stp, uint8_t j);
    G2Element h2(const Bytes& cs);
    Scalar h3(const Bytes& message, const Bytes& stp, const Bytes& cs);
    std::pair<G1Element, G1Element> q5(const Bytes& stp);  // (D0, D1)
    SignedBeacon q6(const Bytes& cs, const Bytes& message, const Bytes& stp);
    std::optional<Bytes> q7_trace(const Bytes& pseudonym);

    // Validates the forgery shape (target entry first-equivalent, fresh) and
    // runs the extractor.
    G1Element respond(const AggregateSignature& agg, const Bytes& cs);

private:
    void ensure_h1(const Bytes& stp);
    void ensure_h2(const Bytes& cs);

    BilinearSuite base_;
    SystemParams params_;
    std::shared_ptr<OracleTable> table_;
    Transcript transcript_;
    Rng rng_;
    size_t target_h1_index_;
    size_t target_h2_index_;
    size_t degenerate_h3_index_;
    size_t h1_new_ = 0, h2_new_ = 0, h3_target_pair_ = 0;
    std::optional<Bytes> target_stp_;
    std::optional<Bytes> target_cs_;
    std::unique_ptr<KgcState> kgc_;
    QueryLedger ledger_;
};

// ---------------------------------------------------------------------------
// Cooperative drivers: a forger granted the real key stands in for the
// existential adversary so the extractor algebra is checkable.
// ---------------------------------------------------------------------------

struct SigncryptForkResult {
    SystemParams params;      // oracle view of the second run
    ForgeryPair pair;
    G1Element target_public;  // H1(ltp*) = psi(aP2)
    G1Element expected_key;   // ab*P1, known to the test harness only
};
// Same-tape replay with one swapped H3 answer, per the forking argument.
SigncryptForkResult cooperative_signcrypt_fork(uint64_t seed,
                                               const ToyParams& toy = {});

struct AggregateExtractionResult {
    SystemParams params;
    G1Element extracted;
    G1Element expected;  // s*U1
};
AggregateExtractionResult cooperative_aggregate_extraction(
    uint64_t seed, size_t extra_entries, const ToyParams& toy = {});

// ---------------------------------------------------------------------------
// Named property suites behind the CLI `game` subcommand.
// ---------------------------------------------------------------------------

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

std::vector<PropertyResult> run_signcrypt_game_suite(uint64_t seed, int trials);
std::vector<PropertyResult> run_aggregate_game_suite(uint64_t seed, int trials);

}  // namespace vanetauth
