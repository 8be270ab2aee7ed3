#pragma once

#include <deque>
#include <map>
#include <string>

#include "vanetauth/games.hpp"
#include "vanetauth/trace.hpp"

namespace vanetauth {

struct AdversaryPolicy {
    double drop_rate = 0.0;
    double replay_rate = 0.0;
    double tamper_rate = 0.0;
    uint32_t forgeries_per_epoch = 0;

    bool active() const {
        return drop_rate > 0 || replay_rate > 0 || tamper_rate > 0 ||
               forgeries_per_epoch > 0;
    }
    void validate() const;
};

struct ScenarioConfig {
    uint32_t vehicles = 2;
    uint32_t rsus = 1;
    uint32_t epochs = 1;
    uint32_t beacon_rate = 3;     // beacons per vehicle per epoch
    uint32_t stp_batch = 5;       // short-term pseudonyms per request
    uint32_t stp_validity = 4;    // epochs a batch stays valid
    uint32_t freshness_window = 0;  // accepted envelope age in epochs
    double trace_sample = 0.25;   // fraction of stored beacons traced
    uint64_t seed = 1;
    BackendId backend = BackendId::toy;
    uint64_t toy_q = 1009;
    AdversaryPolicy adversary;
    std::string registration_path;  // optional bootstrap file

    void validate() const;
};

// Flat key=value scenario file; '#' starts a comment. Unknown keys are
// rejected with their line number.
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

enum class MessageKind : uint8_t {
    envelope,
    reply,
    beacon,
    aggregate,
    trace_request,
};
const char* to_string(MessageKind k);

// Engine-internal provenance bookkeeping (never on the wire).
enum MessageFlags : uint8_t {
    flag_tampered = 1,
    flag_replayed = 2,
    flag_forged = 4,
};

struct NetMessage {
    std::string from;
    std::string to;
    uint64_t epoch = 0;
    MessageKind kind = MessageKind::envelope;
    Bytes body;
    uint8_t flags = 0;
    uint64_t seq = 0;

    bool adversary_originated() const {
        return flags & (flag_tampered | flag_forged);
    }
};

struct MutationRecord {
    std::string action;  // drop / tamper / replay / forge
    MessageKind kind;
    std::string digest_before;
    std::string digest_after;
};

// Applies drop/tamper/replay independently per message; mutations are
// returned in order with an audit record each. Replayed copies are tagged
// for delivery one epoch later.
std::vector<NetMessage> inject_adversary(const AdversaryPolicy& policy,
                                         const std::vector<NetMessage>& stream,
                                         Rng& rng,
                                         std::vector<MutationRecord>* audit);

struct ClassStats {
    uint64_t delivered = 0;
    uint64_t accepted = 0;
    uint64_t rejected = 0;
    uint64_t adversary_accepted = 0;

    friend bool operator==(const ClassStats&, const ClassStats&) = default;
};

struct OpTiming {
    uint64_t count = 0;
    uint64_t total_ns = 0;
};

struct RunMetrics {
    std::map<std::string, ClassStats> per_class;
    uint64_t pseudonyms_issued = 0;
    uint64_t trace_successes = 0;
    uint64_t trace_sweep_total = 0;
    uint64_t trace_sweep_ok = 0;
    uint64_t adversary_accepted_total = 0;
    std::vector<std::string> violations;
    std::map<std::string, OpTiming> timings;  // wall clock; not in the CSV

    std::string to_csv() const;  // deterministic columns only
};

struct RunResult {
    RunMetrics metrics;
    std::string event_log;  // one JSON object per line
};

RunResult run_scenario(const ScenarioConfig& config);

// Exposed for unit tests: a constructed simulation that can be stepped and
// inspected. run_scenario wraps it.
class Simulation {
public:
    explicit Simulation(const ScenarioConfig& config);
    ~Simulation();

    RunResult run();

    const SystemParams& params() const;
    KgcState& kgc();
    // routes one message to its addressee, returning the outbound messages
    // produced by the transition (state updates included)
    std::vector<NetMessage> handle_message(const NetMessage& msg);
    CommonString common_string(uint64_t epoch) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vanetauth
