#include "vanetauth/engine.hpp"

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <sstream>

#include "vanetauth/errors.hpp"
#include "vanetauth/xof.hpp"

namespace vanetauth {

using nlohmann::json;

void AdversaryPolicy::validate() const {
    for (double rate : {drop_rate, replay_rate, tamper_rate})
        if (rate < 0.0 || rate > 1.0)
            throw ConfigError("adversary rates must lie in [0,1]");
}

void ScenarioConfig::validate() const {
    if (vehicles == 0) throw ConfigError("vehicles must be positive");
    if (rsus == 0) throw ConfigError("rsus must be positive");
    if (epochs == 0) throw ConfigError("epochs must be positive");
    if (epochs > 250) throw ConfigError("epochs beyond the pseudonym layout");
    if (beacon_rate == 0) throw ConfigError("beacon_rate must be positive");
    if (stp_batch == 0) throw ConfigError("stp_batch must be positive");
    if (trace_sample < 0.0 || trace_sample > 1.0)
        throw ConfigError("trace_sample must lie in [0,1]");
    adversary.validate();
}

const char* to_string(MessageKind k) {
    switch (k) {
        case MessageKind::envelope: return "envelope";
        case MessageKind::reply: return "reply";
        case MessageKind::beacon: return "beacon";
        case MessageKind::aggregate: return "aggregate";
        case MessageKind::trace_request: return "trace_request";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Scenario file parsing
// ---------------------------------------------------------------------------

namespace {

uint64_t parse_u64(const std::string& v, int line) {
    try {
        size_t pos = 0;
        uint64_t out = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("expected an unsigned integer, got '" + v + "'",
                          line);
    }
}

double parse_rate(const std::string& v, int line) {
    try {
        size_t pos = 0;
        double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("expected a number, got '" + v + "'", line);
    }
}

}  // namespace

ScenarioConfig parse_scenario_text(const std::string& text) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        size_t begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        size_t end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value", line_no);
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);

        if (key == "vehicles")
            config.vehicles = static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "rsus")
            config.rsus = static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "epochs")
            config.epochs = static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "beacon_rate")
            config.beacon_rate =
                static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "stp_batch")
            config.stp_batch = static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "stp_validity")
            config.stp_validity =
                static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "freshness_window")
            config.freshness_window =
                static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "trace_sample")
            config.trace_sample = parse_rate(value, line_no);
        else if (key == "seed")
            config.seed = parse_u64(value, line_no);
        else if (key == "toy_q")
            config.toy_q = parse_u64(value, line_no);
        else if (key == "backend") {
            if (value == "toy")
                config.backend = BackendId::toy;
            else if (value == "external")
                config.backend = BackendId::external;
            else
                throw ConfigError("unknown backend '" + value + "'", line_no);
        } else if (key == "adversary.drop")
            config.adversary.drop_rate = parse_rate(value, line_no);
        else if (key == "adversary.replay")
            config.adversary.replay_rate = parse_rate(value, line_no);
        else if (key == "adversary.tamper")
            config.adversary.tamper_rate = parse_rate(value, line_no);
        else if (key == "adversary.forgeries_per_epoch")
            config.adversary.forgeries_per_epoch =
                static_cast<uint32_t>(parse_u64(value, line_no));
        else if (key == "registration")
            config.registration_path = value;
        else
            throw ConfigError("unknown key '" + key + "'", line_no);
    }
    config.validate();
    return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

// ---------------------------------------------------------------------------
// Adversary injection
// ---------------------------------------------------------------------------

namespace {

double unit_draw(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string body_digest(const NetMessage& m) { return digest8_hex(m.body); }

}  // namespace

std::vector<NetMessage> inject_adversary(const AdversaryPolicy& policy,
                                         const std::vector<NetMessage>& stream,
                                         Rng& rng,
                                         std::vector<MutationRecord>* audit) {
    std::vector<NetMessage> out;
    for (const NetMessage& msg : stream) {
        if (policy.drop_rate > 0 && unit_draw(rng) < policy.drop_rate) {
            if (audit)
                audit->push_back(
                    {"drop", msg.kind, body_digest(msg), ""});
            continue;
        }
        NetMessage delivered = msg;
        if (policy.tamper_rate > 0 && unit_draw(rng) < policy.tamper_rate &&
            !delivered.body.empty()) {
            std::string before = body_digest(delivered);
            uint64_t bit = uniform_below(
                rng, static_cast<uint64_t>(delivered.body.size()) * 8);
            delivered.body[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
            delivered.flags |= flag_tampered;
            if (audit)
                audit->push_back(
                    {"tamper", msg.kind, before, body_digest(delivered)});
        }
        out.push_back(delivered);
        if (policy.replay_rate > 0 && unit_draw(rng) < policy.replay_rate) {
            NetMessage copy = delivered;
            copy.flags |= flag_replayed;
            copy.epoch += 1;  // arrives one epoch late
            out.push_back(copy);
            if (audit)
                audit->push_back(
                    {"replay", msg.kind, body_digest(delivered), ""});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics
// ---------------------------------------------------------------------------

std::string RunMetrics::to_csv() const {
    std::string out = "class,delivered,accepted,rejected,adversary_accepted\n";
    ClassStats total;
    for (const char* name :
         {"envelope", "reply", "beacon", "aggregate", "trace_request"}) {
        ClassStats s;
        auto it = per_class.find(name);
        if (it != per_class.end()) s = it->second;
        out += std::string(name) + "," + std::to_string(s.delivered) + "," +
               std::to_string(s.accepted) + "," + std::to_string(s.rejected) +
               "," + std::to_string(s.adversary_accepted) + "\n";
        total.delivered += s.delivered;
        total.accepted += s.accepted;
        total.rejected += s.rejected;
        total.adversary_accepted += s.adversary_accepted;
    }
    out += "total," + std::to_string(total.delivered) + "," +
           std::to_string(total.accepted) + "," +
           std::to_string(total.rejected) + "," +
           std::to_string(total.adversary_accepted) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace {

constexpr int kPhaseRequest = 0;
constexpr int kPhaseReply = 1;
constexpr int kPhaseBeacon = 2;
constexpr int kPhaseAggregate = 3;
constexpr int kPhaseTrace = 4;

int phase_of(MessageKind kind) {
    switch (kind) {
        case MessageKind::envelope: return kPhaseRequest;
        case MessageKind::reply: return kPhaseReply;
        case MessageKind::beacon: return kPhaseBeacon;
        case MessageKind::aggregate: return kPhaseAggregate;
        case MessageKind::trace_request: return kPhaseTrace;
    }
    return kPhaseTrace;
}

struct VehicleState {
    std::string id;
    Bytes rid;
    VehicleChannelKey channel;
    LongTermCredential cred;
    std::vector<std::pair<ShortTermCredential, ValidityWindow>> stock;
    CsUsageLedger cs_ledger;
    std::set<Bytes> seen;
    uint64_t nonce_counter = 0;
};

struct RsuState {
    std::string id;
    RsuCredential cred;
    std::set<Bytes> seen;
    std::vector<SignedBeacon> stored;  // accepted this epoch
    uint64_t honest_accepted_this_epoch = 0;
};

class Stopwatch {
public:
    Stopwatch(RunMetrics& metrics, const char* op)
        : metrics_(metrics), op_(op),
          start_(std::chrono::steady_clock::now()) {}
    ~Stopwatch() {
        auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now() - start_)
                      .count();
        auto& t = metrics_.timings[op_];
        ++t.count;
        t.total_ns += static_cast<uint64_t>(ns);
    }

private:
    RunMetrics& metrics_;
    const char* op_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace

struct Simulation::Impl {
    ScenarioConfig config;
    Rng engine_rng;
    Rng adversary_rng;
    Rng trace_rng;
    std::pair<SystemParams, MasterSecret> system;
    std::shared_ptr<ToyAead> cipher;
    std::unique_ptr<KgcState> kgc;
    std::vector<VehicleState> vehicles;
    std::vector<RsuState> rsus;
    std::map<std::pair<uint64_t, int>, std::deque<NetMessage>> queue;
    uint64_t seq_counter = 0;
    uint64_t current_epoch = 0;
    RunMetrics metrics;
    std::string event_log;
    // per-provenance accounting backing the safety/liveness checks
    std::map<std::string, ClassStats> honest_stats;

    explicit Impl(const ScenarioConfig& cfg)
        : config(cfg),
          engine_rng(derive_rng(cfg.seed, "engine")),
          adversary_rng(derive_rng(cfg.seed, "adversary")),
          trace_rng(derive_rng(cfg.seed, "trace-sample")),
          system(setup(
              SetupOptions{.backend = cfg.backend,
                           .toy = ToyParams{cfg.toy_q, cfg.seed},
                           .l1_bits = 128,
                           .l3_bits = 128,
                           .id_kgc = "kgc"},
              engine_rng)),
          cipher(std::make_shared<ToyAead>()) {
        config.validate();
        kgc = std::make_unique<KgcState>(system.first, system.second,
                                         random_bytes(engine_rng, 16), cipher);
        bootstrap();
    }

    const SystemParams& params() const { return system.first; }
    const MasterSecret& master() const { return system.second; }

    void bootstrap() {
        std::vector<std::pair<Bytes, Bytes>> registration;
        if (!config.registration_path.empty()) {
            std::ifstream in(config.registration_path);
            if (!in)
                throw ConfigError("cannot open registration file: " +
                                  config.registration_path);
            std::stringstream buf;
            buf << in.rdbuf();
            registration = parse_registration_lines(buf.str());
            if (registration.size() < config.vehicles)
                throw ConfigError("registration file has fewer entries than "
                                  "configured vehicles");
        } else {
            for (uint32_t i = 0; i < config.vehicles; ++i)
                registration.emplace_back(
                    to_bytes("vehicle-" + std::to_string(i)),
                    random_bytes(engine_rng, cipher->key_len()));
        }
        uint32_t last_epoch = config.epochs > 0 ? config.epochs - 1 : 0;
        for (uint32_t i = 0; i < config.vehicles; ++i) {
            const auto& [rid, k] = registration[i];
            kgc->register_vehicle(rid, k);
            auto rec = kgc->issue_pseudonym(rid, PseudonymKind::long_term,
                                            ValidityWindow{0, last_epoch});
            VehicleState v;
            v.id = "v" + std::to_string(i);
            v.rid = rid;
            v.channel = VehicleChannelKey{rec.pseudonym, k};
            v.cred = extract_vehicle_key(params(), master(), rec.pseudonym);
            vehicles.push_back(std::move(v));
        }
        for (uint32_t i = 0; i < config.rsus; ++i) {
            RsuState r;
            r.id = "r" + std::to_string(i);
            r.cred = extract_rsu_key(params(), master(),
                                     to_bytes("rsu-" + std::to_string(i)));
            rsus.push_back(std::move(r));
        }
    }

    CommonString common_string(uint64_t epoch) const {
        Bytes input = to_bytes("cs");
        append_be64(input, config.seed);
        append_be64(input, epoch);
        return CommonString{shake128(input, 16), epoch};
    }

    void log(json record) {
        event_log += record.dump();
        event_log += '\n';
    }

    void log_adversary(const std::vector<MutationRecord>& audit) {
        for (const auto& rec : audit) {
            json j;
            j["event"] = "adversary";
            j["action"] = rec.action;
            j["kind"] = to_string(rec.kind);
            j["before"] = rec.digest_before;
            if (!rec.digest_after.empty()) j["after"] = rec.digest_after;
            log(j);
        }
    }

    void send(NetMessage msg, bool subject_to_adversary) {
        msg.seq = seq_counter++;
        json j;
        j["event"] = "send";
        j["seq"] = msg.seq;
        j["kind"] = to_string(msg.kind);
        j["from"] = msg.from;
        j["to"] = msg.to;
        j["epoch"] = msg.epoch;
        j["flags"] = msg.flags;
        j["digest"] = body_digest(msg);
        log(j);

        std::vector<NetMessage> batch{std::move(msg)};
        if (subject_to_adversary && config.adversary.active()) {
            std::vector<MutationRecord> audit;
            batch = inject_adversary(config.adversary, batch, adversary_rng,
                                     &audit);
            log_adversary(audit);
        }
        for (NetMessage& m : batch)
            queue[{m.epoch, phase_of(m.kind)}].push_back(std::move(m));
    }

    VehicleState* vehicle_by_id(const std::string& id) {
        for (auto& v : vehicles)
            if (v.id == id) return &v;
        return nullptr;
    }

    RsuState* rsu_by_id(const std::string& id) {
        for (auto& r : rsus)
            if (r.id == id) return &r;
        return nullptr;
    }

    void count_delivery(const NetMessage& msg, bool accepted,
                        const std::string& reason) {
        auto& s = metrics.per_class[to_string(msg.kind)];
        ++s.delivered;
        if (accepted) {
            ++s.accepted;
            if (msg.adversary_originated()) {
                ++s.adversary_accepted;
                ++metrics.adversary_accepted_total;
            }
        } else {
            ++s.rejected;
        }
        if (msg.flags == 0) {
            auto& h = honest_stats[to_string(msg.kind)];
            ++h.delivered;
            if (accepted) ++h.accepted;
        }
        json j;
        j["event"] = "deliver";
        j["seq"] = msg.seq;
        j["kind"] = to_string(msg.kind);
        j["to"] = msg.to;
        j["epoch"] = current_epoch;
        j["outcome"] = accepted ? "accepted" : "rejected";
        if (!reason.empty()) j["reason"] = reason;
        log(j);
    }

    // --- actor transitions -------------------------------------------------

    std::vector<NetMessage> rsu_on_envelope(RsuState& rsu,
                                            const NetMessage& msg) {
        if (!rsu.seen.insert(msg.body).second) {
            count_delivery(msg, false, "duplicate");
            return {};
        }
        SigncryptedEnvelope env;
        try {
            env = decode_envelope(params(), msg.body);
        } catch (const DeserializeError&) {
            count_delivery(msg, false, "decode_failed");
            return {};
        }
        DesigncryptResult res;
        {
            Stopwatch t(metrics, "designcrypt");
            res = designcrypt(params(), rsu.cred, env);
        }
        if (!res.accepted()) {
            count_delivery(msg, false, to_string(res.status));
            return {};
        }
        const RequestPlaintext& m = *res.plaintext;
        if (m.tau > current_epoch ||
            current_epoch - m.tau > config.freshness_window) {
            count_delivery(msg, false, "stale_timestamp");
            return {};
        }
        auto key = kgc->channel_key_for_pseudonym(m.ltp);
        if (!key) {
            count_delivery(msg, false, "unknown_pseudonym");
            return {};
        }
        auto rid = kgc->trace(m.ltp, TraceStrictness::lenient);

        uint32_t last = static_cast<uint32_t>(
            std::min<uint64_t>(current_epoch + config.stp_validity, 250));
        ValidityWindow validity{static_cast<uint32_t>(current_epoch), last};
        ReplyPayload payload;
        payload.validity = validity;
        for (uint32_t i = 0; i < config.stp_batch; ++i) {
            auto rec =
                kgc->issue_pseudonym(*rid, PseudonymKind::short_term, validity);
            auto cred = extract_short_term_key(params(), master(),
                                               rec.pseudonym);
            payload.credentials.push_back(
                ReplyCredential{rec.pseudonym, cred.d0, cred.d1});
        }
        Bytes ct = wrap_reply(params(), *cipher,
                              VehicleChannelKey{m.ltp, *key}, payload);
        count_delivery(msg, true, "");

        NetMessage reply;
        reply.from = rsu.id;
        reply.to = msg.from;
        reply.epoch = current_epoch;
        reply.kind = MessageKind::reply;
        reply.body = ct;
        return {std::move(reply)};
    }

    std::vector<NetMessage> vehicle_on_reply(VehicleState& v,
                                             const NetMessage& msg) {
        if (!v.seen.insert(msg.body).second) {
            count_delivery(msg, false, "duplicate");
            return {};
        }
        auto payload = unwrap_reply(params(), *cipher, v.channel, msg.body);
        if (!payload) {
            count_delivery(msg, false, "authentication_failed");
            return {};
        }
        for (const ReplyCredential& c : payload->credentials) {
            ShortTermCredential cred;
            cred.stp = c.stp;
            cred.p0 = params().suite.hash_to_g1(stp_point_label(c.stp, 0));
            cred.p1 = params().suite.hash_to_g1(stp_point_label(c.stp, 1));
            cred.d0 = c.d0;
            cred.d1 = c.d1;
            v.stock.emplace_back(std::move(cred), payload->validity);
        }
        count_delivery(msg, true, "");
        return {};
    }

    static Bytes stp_point_label(const Bytes& stp, uint8_t j) {
        Bytes label = stp;
        label.push_back(j);
        return label;
    }

    std::vector<NetMessage> rsu_on_beacon(RsuState& rsu,
                                          const NetMessage& msg) {
        if (!rsu.seen.insert(msg.body).second) {
            count_delivery(msg, false, "duplicate");
            return {};
        }
        SignedBeacon beacon;
        try {
            beacon = decode_beacon(params(), msg.body);
        } catch (const DeserializeError&) {
            count_delivery(msg, false, "decode_failed");
            return {};
        }
        bool ok;
        {
            Stopwatch t(metrics, "verify_single");
            ok = verify_single(params(), beacon,
                               common_string(current_epoch));
        }
        if (!ok) {
            count_delivery(msg, false, "verification_failed");
            return {};
        }
        count_delivery(msg, true, "");
        if (msg.flags == 0) ++rsu.honest_accepted_this_epoch;
        rsu.stored.push_back(std::move(beacon));
        return {};
    }

    std::vector<NetMessage> kgc_on_aggregate(const NetMessage& msg) {
        AggregateSignature agg;
        try {
            agg = decode_aggregate(params(), msg.body);
        } catch (const DeserializeError&) {
            count_delivery(msg, false, "decode_failed");
            return {};
        }
        bool ok;
        {
            Stopwatch t(metrics, "verify_aggregate");
            ok = verify_aggregate(params(), agg, common_string(msg.epoch));
        }
        count_delivery(msg, ok, ok ? "" : "verification_failed");
        return {};
    }

    std::vector<NetMessage> kgc_on_trace_request(const NetMessage& msg) {
        auto rid = kgc->trace(msg.body, TraceStrictness::strict,
                              static_cast<uint32_t>(current_epoch));
        if (rid) {
            ++metrics.trace_successes;
            count_delivery(msg, true, "");
        } else {
            count_delivery(msg, false, "unknown_pseudonym");
        }
        return {};
    }

    std::vector<NetMessage> dispatch(const NetMessage& msg) {
        if (msg.to == "kgc") {
            if (msg.kind == MessageKind::aggregate)
                return kgc_on_aggregate(msg);
            if (msg.kind == MessageKind::trace_request)
                return kgc_on_trace_request(msg);
        } else if (!msg.to.empty() && msg.to[0] == 'r') {
            if (RsuState* rsu = rsu_by_id(msg.to)) {
                if (msg.kind == MessageKind::envelope)
                    return rsu_on_envelope(*rsu, msg);
                if (msg.kind == MessageKind::beacon)
                    return rsu_on_beacon(*rsu, msg);
            }
        } else if (!msg.to.empty() && msg.to[0] == 'v') {
            if (VehicleState* v = vehicle_by_id(msg.to)) {
                if (msg.kind == MessageKind::reply)
                    return vehicle_on_reply(*v, msg);
            }
        }
        count_delivery(msg, false, "no_such_actor");
        return {};
    }

    // --- epoch driver -------------------------------------------------------

    size_t usable_stock(const VehicleState& v, uint64_t epoch,
                        const Bytes& cs) const {
        size_t n = 0;
        for (const auto& [cred, validity] : v.stock)
            if (validity.covers(static_cast<uint32_t>(epoch)) &&
                !v.cs_ledger.seen(cred.stp, cs))
                ++n;
        return n;
    }

    void phase_requests(uint64_t epoch) {
        Bytes cs = common_string(epoch).cs;
        for (size_t i = 0; i < vehicles.size(); ++i) {
            VehicleState& v = vehicles[i];
            size_t usable = usable_stock(v, epoch, cs);
            size_t requests = 0;
            while (usable + requests * config.stp_batch < config.beacon_rate)
                ++requests;
            const std::string rsu_id = "r" + std::to_string(i % rsus.size());
            for (size_t k = 0; k < requests; ++k) {
                RequestPlaintext m{v.nonce_counter++, v.cred.ltp, epoch};
                SigncryptedEnvelope env;
                {
                    Stopwatch t(metrics, "signcrypt");
                    env = signcrypt(params(), v.cred, m,
                                    rsu_by_id(rsu_id)->cred.id_r, engine_rng);
                }
                NetMessage msg;
                msg.from = v.id;
                msg.to = rsu_id;
                msg.epoch = epoch;
                msg.kind = MessageKind::envelope;
                msg.body = encode_envelope(params(), env);
                send(std::move(msg), true);
            }
        }
        // targeted forgery attempts: random envelopes at a real RSU
        for (uint32_t k = 0; k < config.adversary.forgeries_per_epoch; ++k) {
            NetMessage msg;
            msg.from = "adversary";
            msg.to = "r" + std::to_string(uniform_below(
                               adversary_rng, rsus.size()));
            msg.epoch = epoch;
            msg.kind = MessageKind::envelope;
            msg.flags = flag_forged;
            Bytes body = params().suite.serialize(params().suite.g1_mul(
                params().suite.random_scalar(adversary_rng),
                params().suite.p1()));
            append(body, random_bytes(adversary_rng, params().masked_len()));
            msg.body = std::move(body);
            send(std::move(msg), false);
        }
    }

    void phase_beacons(uint64_t epoch) {
        CommonString cs = common_string(epoch);
        for (size_t i = 0; i < vehicles.size(); ++i) {
            VehicleState& v = vehicles[i];
            const std::string rsu_id = "r" + std::to_string(i % rsus.size());
            uint32_t sent = 0;
            for (auto& [cred, validity] : v.stock) {
                if (sent >= config.beacon_rate) break;
                if (!validity.covers(static_cast<uint32_t>(epoch))) continue;
                if (v.cs_ledger.seen(cred.stp, cs.cs)) continue;
                Bytes message = to_bytes("pos:");
                append(message, random_bytes(engine_rng, 8));
                SignedBeacon beacon;
                {
                    Stopwatch t(metrics, "sign_beacon");
                    beacon = sign_beacon(params(), cred, message, cs,
                                         engine_rng, &v.cs_ledger);
                }
                NetMessage msg;
                msg.from = v.id;
                msg.to = rsu_id;
                msg.epoch = epoch;
                msg.kind = MessageKind::beacon;
                msg.body = encode_beacon(params(), beacon);
                send(std::move(msg), true);
                ++sent;
            }
        }
        // forged beacons reusing an observed pseudonym
        const auto& issued = kgc->issued();
        for (uint32_t k = 0; k < config.adversary.forgeries_per_epoch; ++k) {
            SignedBeacon fake;
            if (!issued.empty()) {
                fake.stp = issued[uniform_below(adversary_rng, issued.size())]
                               .pseudonym;
            } else {
                fake.stp = random_bytes(adversary_rng,
                                        params().pseudonym_len());
            }
            fake.message = random_bytes(adversary_rng, 12);
            fake.s1 = params().suite.g1_mul(
                params().suite.random_scalar(adversary_rng),
                params().suite.p1());
            fake.s2 = params().suite.g1_mul(
                params().suite.random_scalar(adversary_rng),
                params().suite.p1());
            NetMessage msg;
            msg.from = "adversary";
            msg.to =
                "r" + std::to_string(uniform_below(adversary_rng, rsus.size()));
            msg.epoch = epoch;
            msg.kind = MessageKind::beacon;
            msg.flags = flag_forged;
            msg.body = encode_beacon(params(), fake);
            send(std::move(msg), false);
        }
    }

    void phase_aggregate(uint64_t epoch) {
        constexpr size_t kChunk = 10;
        for (RsuState& rsu : rsus) {
            if (rsu.stored.empty()) continue;
            std::vector<AggregateSignature> chunks;
            for (size_t i = 0; i < rsu.stored.size(); i += kChunk) {
                size_t n = std::min(kChunk, rsu.stored.size() - i);
                chunks.push_back(aggregate(
                    params(), std::span(rsu.stored.data() + i, n)));
            }
            AggregateSignature final_agg = re_aggregate(params(), chunks);
            if (final_agg.entries.size() != rsu.stored.size())
                metrics.violations.push_back(
                    "conservation: aggregate entry count mismatch at " +
                    rsu.id);
            json j;
            j["event"] = "epoch_aggregate";
            j["epoch"] = epoch;
            j["rsu"] = rsu.id;
            j["stored"] = rsu.stored.size();
            j["entries"] = final_agg.entries.size();
            log(j);

            NetMessage msg;
            msg.from = rsu.id;
            msg.to = "kgc";
            msg.epoch = epoch;
            msg.kind = MessageKind::aggregate;
            msg.body = encode_aggregate(params(), final_agg);
            send(std::move(msg), true);
        }
    }

    void phase_trace(uint64_t epoch) {
        for (RsuState& rsu : rsus) {
            for (const SignedBeacon& b : rsu.stored) {
                if (unit_draw(trace_rng) >= config.trace_sample) continue;
                NetMessage msg;
                msg.from = rsu.id;
                msg.to = "kgc";
                msg.epoch = epoch;
                msg.kind = MessageKind::trace_request;
                msg.body = b.stp;
                send(std::move(msg), true);
            }
        }
    }

    void drain(uint64_t epoch, int phase) {
        auto it = queue.find({epoch, phase});
        if (it == queue.end()) return;
        while (!it->second.empty()) {
            NetMessage msg = std::move(it->second.front());
            it->second.pop_front();
            for (NetMessage& out : dispatch(msg)) send(std::move(out), true);
        }
        queue.erase(it);
    }

    void final_checks() {
        metrics.pseudonyms_issued = kgc->issued().size();
        for (const PseudonymRecord& rec : kgc->issued()) {
            ++metrics.trace_sweep_total;
            auto rid = kgc->trace(rec.pseudonym, TraceStrictness::lenient);
            if (rid && *rid == rec.rid) ++metrics.trace_sweep_ok;
        }
        if (metrics.trace_sweep_ok != metrics.trace_sweep_total)
            metrics.violations.push_back("traceability: sweep incomplete");

        uint64_t safety_threshold =
            config.backend == BackendId::toy ? 1 : 0;
        if (metrics.adversary_accepted_total > safety_threshold)
            metrics.violations.push_back(
                "safety: adversary-originated acceptances above threshold");

        for (const auto& [cls, stats] : honest_stats) {
            if (stats.accepted != stats.delivered)
                metrics.violations.push_back(
                    "acceptance: honest " + cls + " traffic rejected (" +
                    std::to_string(stats.accepted) + "/" +
                    std::to_string(stats.delivered) + ")");
        }
        if (config.adversary.drop_rate == 0.0 &&
            config.adversary.tamper_rate == 0.0) {
            uint64_t expected_beacons = static_cast<uint64_t>(config.vehicles) *
                                        config.beacon_rate * config.epochs;
            auto it = honest_stats.find("beacon");
            uint64_t got = it == honest_stats.end() ? 0 : it->second.accepted;
            if (got != expected_beacons)
                metrics.violations.push_back(
                    "liveness: stored beacons " + std::to_string(got) +
                    " of " + std::to_string(expected_beacons));
        }
    }

    RunResult run() {
        {
            json j;
            j["event"] = "run_config";
            j["vehicles"] = config.vehicles;
            j["rsus"] = config.rsus;
            j["epochs"] = config.epochs;
            j["beacon_rate"] = config.beacon_rate;
            j["stp_batch"] = config.stp_batch;
            j["seed"] = config.seed;
            j["backend"] = backend_name(config.backend);
            j["drop"] = config.adversary.drop_rate;
            j["replay"] = config.adversary.replay_rate;
            j["tamper"] = config.adversary.tamper_rate;
            j["forgeries_per_epoch"] = config.adversary.forgeries_per_epoch;
            log(j);
        }
        for (uint64_t epoch = 0; epoch < config.epochs; ++epoch) {
            current_epoch = epoch;
            for (RsuState& rsu : rsus) {
                rsu.stored.clear();
                rsu.honest_accepted_this_epoch = 0;
            }
            {
                json j;
                j["event"] = "epoch_start";
                j["epoch"] = epoch;
                j["cs"] = digest8_hex(common_string(epoch).cs);
                log(j);
            }
            phase_requests(epoch);
            drain(epoch, kPhaseRequest);
            drain(epoch, kPhaseReply);
            phase_beacons(epoch);
            drain(epoch, kPhaseBeacon);
            phase_aggregate(epoch);
            drain(epoch, kPhaseAggregate);
            phase_trace(epoch);
            drain(epoch, kPhaseTrace);
        }
        // late replay copies addressed past the final epoch are never
        // delivered; drop them from the queue silently
        queue.clear();
        final_checks();
        {
            json j;
            j["event"] = "final";
            j["pseudonyms_issued"] = metrics.pseudonyms_issued;
            j["trace_sweep_ok"] = metrics.trace_sweep_ok;
            j["trace_sweep_total"] = metrics.trace_sweep_total;
            j["adversary_accepted"] = metrics.adversary_accepted_total;
            j["violations"] = metrics.violations;
            log(j);
        }
        return RunResult{metrics, event_log};
    }
};

Simulation::Simulation(const ScenarioConfig& config)
    : impl_(std::make_unique<Impl>(config)) {}

Simulation::~Simulation() = default;

RunResult Simulation::run() { return impl_->run(); }

const SystemParams& Simulation::params() const { return impl_->params(); }

KgcState& Simulation::kgc() { return *impl_->kgc; }

std::vector<NetMessage> Simulation::handle_message(const NetMessage& msg) {
    return impl_->dispatch(msg);
}

CommonString Simulation::common_string(uint64_t epoch) const {
    return impl_->common_string(epoch);
}

RunResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    Simulation sim(config);
    return sim.run();
}

}  // namespace vanetauth
