// Command-line front end: credential generation, scenario runs,
// micro-benchmarks and security-game suites. Machine-readable output goes
// to files/stdout; human summaries go to stderr. Exit codes: 0 success,
// 1 property or invariant failure, 2 usage/config error.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vanetauth/engine.hpp"

namespace fs = std::filesystem;
using namespace vanetauth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

BackendId backend_from_string(const std::string& name) {
    if (name == "toy") return BackendId::toy;
    if (name == "external") return BackendId::external;
    throw ConfigError("unknown backend '" + name + "'");
}

std::string default_backend() {
    const char* env = std::getenv("VANET_BACKEND");
    return env ? env : "toy";
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

int cmd_keygen(uint64_t seed, const std::string& backend_name,
               uint32_t vehicles, uint32_t rsus, const std::string& out_dir) {
    BackendId backend = backend_from_string(backend_name);
    Rng rng = derive_rng(seed, "keygen");
    auto [params, master] = setup(
        SetupOptions{.backend = backend, .toy = ToyParams{1009, seed}}, rng);
    ToyAead cipher;

    fs::create_directories(out_dir);
    std::string system_txt;
    system_txt += "backend=" + std::string(vanetauth::backend_name(backend)) + "\n";
    system_txt += "seed=" + std::to_string(seed) + "\n";
    system_txt += "q=" + std::to_string(params.suite.descriptor().toy_q) + "\n";
    system_txt += "u1=" + to_hex(params.suite.serialize(params.u1)) + "\n";
    system_txt += "u2=" + to_hex(params.suite.serialize(params.u2)) + "\n";
    system_txt += "l1=" + std::to_string(params.l1_bits) + "\n";
    system_txt += "l2=" + std::to_string(params.l2_bits) + "\n";
    system_txt += "l3=" + std::to_string(params.l3_bits) + "\n";
    write_file(fs::path(out_dir) / "system.txt", system_txt);
    write_file(fs::path(out_dir) / "master.txt",
               to_hex(params.suite.serialize(master.s)) + "\n");

    std::vector<std::pair<Bytes, Bytes>> registration;
    std::string vehicles_tsv;
    for (uint32_t i = 0; i < vehicles; ++i) {
        Bytes rid = to_bytes("vehicle-" + std::to_string(i));
        Bytes k = random_bytes(rng, cipher.key_len());
        registration.emplace_back(rid, k);
        Bytes ltp = to_bytes("ltp-" + std::to_string(i));
        ltp.resize(params.pseudonym_len(), 0);
        auto cred = extract_vehicle_key(params, master, ltp);
        vehicles_tsv += to_string(rid) + "\t" + to_hex(ltp) + "\t" +
                        to_hex(params.suite.serialize(cred.ltk)) + "\n";
    }
    write_file(fs::path(out_dir) / "registration.tsv",
               write_registration_lines(registration));
    write_file(fs::path(out_dir) / "vehicles.tsv", vehicles_tsv);

    std::string rsus_tsv;
    for (uint32_t i = 0; i < rsus; ++i) {
        Bytes id = to_bytes("rsu-" + std::to_string(i));
        auto cred = extract_rsu_key(params, master, id);
        rsus_tsv += to_string(id) + "\t" +
                    to_hex(params.suite.serialize(cred.b)) + "\n";
    }
    write_file(fs::path(out_dir) / "rsus.tsv", rsus_tsv);

    std::cerr << "keygen: wrote system/master/registration for " << vehicles
              << " vehicles, " << rsus << " rsus to " << out_dir << "\n";
    return kExitOk;
}

int cmd_run(const std::string& scenario_path, std::optional<uint64_t> seed,
            const std::string& backend_name, const std::string& out_dir) {
    ScenarioConfig config = load_scenario_file(scenario_path);
    if (seed) config.seed = *seed;
    if (!backend_name.empty()) config.backend = backend_from_string(backend_name);
    config.validate();

    RunResult result = run_scenario(config);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "metrics.csv", result.metrics.to_csv());
    write_file(fs::path(out_dir) / "events.log", result.event_log);

    for (const auto& [op, t] : result.metrics.timings) {
        if (t.count == 0) continue;
        std::cerr << "timing " << op << ": " << t.count << " calls, mean "
                  << t.total_ns / t.count << " ns\n";
    }
    std::cerr << "run: " << (result.metrics.violations.empty() ? "ok" : "FAIL")
              << " adversary_accepted=" << result.metrics.adversary_accepted_total
              << " pseudonyms=" << result.metrics.pseudonyms_issued
              << " violations=" << result.metrics.violations.size() << "\n";
    for (const auto& v : result.metrics.violations)
        std::cerr << "violation: " << v << "\n";
    return result.metrics.violations.empty() ? kExitOk : kExitFailure;
}

struct BenchCase {
    std::string op;
    size_t n;
    std::function<void()> body;
};

int cmd_bench(const std::string& op, const std::vector<size_t>& sizes,
              uint32_t iters, uint64_t seed, const std::string& backend_name) {
    if (iters == 0) throw ConfigError("iters must be positive");
    BackendId backend = backend_from_string(backend_name);
    Rng rng = derive_rng(seed, "bench");
    auto [params, master] = setup(
        SetupOptions{.backend = backend, .toy = ToyParams{1009, seed}}, rng);

    Bytes ltp = to_bytes("bench-vehicle");
    ltp.resize(params.pseudonym_len(), 0);
    auto vehicle = extract_vehicle_key(params, master, ltp);
    auto rsu = extract_rsu_key(params, master, to_bytes("bench-rsu"));
    RequestPlaintext m{1, ltp, 1};
    auto envelope = signcrypt(params, vehicle, m, rsu.id_r, rng);
    CommonString cs{to_bytes("bench-cs"), 0};

    auto make_beacons = [&](size_t n) {
        std::vector<SignedBeacon> beacons;
        for (size_t i = 0; i < n; ++i) {
            Bytes stp = to_bytes("bench-stp-" + std::to_string(i));
            stp.resize(params.pseudonym_len(), 0);
            auto cred = extract_short_term_key(params, master, stp);
            beacons.push_back(sign_beacon(params, cred,
                                          random_bytes(rng, 16), cs, rng));
        }
        return beacons;
    };

    std::vector<BenchCase> cases;
    if (op == "signcrypt") {
        cases.push_back({op, 1, [&, m]() mutable {
                             signcrypt(params, vehicle, m, rsu.id_r, rng);
                         }});
    } else if (op == "designcrypt") {
        cases.push_back({op, 1, [&]() { designcrypt(params, rsu, envelope); }});
    } else if (op == "sign") {
        auto cred = extract_short_term_key(params, master, ltp);
        cases.push_back({op, 1, [&, cred]() {
                             sign_beacon(params, cred,
                                         to_bytes("bench message"), cs, rng);
                         }});
    } else if (op == "verify_single") {
        auto beacons = make_beacons(1);
        cases.push_back({op, 1, [&, beacons]() {
                             verify_single(params, beacons[0], cs);
                         }});
    } else if (op == "verify_aggregate") {
        for (size_t n : sizes) {
            auto agg = aggregate(params, make_beacons(n));
            cases.push_back({op, n, [&, agg]() {
                                 verify_aggregate(params, agg, cs);
                             }});
        }
    } else {
        throw ConfigError("unknown bench op '" + op + "'");
    }

    std::cout << "op,n,mean_ns,p50_ns,p99_ns,ops_per_sec\n";
    for (auto& c : cases) {
        std::vector<uint64_t> samples;
        samples.reserve(iters);
        for (uint32_t i = 0; i < iters; ++i) {
            auto t0 = std::chrono::steady_clock::now();
            c.body();
            auto t1 = std::chrono::steady_clock::now();
            samples.push_back(static_cast<uint64_t>(
                std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0)
                    .count()));
        }
        std::sort(samples.begin(), samples.end());
        uint64_t total = 0;
        for (uint64_t s : samples) total += s;
        uint64_t mean = total / samples.size();
        uint64_t p50 = samples[samples.size() / 2];
        uint64_t p99 = samples[std::min(samples.size() - 1,
                                        samples.size() * 99 / 100)];
        double ops = mean == 0 ? 0.0 : 1e9 / static_cast<double>(mean);
        std::cout << c.op << "," << c.n << "," << mean << "," << p50 << ","
                  << p99 << "," << static_cast<uint64_t>(ops) << "\n";
    }
    std::cerr << "bench: toy backend measures protocol logic only, not real "
                 "pairing cost\n";
    return kExitOk;
}

int cmd_game(const std::string& game, int trials, uint64_t seed,
             const std::string& out_dir) {
    std::vector<PropertyResult> results;
    if (game == "signcrypt_auth")
        results = run_signcrypt_game_suite(seed, trials);
    else if (game == "aggregate_auth")
        results = run_aggregate_game_suite(seed, trials);
    else
        throw ConfigError("unknown game '" + game + "'");

    bool all_pass = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << " " << r.name << " ("
                  << r.detail << ")\n";
        all_pass = all_pass && r.pass;
    }
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        // keep a machine-readable copy for audits
        std::string lines;
        for (const auto& r : results)
            lines += std::string(r.pass ? "PASS" : "FAIL") + "," + r.name +
                     "," + r.detail + "\n";
        write_file(fs::path(out_dir) / "game_results.csv", lines);
    }
    return all_pass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "vanet: pseudonymous vehicular authentication library driver"};
    app.require_subcommand(1);

    uint64_t seed = 1;
    std::string backend = default_backend();
    std::string out_dir = "out";

    auto* keygen = app.add_subcommand("keygen", "generate system credentials");
    uint32_t kg_vehicles = 4, kg_rsus = 2;
    keygen->add_option("--seed", seed, "rng seed");
    keygen->add_option("--backend", backend, "toy|external");
    keygen->add_option("--vehicles", kg_vehicles, "vehicle count");
    keygen->add_option("--rsus", kg_rsus, "RSU count");
    keygen->add_option("--out", out_dir, "output directory");

    auto* run = app.add_subcommand("run", "execute a scenario file");
    std::string scenario_path;
    bool seed_set = false;
    run->add_option("--scenario", scenario_path, "key=value scenario file")
        ->required();
    run->add_option("--seed", seed, "override the scenario seed")
        ->each([&](const std::string&) { seed_set = true; });
    std::string run_backend;
    run->add_option("--backend", run_backend, "override the scenario backend");
    run->add_option("--out", out_dir, "output directory");

    auto* bench = app.add_subcommand("bench", "micro-benchmarks");
    std::string bench_op = "verify_aggregate";
    std::vector<size_t> sizes{1, 10, 50, 100};
    uint32_t iters = 100;
    bench->add_option(
        "--op", bench_op,
        "signcrypt|designcrypt|sign|verify_single|verify_aggregate");
    bench->add_option("--sizes", sizes, "aggregate sizes");
    bench->add_option("--iters", iters, "iterations per case");
    bench->add_option("--seed", seed, "rng seed");
    bench->add_option("--backend", backend, "toy|external");

    auto* game = app.add_subcommand("game", "security-game property suites");
    std::string game_id;
    int trials = 100;
    game->add_option("--game", game_id, "signcrypt_auth|aggregate_auth")
        ->required();
    game->add_option("--trials", trials, "trial count per property");
    game->add_option("--seed", seed, "rng seed");
    game->add_option("--out", out_dir, "optional results directory");
    bool game_out_set = false;
    game->get_option("--out")->each(
        [&](const std::string&) { game_out_set = true; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return kExitOk;  // --help
        std::cerr << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (keygen->parsed())
            return cmd_keygen(seed, backend, kg_vehicles, kg_rsus, out_dir);
        if (run->parsed())
            return cmd_run(scenario_path,
                           seed_set ? std::optional<uint64_t>(seed)
                                    : std::nullopt,
                           run_backend, out_dir);
        if (bench->parsed())
            return cmd_bench(bench_op, sizes, iters, seed, backend);
        if (game->parsed())
            return cmd_game(game_id, trials, seed,
                            game_out_set ? out_dir : "");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const BackendUnavailableError& e) {
        std::cerr << "backend error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
