#include "vanetauth/errors.hpp"
#include "vanetauth/games.hpp"

namespace vanetauth {

namespace {

Bytes padded(const std::string& stem, size_t width) {
    Bytes b = to_bytes(stem);
    b.resize(width, 0);
    return b;
}

PropertyResult check(const std::string& name, size_t good, size_t total,
                     size_t required) {
    PropertyResult r;
    r.name = name;
    r.pass = good >= required;
    r.detail = std::to_string(good) + "/" + std::to_string(total) +
               " (needs " + std::to_string(required) + ")";
    return r;
}

// Random-guess forger: a uniformly random envelope aimed at a fresh RSU.
SigncryptAdversary random_envelope_adversary() {
    return [](SigncryptGameView& view) -> std::optional<SigncryptForgery> {
        const SystemParams& params = view.pub();
        Rng& rng = view.rng();
        SigncryptForgery f;
        f.envelope.commitment = params.suite.g1_mul(
            params.suite.random_scalar(rng), params.suite.p1());
        f.envelope.masked = random_bytes(rng, params.masked_len());
        f.id_r = view.rsu_ids()[0];
        return f;
    };
}

AggregateAdversary random_aggregate_adversary() {
    return [](AggregateGameView& view) -> std::optional<AggregateForgery> {
        const SystemParams& params = view.pub();
        Rng& rng = view.rng();
        AggregateForgery f;
        f.agg.entries.push_back(
            {random_bytes(rng, 10), view.population_stps()[0]});
        f.agg.s1 = params.suite.g1_mul(params.suite.random_scalar(rng),
                                       params.suite.p1());
        f.agg.s2 = params.suite.g1_mul(params.suite.random_scalar(rng),
                                       params.suite.p1());
        return f;
    };
}

}  // namespace

std::vector<PropertyResult> run_signcrypt_game_suite(uint64_t seed,
                                                     int trials) {
    std::vector<PropertyResult> results;
    size_t n = trials > 0 ? static_cast<size_t>(trials) : 100;

    // no-key simulated envelopes pass honest de-signcryption
    {
        Rng rng = derive_rng(seed, "suite-sc-sim");
        SetupOptions opts;
        opts.toy.hash_seed = seed;
        auto [base_params, master] = setup(opts, rng);
        auto table = OracleTable::create(base_params.suite,
                                         OracleFallback::sample, seed,
                                         base_params.l2_bits);
        SystemParams params = base_params.with_oracle(table);
        size_t good = 0;
        for (size_t i = 0; i < n; ++i) {
            Bytes id_r = to_bytes("suite-rsu-" + std::to_string(i % 3));
            RequestPlaintext m{rng(), padded("sim-" + std::to_string(i), 16),
                               i};
            auto env =
                simulate_signcrypt_without_key(table, params, m, id_r, rng);
            const OracleEntry* rsu_entry = table->find(OracleId::h2, id_r);
            RsuCredential rsu{id_r,
                              params.suite.deserialize_g2(rsu_entry->answer),
                              params.suite.deserialize_g2(rsu_entry->aux[0])};
            auto res = designcrypt(params, rsu, env);
            if (res.accepted() && *res.plaintext == m &&
                verify_inner(params, m, *res.signature))
                ++good;
        }
        results.push_back(check("no_key_envelopes_pass_honest_designcrypt",
                                good, n, n));
    }

    // fork extractor recovers exactly the target key
    {
        size_t forks = std::min<size_t>(n, 50);
        size_t good = 0;
        for (size_t i = 0; i < forks; ++i) {
            auto fork = cooperative_signcrypt_fork(seed + i);
            auto extracted =
                extract_cdh_from_signcryption_forgeries(fork.params, fork.pair);
            const BilinearSuite& suite = fork.params.suite;
            bool exact = extracted == fork.expected_key;
            bool pairing_identity =
                suite.pair(extracted, suite.p2()) ==
                suite.pair(fork.target_public, fork.params.u2);
            if (exact && pairing_identity) ++good;
        }
        results.push_back(
            check("fork_extractor_recovers_target_key", good, forks, forks));
    }

    // replaying a query answer violates freshness
    {
        auto adversary = [](SigncryptGameView& view)
            -> std::optional<SigncryptForgery> {
            RequestPlaintext m{42, view.vehicle_ltps()[0], 1};
            Bytes id_r = view.rsu_ids()[0];
            return SigncryptForgery{view.q1_signcrypt(m, id_r), id_r};
        };
        auto result = run_signcrypt_forgery_game(adversary, seed);
        PropertyResult r;
        r.name = "replayed_query_answer_loses";
        r.pass = result.outcome == GameOutcome::lose;
        r.detail = result.detail;
        results.push_back(std::move(r));
    }

    // a stolen key wins but is classified as key compromise
    {
        auto adversary = [](SigncryptGameView& view)
            -> std::optional<SigncryptForgery> {
            const SystemParams& params = view.pub();
            Bytes ltp = view.vehicle_ltps()[0];
            G1Element ltk = view.q4_vehicle_key(ltp);
            LongTermCredential stolen{ltp, params.suite.hash_to_g1(ltp), ltk};
            RequestPlaintext m{99, ltp, 5};
            Bytes id_r = view.rsu_ids()[0];
            return SigncryptForgery{
                signcrypt(params, stolen, m, id_r, view.rng()), id_r};
        };
        auto result = run_signcrypt_forgery_game(adversary, seed + 1);
        PropertyResult r;
        r.name = "stolen_key_flagged_as_key_compromise";
        r.pass = result.outcome == GameOutcome::win_key_compromise;
        r.detail = result.detail;
        results.push_back(std::move(r));
    }

    // random guessing stays at the q=1009 collision floor
    {
        size_t wins = 0;
        auto adversary = random_envelope_adversary();
        for (size_t i = 0; i < 1000; ++i) {
            auto result = run_signcrypt_forgery_game(adversary, seed + 1000 + i);
            if (result.outcome == GameOutcome::win_forgery) ++wins;
        }
        PropertyResult r;
        r.name = "random_guess_wins_at_most_2_in_1000";
        r.pass = wins <= 2;
        r.detail = std::to_string(wins) + " wins";
        results.push_back(std::move(r));
    }

    // interleaved oracle queries never disagree
    {
        SetupOptions opts;
        opts.toy.hash_seed = seed;
        Rng rng = derive_rng(seed, "suite-oracle");
        auto [params, master] = setup(opts, rng);
        auto table = OracleTable::create(params.suite, OracleFallback::sample,
                                         seed, params.l2_bits);
        std::map<Bytes, Bytes> seen;
        bool consistent = true;
        for (size_t i = 0; i < 10000; ++i) {
            Bytes q = {static_cast<uint8_t>(uniform_below(rng, 200)),
                       static_cast<uint8_t>(uniform_below(rng, 5))};
            auto ans = table->lookup(OracleId::h3, q);
            auto [it, fresh] = seen.emplace(q, *ans);
            if (!fresh && it->second != *ans) consistent = false;
        }
        PropertyResult r;
        r.name = "oracle_replay_consistency_10k";
        r.pass = consistent;
        r.detail = consistent ? "all repeats matched" : "mismatch found";
        results.push_back(std::move(r));
    }

    return results;
}

std::vector<PropertyResult> run_aggregate_game_suite(uint64_t seed,
                                                     int trials) {
    std::vector<PropertyResult> results;
    size_t n = trials > 0 ? static_cast<size_t>(trials) : 100;

    // case-3 no-key beacons (target pseudonym, other common string)
    {
        Rng rng = derive_rng(seed, "suite-ag-case3");
        SetupOptions opts;
        opts.toy.hash_seed = seed;
        auto [base_params, master] = setup(opts, rng);
        auto table = OracleTable::create(base_params.suite,
                                         OracleFallback::sample, seed,
                                         base_params.l2_bits);
        SystemParams params = base_params.with_oracle(table);
        Bytes stp = padded("case3-target", 16);
        program_stp_target_form(*table, params, stp, rng);
        Bytes cs = to_bytes("case3-cs");
        program_cs_nontarget(*table, params, cs, rng);
        size_t good = 0;
        for (size_t i = 0; i < n; ++i) {
            auto beacon = simulate_sign_without_key(
                table, params, random_bytes(rng, 10), stp, cs, rng);
            if (verify_single(params, beacon, CommonString{cs, 0})) ++good;
        }
        results.push_back(
            check("no_key_case3_beacons_pass_honest_verify", good, n, n));
    }

    // case-1 no-key beacons (degenerate challenge under the target pair)
    {
        Rng rng = derive_rng(seed, "suite-ag-case1");
        SetupOptions opts;
        opts.toy.hash_seed = seed;
        auto [base_params, master] = setup(opts, rng);
        auto table = OracleTable::create(base_params.suite,
                                         OracleFallback::sample, seed,
                                         base_params.l2_bits);
        SystemParams params = base_params.with_oracle(table);
        Bytes stp = padded("case1-target", 16);
        auto stp_trap = program_stp_target_form(*table, params, stp, rng);
        Bytes cs = to_bytes("case1-cs");
        program_cs_target(*table, params, cs, rng);
        Scalar degenerate = params.suite.scalar_mul(
            params.suite.scalar_neg(stp_trap.alpha0p),
            params.suite.scalar_inverse(stp_trap.alpha1p));
        size_t good = 0;
        for (size_t i = 0; i < n; ++i) {
            Bytes message = random_bytes(rng, 10);
            Bytes key;
            append_be32(key, static_cast<uint32_t>(message.size()));
            append(key, message);
            append_be32(key, static_cast<uint32_t>(stp.size()));
            append(key, stp);
            append(key, cs);
            table->program(OracleId::h3, key,
                           params.suite.serialize(degenerate));
            auto beacon = simulate_sign_without_key(table, params, message,
                                                    stp, cs, rng);
            if (verify_single(params, beacon, CommonString{cs, 0})) ++good;
        }
        results.push_back(
            check("no_key_case1_beacons_pass_honest_verify", good, n, n));
    }

    // target pair with a non-degenerate challenge aborts (one-time use)
    {
        Rng rng = derive_rng(seed, "suite-ag-abort");
        SetupOptions opts;
        opts.toy.hash_seed = seed;
        auto [base_params, master] = setup(opts, rng);
        auto table = OracleTable::create(base_params.suite,
                                         OracleFallback::sample, seed,
                                         base_params.l2_bits);
        SystemParams params = base_params.with_oracle(table);
        Bytes stp = padded("abort-target", 16);
        program_stp_target_form(*table, params, stp, rng);
        Bytes cs = to_bytes("abort-cs");
        program_cs_target(*table, params, cs, rng);
        bool aborted = false;
        try {
            simulate_sign_without_key(table, params, to_bytes("msg"), stp, cs,
                                      rng);
        } catch (const SimulationAbort&) {
            aborted = true;
        }
        PropertyResult r;
        r.name = "target_pair_reuse_aborts";
        r.pass = aborted;
        r.detail = aborted ? "abort raised" : "no abort";
        results.push_back(std::move(r));
    }

    // extractor identity: output equals s*U1 regardless of padding entries
    {
        size_t runs = std::min<size_t>(n, 50);
        size_t good = 0;
        for (size_t i = 0; i < runs; ++i) {
            auto res = cooperative_aggregate_extraction(seed + i, i % 3);
            if (res.extracted == res.expected) ++good;
        }
        results.push_back(
            check("extractor_output_equals_s_times_u1", good, runs, runs));
    }

    // random guessing stays at the q=1009 collision floor
    {
        size_t wins = 0;
        auto adversary = random_aggregate_adversary();
        for (size_t i = 0; i < 1000; ++i) {
            auto result =
                run_aggregate_forgery_game(adversary, seed + 2000 + i);
            if (result.outcome == GameOutcome::win_forgery) ++wins;
        }
        PropertyResult r;
        r.name = "random_guess_wins_at_most_2_in_1000";
        r.pass = wins <= 2;
        r.detail = std::to_string(wins) + " wins";
        results.push_back(std::move(r));
    }

    // outputting a signing-query answer violates freshness
    {
        auto adversary = [](AggregateGameView& view)
            -> std::optional<AggregateForgery> {
            Bytes stp = view.population_stps()[0];
            Bytes message = to_bytes("replayed beacon");
            SignedBeacon beacon = view.q6_sign(message, stp);
            AggregateForgery f;
            f.agg = aggregate(view.pub(), std::span(&beacon, 1));
            return f;
        };
        auto result = run_aggregate_forgery_game(adversary, seed + 3);
        PropertyResult r;
        r.name = "replayed_signature_loses";
        r.pass = result.outcome == GameOutcome::lose;
        r.detail = result.detail;
        results.push_back(std::move(r));
    }

    return results;
}

}  // namespace vanetauth
