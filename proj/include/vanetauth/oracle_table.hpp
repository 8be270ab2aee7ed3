#pragma once

#include <map>
#include <memory>
#include <vector>

#include "vanetauth/bilinear.hpp"
#include "vanetauth/bytes.hpp"

namespace vanetauth {

// What an unprogrammed query falls back to. `digest` leaves the suite's
// deterministic hashing in charge; `sample` answers with a fresh uniform
// value and pins it, which is how the reduction simulators model the random
// oracles.
enum class OracleFallback { digest, sample };

struct OracleEntry {
    Bytes answer;
    std::vector<Scalar> trapdoors;  // meaning fixed by whoever programmed it
    std::vector<Bytes> aux;
    bool programmed = false;  // explicitly programmed vs lazily sampled
};

// Programmable random-oracle state. Attach to a suite via with_oracle(); the
// suite's hash operations consult it before their default rule. Entries are
// write-once: a repeated query always returns the stored answer and
// reprogramming throws. Each game owns its table exclusively (no locking).
class OracleTable final : public OracleHook {
public:
    // `base` must carry no oracle itself; it supplies q and element widths
    // for sampling. `mask_len_bits` sizes sampled h5 answers.
    OracleTable(const BilinearSuite& base, OracleFallback fallback,
                uint64_t rng_seed, int64_t mask_len_bits);

    static std::shared_ptr<OracleTable> create(const BilinearSuite& base,
                                               OracleFallback fallback,
                                               uint64_t rng_seed,
                                               int64_t mask_len_bits);

    void program(OracleId oracle, const Bytes& query, const Bytes& answer,
                 std::vector<Scalar> trapdoors = {},
                 std::vector<Bytes> aux = {});

    std::optional<Bytes> lookup(OracleId oracle, const Bytes& query) override;

    bool contains(OracleId oracle, const Bytes& query) const;
    const OracleEntry* find(OracleId oracle, const Bytes& query) const;
    // entries in insertion order (the Theorem-1 de-signcryption walks L5)
    const std::vector<std::pair<Bytes, OracleEntry>>& entries(
        OracleId oracle) const;

    struct QueryRecord {
        OracleId oracle;
        Bytes query;
        Bytes answer;   // empty when the lookup fell through to the digest
        bool programmed;
    };
    const std::vector<QueryRecord>& log() const { return log_; }
    size_t query_count(OracleId oracle) const;

private:
    struct PerOracle {
        std::vector<std::pair<Bytes, OracleEntry>> order;
        std::map<Bytes, size_t> index;
    };
    PerOracle& slot(OracleId oracle);
    const PerOracle& slot(OracleId oracle) const;
    Bytes sample_answer(OracleId oracle);

    BilinearSuite base_;
    OracleFallback fallback_;
    Rng rng_;
    int64_t mask_len_bits_;
    std::map<uint8_t, PerOracle> oracles_;
    std::vector<QueryRecord> log_;
};

}  // namespace vanetauth
