#include "vanetauth/oracle_table.hpp"

#include "vanetauth/errors.hpp"

namespace vanetauth {

OracleTable::OracleTable(const BilinearSuite& base, OracleFallback fallback,
                         uint64_t rng_seed, int64_t mask_len_bits)
    : base_(base.without_oracle()),
      fallback_(fallback),
      rng_(derive_rng(rng_seed, "oracle-table")),
      mask_len_bits_(mask_len_bits) {}

std::shared_ptr<OracleTable> OracleTable::create(const BilinearSuite& base,
                                                 OracleFallback fallback,
                                                 uint64_t rng_seed,
                                                 int64_t mask_len_bits) {
    return std::make_shared<OracleTable>(base, fallback, rng_seed,
                                         mask_len_bits);
}

OracleTable::PerOracle& OracleTable::slot(OracleId oracle) {
    return oracles_[static_cast<uint8_t>(oracle)];
}

const OracleTable::PerOracle& OracleTable::slot(OracleId oracle) const {
    static const PerOracle empty;
    auto it = oracles_.find(static_cast<uint8_t>(oracle));
    return it == oracles_.end() ? empty : it->second;
}

void OracleTable::program(OracleId oracle, const Bytes& query,
                          const Bytes& answer, std::vector<Scalar> trapdoors,
                          std::vector<Bytes> aux) {
    PerOracle& po = slot(oracle);
    if (po.index.count(query))
        throw OracleError(std::string("oracle ") + oracle_name(oracle) +
                          ": entry already present, refusing to reprogram");
    OracleEntry entry{answer, std::move(trapdoors), std::move(aux), true};
    po.index.emplace(query, po.order.size());
    po.order.emplace_back(query, std::move(entry));
}

Bytes OracleTable::sample_answer(OracleId oracle) {
    switch (oracle) {
        case OracleId::h1:
            return base_.serialize(
                base_.g1_mul(base_.random_scalar(rng_), base_.p1()));
        case OracleId::h2:
            return base_.serialize(
                base_.g2_mul(base_.random_scalar(rng_), base_.p2()));
        case OracleId::h3:
            return base_.serialize(base_.random_nonzero_scalar(rng_));
        case OracleId::h5: {
            size_t n = static_cast<size_t>((mask_len_bits_ + 7) / 8);
            Bytes mask = random_bytes(rng_, n);
            if (mask_len_bits_ % 8 != 0 && !mask.empty())
                mask.back() &=
                    static_cast<uint8_t>(0xff << (8 - mask_len_bits_ % 8));
            return mask;
        }
    }
    throw OracleError("unknown oracle id");
}

std::optional<Bytes> OracleTable::lookup(OracleId oracle, const Bytes& query) {
    PerOracle& po = slot(oracle);
    auto it = po.index.find(query);
    if (it != po.index.end()) {
        const OracleEntry& e = po.order[it->second].second;
        log_.push_back({oracle, query, e.answer, e.programmed});
        return e.answer;
    }
    if (fallback_ == OracleFallback::digest) {
        log_.push_back({oracle, query, {}, false});
        return std::nullopt;
    }
    Bytes answer = sample_answer(oracle);
    po.index.emplace(query, po.order.size());
    po.order.emplace_back(query, OracleEntry{answer, {}, {}, false});
    log_.push_back({oracle, query, answer, false});
    return answer;
}

bool OracleTable::contains(OracleId oracle, const Bytes& query) const {
    return slot(oracle).index.count(query) != 0;
}

const OracleEntry* OracleTable::find(OracleId oracle,
                                     const Bytes& query) const {
    const PerOracle& po = slot(oracle);
    auto it = po.index.find(query);
    return it == po.index.end() ? nullptr : &po.order[it->second].second;
}

const std::vector<std::pair<Bytes, OracleEntry>>& OracleTable::entries(
    OracleId oracle) const {
    return slot(oracle).order;
}

size_t OracleTable::query_count(OracleId oracle) const {
    size_t n = 0;
    for (const auto& rec : log_)
        if (rec.oracle == oracle) ++n;
    return n;
}

}  // namespace vanetauth
