#include "vanetauth/trace.hpp"

#include <sstream>

#include "vanetauth/errors.hpp"

namespace vanetauth {

KgcState::KgcState(SystemParams params, MasterSecret master, Bytes trace_key,
                   std::shared_ptr<const AeadCipher> cipher)
    : params_(std::move(params)),
      master_(std::move(master)),
      trace_key_(std::move(trace_key)),
      cipher_(std::move(cipher)) {
    if (trace_key_.size() != cipher_->key_len())
        throw InvalidArgumentError("tracing key has wrong length");
    if (params_.pseudonym_len() < cipher_->tag_len() + 8)
        throw InvalidArgumentError(
            "l1 too small for the pseudonym layout (need at least 128 bits)");
}

size_t KgcState::body_len() const {
    return params_.pseudonym_len() - cipher_->tag_len();
}

void KgcState::register_vehicle(const Bytes& rid, const Bytes& k) {
    if (rid.empty()) throw InvalidArgumentError("empty RID");
    if (k.size() != cipher_->key_len())
        throw InvalidArgumentError("channel key has wrong length");
    if (rid_index_.count(rid)) throw ProtocolError("RID already registered");
    if (rids_.size() >= (1u << 24))
        throw ProtocolError("registration table full");
    rid_index_.emplace(rid, static_cast<uint32_t>(rids_.size()));
    rids_.push_back(rid);
    channel_keys_.emplace(rid, k);
}

bool KgcState::is_registered(const Bytes& rid) const {
    return rid_index_.count(rid) != 0;
}

const Bytes& KgcState::channel_key(const Bytes& rid) const {
    auto it = channel_keys_.find(rid);
    if (it == channel_keys_.end())
        throw ProtocolError("RID not registered");
    return it->second;
}

std::optional<Bytes> KgcState::channel_key_for_pseudonym(
    const Bytes& pseudonym) const {
    auto rid = trace(pseudonym, TraceStrictness::lenient);
    if (!rid) return std::nullopt;
    return channel_key(*rid);
}

PseudonymRecord KgcState::issue_pseudonym(const Bytes& rid, PseudonymKind kind,
                                          ValidityWindow validity) {
    auto it = rid_index_.find(rid);
    if (it == rid_index_.end())
        throw ProtocolError("cannot issue pseudonym for unregistered RID");
    if (validity.first_epoch > validity.last_epoch)
        throw InvalidArgumentError("empty validity window");
    if (validity.last_epoch > 0xff)
        throw InvalidArgumentError("validity epoch beyond the u8 layout");

    size_t counter_len = body_len() - 6;
    if (counter_len < 8 && issue_counter_ >= (1ull << (8 * counter_len)))
        throw ProtocolError("pseudonym issue counter exhausted");

    Bytes body;
    uint32_t idx = it->second;
    body.push_back(static_cast<uint8_t>(idx >> 16));
    body.push_back(static_cast<uint8_t>(idx >> 8));
    body.push_back(static_cast<uint8_t>(idx));
    body.push_back(static_cast<uint8_t>(kind));
    body.push_back(static_cast<uint8_t>(validity.first_epoch));
    body.push_back(static_cast<uint8_t>(validity.last_epoch));
    for (size_t i = counter_len; i-- > 0;)
        body.push_back(static_cast<uint8_t>(issue_counter_ >> (8 * i)));
    ++issue_counter_;

    PseudonymRecord rec;
    rec.pseudonym = cipher_->seal(trace_key_, body, to_bytes("pseudonym"));
    rec.rid = rid;
    rec.validity = validity;
    rec.kind = kind;
    if (rec.pseudonym.size() != params_.pseudonym_len())
        throw Error("pseudonym layout does not match l1");
    issued_.push_back(rec);
    return rec;
}

std::optional<Bytes> KgcState::trace(const Bytes& pseudonym,
                                     TraceStrictness strictness,
                                     uint32_t epoch) const {
    if (pseudonym.size() != params_.pseudonym_len()) return std::nullopt;
    auto body = cipher_->open(trace_key_, pseudonym, to_bytes("pseudonym"));
    if (!body) return std::nullopt;
    if (body->size() != body_len()) return std::nullopt;
    uint32_t idx = static_cast<uint32_t>((*body)[0]) << 16 |
                   static_cast<uint32_t>((*body)[1]) << 8 | (*body)[2];
    if (idx >= rids_.size()) return std::nullopt;
    if (strictness == TraceStrictness::strict) {
        ValidityWindow w{(*body)[4], (*body)[5]};
        if (!w.covers(epoch)) return std::nullopt;
    }
    return rids_[idx];
}

Bytes encode_reply_payload(const SystemParams& params, const ReplyPayload& p) {
    Bytes out;
    append_be32(out, static_cast<uint32_t>(p.credentials.size()));
    for (const ReplyCredential& c : p.credentials) {
        if (c.stp.size() != params.pseudonym_len())
            throw InvalidArgumentError("reply pseudonym has wrong length");
        append(out, c.stp);
        append(out, params.suite.serialize(c.d0));
        append(out, params.suite.serialize(c.d1));
    }
    append_be32(out, p.validity.first_epoch);
    append_be32(out, p.validity.last_epoch);
    return out;
}

ReplyPayload decode_reply_payload(const SystemParams& params,
                                  const Bytes& in) {
    size_t off = 0;
    ReplyPayload p;
    uint32_t count = read_be32(in, off);
    size_t point_len = params.suite.descriptor().g1_len;
    for (uint32_t i = 0; i < count; ++i) {
        ReplyCredential c;
        c.stp = read_exact(in, off, params.pseudonym_len());
        c.d0 = params.suite.deserialize_g1(read_exact(in, off, point_len));
        c.d1 = params.suite.deserialize_g1(read_exact(in, off, point_len));
        p.credentials.push_back(std::move(c));
    }
    p.validity.first_epoch = read_be32(in, off);
    p.validity.last_epoch = read_be32(in, off);
    if (off != in.size()) throw DeserializeError("trailing payload bytes");
    return p;
}

Bytes wrap_reply(const SystemParams& params, const AeadCipher& cipher,
                 const VehicleChannelKey& key, const ReplyPayload& payload) {
    return cipher.seal(key.k, encode_reply_payload(params, payload),
                       to_bytes("reply"));
}

std::optional<ReplyPayload> unwrap_reply(const SystemParams& params,
                                         const AeadCipher& cipher,
                                         const VehicleChannelKey& key,
                                         const Bytes& ciphertext) {
    auto plain = cipher.open(key.k, ciphertext, to_bytes("reply"));
    if (!plain) return std::nullopt;
    try {
        return decode_reply_payload(params, *plain);
    } catch (const DeserializeError&) {
        return std::nullopt;
    }
}

std::string write_registration_lines(
    const std::vector<std::pair<Bytes, Bytes>>& entries) {
    std::string out;
    for (const auto& [rid, k] : entries) {
        std::string rid_str = to_string(rid);
        if (rid_str.find('\t') != std::string::npos ||
            rid_str.find('\n') != std::string::npos)
            throw InvalidArgumentError("RID may not contain tab or newline");
        out += rid_str;
        out += '\t';
        out += to_hex(k);
        out += '\n';
    }
    return out;
}

std::vector<std::pair<Bytes, Bytes>> parse_registration_lines(
    const std::string& text) {
    std::vector<std::pair<Bytes, Bytes>> entries;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw ConfigError("registration line missing RID<TAB>hexkey",
                              line_no);
        try {
            entries.emplace_back(to_bytes(line.substr(0, tab)),
                                 from_hex(line.substr(tab + 1)));
        } catch (const DeserializeError& e) {
            throw ConfigError(std::string("bad key hex: ") + e.what(), line_no);
        }
    }
    return entries;
}

}  // namespace vanetauth
