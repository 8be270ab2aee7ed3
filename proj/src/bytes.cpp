#include "vanetauth/bytes.hpp"

#include <stdexcept>

#include "vanetauth/errors.hpp"
#include "vanetauth/xof.hpp"

namespace vanetauth {

Bytes concat(std::initializer_list<Bytes> parts) {
    Bytes out;
    size_t total = 0;
    for (const auto& p : parts) total += p.size();
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

void append(Bytes& out, const Bytes& more) {
    out.insert(out.end(), more.begin(), more.end());
}

void append_u8(Bytes& out, uint8_t v) { out.push_back(v); }

void append_be16(Bytes& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v >> 8));
    out.push_back(static_cast<uint8_t>(v));
}

void append_be32(Bytes& out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>(v >> shift));
}

void append_be64(Bytes& out, uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<uint8_t>(v >> shift));
}

Bytes be64(uint64_t v) {
    Bytes out;
    append_be64(out, v);
    return out;
}

static void need(const Bytes& in, size_t off, size_t n) {
    if (off + n > in.size())
        throw DeserializeError("truncated input: need " + std::to_string(n) +
                               " bytes at offset " + std::to_string(off));
}

uint8_t read_u8(const Bytes& in, size_t& off) {
    need(in, off, 1);
    return in[off++];
}

uint16_t read_be16(const Bytes& in, size_t& off) {
    need(in, off, 2);
    uint16_t v = static_cast<uint16_t>(in[off] << 8 | in[off + 1]);
    off += 2;
    return v;
}

uint32_t read_be32(const Bytes& in, size_t& off) {
    need(in, off, 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | in[off + i];
    off += 4;
    return v;
}

uint64_t read_be64(const Bytes& in, size_t& off) {
    need(in, off, 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | in[off + i];
    off += 8;
    return v;
}

Bytes read_exact(const Bytes& in, size_t& off, size_t n) {
    need(in, off, n);
    Bytes out(in.begin() + static_cast<ptrdiff_t>(off),
              in.begin() + static_cast<ptrdiff_t>(off + n));
    off += n;
    return out;
}

std::string to_hex(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(b.size() * 2);
    for (uint8_t c : b) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

static int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0)
        throw DeserializeError("hex string has odd length");
    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2) {
        int hi = hex_nibble(hex[i]);
        int lo = hex_nibble(hex[i + 1]);
        if (hi < 0 || lo < 0) throw DeserializeError("invalid hex digit");
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

Bytes xor_bytes(const Bytes& a, const Bytes& b) {
    if (a.size() != b.size())
        throw InvalidArgumentError("xor_bytes: length mismatch");
    Bytes out(a.size());
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
    return out;
}

uint64_t uniform_below(Rng& rng, uint64_t bound) {
    if (bound == 0) throw InvalidArgumentError("uniform_below: zero bound");
    // rejection sampling over the largest multiple of bound
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

Bytes random_bytes(Rng& rng, size_t n) {
    Bytes out(n);
    for (auto& c : out) c = static_cast<uint8_t>(rng() & 0xff);
    return out;
}

Rng derive_rng(uint64_t seed, std::string_view label) {
    Bytes input = be64(seed);
    input.insert(input.end(), label.begin(), label.end());
    Bytes digest = shake128(input, 8);
    size_t off = 0;
    return Rng(read_be64(digest, off));
}

}  // namespace vanetauth
