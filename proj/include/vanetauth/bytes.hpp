#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace vanetauth {

using Bytes = std::vector<uint8_t>;

// Deterministic engine used throughout; always seeded explicitly.
using Rng = std::mt19937_64;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

Bytes concat(std::initializer_list<Bytes> parts);

void append(Bytes& out, const Bytes& more);
void append_u8(Bytes& out, uint8_t v);
void append_be16(Bytes& out, uint16_t v);
void append_be32(Bytes& out, uint32_t v);
void append_be64(Bytes& out, uint64_t v);

Bytes be64(uint64_t v);

// Big-endian reads; `off` advances past the consumed bytes. Throws
// DeserializeError when the buffer is short.
uint8_t read_u8(const Bytes& in, size_t& off);
uint16_t read_be16(const Bytes& in, size_t& off);
uint32_t read_be32(const Bytes& in, size_t& off);
uint64_t read_be64(const Bytes& in, size_t& off);
Bytes read_exact(const Bytes& in, size_t& off, size_t n);

std::string to_hex(const Bytes& b);
Bytes from_hex(std::string_view hex);

Bytes xor_bytes(const Bytes& a, const Bytes& b);

// Unbiased draw in [0, bound) via rejection sampling; portable across
// standard libraries, unlike uniform_int_distribution.
uint64_t uniform_below(Rng& rng, uint64_t bound);

Bytes random_bytes(Rng& rng, size_t n);

// Independent stream derived from (seed, label); used to split one scenario
// seed into per-component streams.
Rng derive_rng(uint64_t seed, std::string_view label);

}  // namespace vanetauth
