#pragma once

#include <memory>
#include <optional>
#include <string>

#include "vanetauth/bytes.hpp"

namespace vanetauth {

// Authenticated symmetric encryption behind the protocol's E/D primitive.
// Implementations may be deterministic (SIV-style); callers guarantee
// distinct plaintexts where unlinkability matters.
class AeadCipher {
public:
    virtual ~AeadCipher() = default;
    virtual std::string name() const = 0;
    virtual size_t key_len() const = 0;
    virtual size_t tag_len() const = 0;
    virtual Bytes seal(const Bytes& key, const Bytes& plaintext,
                       const Bytes& ad) const = 0;
    virtual std::optional<Bytes> open(const Bytes& key, const Bytes& ciphertext,
                                      const Bytes& ad) const = 0;
};

// SIV construction over SHAKE128: tag = XOF(key, ad, pt), keystream derived
// from (key, tag). Test-scale only; the 64-bit tag makes forging a valid
// ciphertext a 2^-64 event.
class ToyAead final : public AeadCipher {
public:
    explicit ToyAead(size_t key_len_bytes = 16) : key_len_(key_len_bytes) {}

    std::string name() const override { return "toy-siv-shake128"; }
    size_t key_len() const override { return key_len_; }
    size_t tag_len() const override { return 8; }
    Bytes seal(const Bytes& key, const Bytes& plaintext,
               const Bytes& ad) const override;
    std::optional<Bytes> open(const Bytes& key, const Bytes& ciphertext,
                              const Bytes& ad) const override;

private:
    size_t key_len_;
};

}  // namespace vanetauth
