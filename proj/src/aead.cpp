#include "vanetauth/aead.hpp"

#include "vanetauth/errors.hpp"
#include "vanetauth/xof.hpp"

namespace vanetauth {

namespace {

Bytes frame(uint8_t domain, const Bytes& key, const Bytes& a, const Bytes& b) {
    Bytes in;
    append_be32(in, static_cast<uint32_t>(key.size()));
    append(in, key);
    append_u8(in, domain);
    append_be32(in, static_cast<uint32_t>(a.size()));
    append(in, a);
    append(in, b);
    return in;
}

}  // namespace

Bytes ToyAead::seal(const Bytes& key, const Bytes& plaintext,
                    const Bytes& ad) const {
    if (key.size() != key_len_)
        throw InvalidArgumentError("aead seal: wrong key length");
    Bytes tag = shake128(frame('T', key, ad, plaintext), tag_len());
    Bytes stream = shake128(frame('S', key, ad, tag), plaintext.size());
    Bytes out = xor_bytes(plaintext, stream);
    append(out, tag);
    return out;
}

std::optional<Bytes> ToyAead::open(const Bytes& key, const Bytes& ciphertext,
                                   const Bytes& ad) const {
    if (key.size() != key_len_)
        throw InvalidArgumentError("aead open: wrong key length");
    if (ciphertext.size() < tag_len()) return std::nullopt;
    size_t body_len = ciphertext.size() - tag_len();
    Bytes body(ciphertext.begin(),
               ciphertext.begin() + static_cast<ptrdiff_t>(body_len));
    Bytes tag(ciphertext.begin() + static_cast<ptrdiff_t>(body_len),
              ciphertext.end());
    Bytes stream = shake128(frame('S', key, ad, tag), body_len);
    Bytes plaintext = xor_bytes(body, stream);
    Bytes expect = shake128(frame('T', key, ad, plaintext), tag_len());
    if (expect != tag) return std::nullopt;
    return plaintext;
}

}  // namespace vanetauth
