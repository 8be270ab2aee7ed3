#include "vanetauth/xof.hpp"

#include <openssl/evp.h>

#include <memory>

#include "vanetauth/errors.hpp"

namespace vanetauth {

Bytes shake128(const Bytes& input, size_t out_len) {
    Bytes out(out_len);
    if (out_len == 0) return out;

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(
        EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx) throw Error("shake128: EVP_MD_CTX_new failed");
    if (EVP_DigestInit_ex(ctx.get(), EVP_shake128(), nullptr) != 1)
        throw Error("shake128: DigestInit failed");
    if (!input.empty() &&
        EVP_DigestUpdate(ctx.get(), input.data(), input.size()) != 1)
        throw Error("shake128: DigestUpdate failed");
    if (EVP_DigestFinalXOF(ctx.get(), out.data(), out.size()) != 1)
        throw Error("shake128: DigestFinalXOF failed");
    return out;
}

}  // namespace vanetauth
