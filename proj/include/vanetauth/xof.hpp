#pragma once

#include "vanetauth/bytes.hpp"

namespace vanetauth {

// SHAKE128 with arbitrary output length (OpenSSL EVP behind the scenes).
Bytes shake128(const Bytes& input, size_t out_len);

}  // namespace vanetauth
