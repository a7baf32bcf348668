#pragma once

#include <cstdint>
#include <string_view>

namespace ifcnorm {

// DJB string hash: h0 = 5381, h <- h*33 + byte, modulo 2^32.
constexpr std::uint32_t djb_hash(std::string_view s) {
    std::uint32_t h = 5381u;
    for (unsigned char c : s) h = h * 33u + c;
    return h;
}

static_assert(djb_hash("") == 5381u);
static_assert(djb_hash("a") == 177670u);
static_assert(djb_hash("ab") == 5863208u);

}  // namespace ifcnorm
