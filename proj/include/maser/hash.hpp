#pragma once

#include <cstdint>
#include <string_view>

namespace maser {

/// FNV-1a 64-bit hash; stable across platforms, used for run provenance.
[[nodiscard]] constexpr std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace maser
