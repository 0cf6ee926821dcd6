#pragma once

#include <cstdint>
#include <string_view>

namespace urnlab {

// 64-bit FNV-1a. Stable across platforms, used to tag reports with the
// configuration and kernel they came from.
constexpr std::uint64_t fnv1a_64(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace urnlab
