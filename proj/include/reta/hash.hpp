#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace reta {

// FNV-1a, 64 bit. Used for text digests, the store file checksum and
// config digests. Not cryptographic.
inline std::uint64_t fnv1a64(std::string_view data,
                             std::uint64_t seed = 0xcbf29ce484222325ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value);

}  // namespace reta
