#pragma once

#include <cstdint>

namespace der {

// splitmix64 finalizer; used to derive independent-looking streams from a
// master seed.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t idx) {
    return mix64(master ^ mix64(idx + 1));
}

}  // namespace der
