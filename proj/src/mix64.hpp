#pragma once

#include <cstdint>

namespace qsc::detail {

// splitmix64 finalizer. Both the seeded disturbance and the seeded model
// draws go through this so every random quantity is a pure function of
// (seed, index) and identical across platforms.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Top 53 bits to a double in [0, 1).
inline double unit_from_bits(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace qsc::detail
