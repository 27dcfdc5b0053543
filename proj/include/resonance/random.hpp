#pragma once

#include <cstdint>
#include <random>

namespace resonance {

// 53 random bits mapped to [0, 1). Spelled out so that samples do not depend
// on the standard library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace resonance
