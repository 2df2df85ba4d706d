#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "evotree/geometry.hpp"
#include "evotree/rng.hpp"

namespace evotree {

// Deterministic unit direction for coincident point pairs; antisymmetric in
// (self, other) so paired contributions stay equal and opposite.
inline Point2 tiebreak_direction(std::uint32_t self, std::uint32_t other) {
    const std::uint32_t lo = std::min(self, other);
    const std::uint32_t hi = std::max(self, other);
    const double angle = 6.283185307179586 *
        (static_cast<double>(hash64((std::uint64_t(lo) << 32) | hi) >> 11) * 0x1.0p-53);
    const double sign = self < other ? 1.0 : -1.0;
    return {sign * std::cos(angle), sign * std::sin(angle)};
}

}  // namespace evotree
