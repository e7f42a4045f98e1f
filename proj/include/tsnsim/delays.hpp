#pragma once

#include "tsnsim/time.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace tsn {

using Bytes = std::uint64_t;
using BitsPerSecond = std::uint64_t;

/// Time to serialize `wire_len` bytes onto a link of the given capacity,
/// rounded up to the next nanosecond.
inline Duration transmission_delay(Bytes wire_len, BitsPerSecond capacity) {
    if (capacity == 0) throw std::invalid_argument("transmission_delay: zero link capacity");
    const unsigned __int128 bit_ns = static_cast<unsigned __int128>(wire_len) * 8u * 1'000'000'000u;
    const unsigned __int128 q = (bit_ns + capacity - 1) / capacity;
    return Duration{static_cast<std::int64_t>(q)};
}

/// Time for one bit to cover `length_m` metres at `speed_mps`, rounded to
/// the nearest nanosecond.
inline Duration propagation_delay(double length_m, double speed_mps) {
    if (!(speed_mps > 0.0)) throw std::invalid_argument("propagation_delay: non-positive speed");
    if (length_m < 0.0) throw std::invalid_argument("propagation_delay: negative length");
    return Duration{std::llround(length_m / speed_mps * 1e9)};
}

inline constexpr double kCopperSpeed = 2.0e8;  // m/s, typical for twisted pair

}  // namespace tsn
