#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>

namespace tsn {

/// Signed interval in integer nanoseconds.
struct Duration {
    std::int64_t ns = 0;

    constexpr Duration() noexcept = default;
    constexpr explicit Duration(std::int64_t n) noexcept : ns(n) {}

    static constexpr Duration zero() noexcept { return Duration{0}; }
    /// Sentinel for "never" (e.g. a gate that never closes).
    static constexpr Duration infinite() noexcept {
        return Duration{std::numeric_limits<std::int64_t>::max()};
    }
    [[nodiscard]] constexpr bool is_infinite() const noexcept { return *this == infinite(); }

    [[nodiscard]] constexpr double micros() const noexcept { return static_cast<double>(ns) / 1e3; }
    [[nodiscard]] constexpr double seconds() const noexcept { return static_cast<double>(ns) / 1e9; }

    constexpr Duration operator+(Duration o) const noexcept { return Duration{ns + o.ns}; }
    constexpr Duration operator-(Duration o) const noexcept { return Duration{ns - o.ns}; }
    constexpr Duration operator-() const noexcept { return Duration{-ns}; }
    constexpr Duration operator*(std::int64_t k) const noexcept { return Duration{ns * k}; }
    constexpr Duration& operator+=(Duration o) noexcept { ns += o.ns; return *this; }
    constexpr Duration& operator-=(Duration o) noexcept { ns -= o.ns; return *this; }

    constexpr auto operator<=>(const Duration&) const noexcept = default;
};

/// Absolute instant in integer nanoseconds since the simulation epoch.
struct SimTime {
    std::int64_t ns = 0;

    constexpr SimTime() noexcept = default;
    constexpr explicit SimTime(std::int64_t n) noexcept : ns(n) {}

    static constexpr SimTime max() noexcept {
        return SimTime{std::numeric_limits<std::int64_t>::max()};
    }

    constexpr SimTime operator+(Duration d) const noexcept { return SimTime{ns + d.ns}; }
    constexpr SimTime operator-(Duration d) const noexcept { return SimTime{ns - d.ns}; }
    constexpr Duration operator-(SimTime o) const noexcept { return Duration{ns - o.ns}; }
    constexpr SimTime& operator+=(Duration d) noexcept { ns += d.ns; return *this; }

    constexpr auto operator<=>(const SimTime&) const noexcept = default;
};

constexpr Duration nanoseconds(std::int64_t n) noexcept { return Duration{n}; }
constexpr Duration microseconds(std::int64_t n) noexcept { return Duration{n * 1'000}; }
constexpr Duration milliseconds(std::int64_t n) noexcept { return Duration{n * 1'000'000}; }
constexpr Duration seconds(std::int64_t n) noexcept { return Duration{n * 1'000'000'000}; }

constexpr SimTime at_ns(std::int64_t n) noexcept { return SimTime{n}; }

inline std::ostream& operator<<(std::ostream& os, Duration d) { return os << d.ns << "ns"; }
inline std::ostream& operator<<(std::ostream& os, SimTime t) { return os << "t=" << t.ns << "ns"; }

/// Floor modulo for signed nanosecond phases.
constexpr std::int64_t floor_mod(std::int64_t a, std::int64_t m) noexcept {
    const std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

}  // namespace tsn
