#pragma once

#include "tsnsim/time.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace tsn {

// Stateless 64-bit mixer used wherever a value must be a pure function of its inputs.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Residual synchronization error of one node's clock.
struct ClockError {
    Duration offset{};        // static signed shift
    Duration jitter_bound{};  // per-read uniform error in [-bound, +bound]
};

/// Per-node clock model: node clocks read global time plus a static offset
/// plus bounded jitter. Jitter is a pure function of (seed, node, t), so a
/// given read is reproducible no matter how often or in which order the
/// model queries it.
class ClockModel {
public:
    ClockModel() = default;
    ClockModel(std::size_t node_count, std::uint64_t seed) : errors_(node_count), seed_(seed) {}

    void set(std::size_t node, ClockError e) {
        if (e.jitter_bound.ns < 0) throw std::invalid_argument("jitter bound must be >= 0");
        if (node >= errors_.size()) errors_.resize(node + 1);
        errors_[node] = e;
    }

    [[nodiscard]] ClockError error(std::size_t node) const {
        return node < errors_.size() ? errors_[node] : ClockError{};
    }

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] Duration effective_offset(std::size_t node, SimTime t) const {
        const ClockError e = error(node);
        return e.offset + jitter(node, t, e.jitter_bound);
    }

    [[nodiscard]] SimTime local_time(std::size_t node, SimTime t) const {
        return t + effective_offset(node, t);
    }

    /// Global instant at which the node's clock reads `local`, up to the
    /// jitter of that read. Exact when the node has no jitter.
    [[nodiscard]] SimTime to_global(std::size_t node, SimTime local) const {
        const ClockError e = error(node);
        const SimTime guess = local - e.offset;
        return guess - jitter(node, guess, e.jitter_bound);
    }

    [[nodiscard]] bool is_perfect() const noexcept {
        for (const auto& e : errors_) {
            if (e.offset.ns != 0 || e.jitter_bound.ns != 0) return false;
        }
        return true;
    }

private:
    [[nodiscard]] Duration jitter(std::size_t node, SimTime t, Duration bound) const noexcept {
        if (bound.ns == 0) return Duration::zero();
        const std::uint64_t h =
            splitmix64(seed_ ^ splitmix64(static_cast<std::uint64_t>(node) * 0x2545f4914f6cdd1dull ^
                                          splitmix64(static_cast<std::uint64_t>(t.ns))));
        const auto span = static_cast<std::uint64_t>(2 * bound.ns + 1);
        return Duration{static_cast<std::int64_t>(h % span) - bound.ns};
    }

    std::vector<ClockError> errors_;
    std::uint64_t seed_ = 0;
};

}  // namespace tsn
