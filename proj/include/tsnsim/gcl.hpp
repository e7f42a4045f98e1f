#pragma once

#include "tsnsim/time.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsn {

using GateMask = std::uint8_t;  // bit q set <=> queue q open

inline constexpr GateMask kAllGatesOpen = 0xFF;

struct GateEntry {
    Duration duration;
    GateMask gates = kAllGatesOpen;
};

class GclError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cyclic gate schedule for one TAS egress port. Entry intervals are
/// half-open in phase: an instant on a boundary belongs to the entry that
/// starts there.
class GateControlList {
public:
    GateControlList() : GateControlList(SimTime{0}, milliseconds(1), {{milliseconds(1), kAllGatesOpen}}) {}

    GateControlList(SimTime base_time, Duration cycle, std::vector<GateEntry> entries,
                    std::string name = "gcl")
        : base_(base_time), cycle_(cycle), entries_(std::move(entries)), name_(std::move(name)) {
        if (cycle_.ns <= 0) throw GclError(name_ + ": cycle must be positive");
        if (entries_.empty()) throw GclError(name_ + ": needs at least one entry");
        std::int64_t acc = 0;
        starts_.reserve(entries_.size());
        for (const auto& e : entries_) {
            if (e.duration.ns < 0) throw GclError(name_ + ": negative entry duration");
            starts_.push_back(acc);
            acc += e.duration.ns;
        }
        if (acc != cycle_.ns) {
            throw GclError(name_ + ": entry durations sum to " + std::to_string(acc) +
                           " ns but cycle is " + std::to_string(cycle_.ns) + " ns");
        }
    }

    [[nodiscard]] SimTime base_time() const noexcept { return base_; }
    [[nodiscard]] Duration cycle() const noexcept { return cycle_; }
    [[nodiscard]] const std::vector<GateEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    /// Phase within the cycle; instants before base_time extend the cycle backward.
    [[nodiscard]] std::int64_t phase(SimTime local_now) const noexcept {
        return floor_mod(local_now.ns - base_.ns, cycle_.ns);
    }

    [[nodiscard]] std::size_t entry_index(SimTime local_now) const noexcept {
        const std::int64_t ph = phase(local_now);
        // Last start <= phase; zero-length entries are skipped by upper_bound.
        auto it = std::upper_bound(starts_.begin(), starts_.end(), ph);
        return static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
    }

    [[nodiscard]] GateMask gate_state(SimTime local_now) const noexcept {
        return entries_[entry_index(local_now)].gates;
    }

    [[nodiscard]] bool is_open(int queue, SimTime local_now) const noexcept {
        return (gate_state(local_now) >> queue) & 1u;
    }

    /// Time until the queue's gate next closes; Duration::infinite() if it never does.
    [[nodiscard]] Duration time_until_gate_close(int queue, SimTime local_now) const {
        if (!is_open(queue, local_now)) {
            throw std::logic_error(name_ + ": time_until_gate_close on a closed gate (queue " +
                                   std::to_string(queue) + ")");
        }
        const std::int64_t ph = phase(local_now);
        std::size_t i = entry_index(local_now);
        std::int64_t until = starts_[i] + entries_[i].duration.ns - ph;
        for (std::size_t step = 1; step <= entries_.size(); ++step) {
            const std::size_t j = (i + step) % entries_.size();
            if (!((entries_[j].gates >> queue) & 1u) && entries_[j].duration.ns > 0) {
                return Duration{until};
            }
            until += entries_[j].duration.ns;
        }
        return Duration::infinite();
    }

    /// Time until the next instant at which the gate mask changes;
    /// Duration::infinite() for a schedule with a single effective state.
    [[nodiscard]] Duration time_until_next_change(SimTime local_now) const {
        const std::int64_t ph = phase(local_now);
        const std::size_t i = entry_index(local_now);
        const GateMask current = entries_[i].gates;
        std::int64_t until = starts_[i] + entries_[i].duration.ns - ph;
        for (std::size_t step = 1; step <= entries_.size(); ++step) {
            const std::size_t j = (i + step) % entries_.size();
            if (entries_[j].gates != current && entries_[j].duration.ns > 0) return Duration{until};
            until += entries_[j].duration.ns;
        }
        return Duration::infinite();
    }

private:
    SimTime base_;
    Duration cycle_;
    std::vector<GateEntry> entries_;
    std::vector<std::int64_t> starts_;
    std::string name_;
};

inline GateMask gate_state(const GateControlList& gcl, SimTime local_now) {
    return gcl.gate_state(local_now);
}

inline Duration time_until_gate_close(const GateControlList& gcl, int queue, SimTime local_now) {
    return gcl.time_until_gate_close(queue, local_now);
}

}  // namespace tsn
