#pragma once

#include "tsnsim/delays.hpp"
#include "tsnsim/egress.hpp"
#include "tsnsim/gcl.hpp"

#include <optional>

namespace tsn {

/// Strict priority: head of the highest non-empty class. Never preempts.
inline std::optional<Selection> sp_select(const EgressPort& port) {
    for (int q = kNumTrafficClasses - 1; q >= 0; --q) {
        if (!port.queue(q).empty()) return Selection{q, 0};
    }
    return std::nullopt;
}

/// Occupancy/credit FIFO arbitration.
///
/// Classes are served in strict priority. Inside a class, every source
/// sub-FIFO with non-negative credit is eligible and the one holding the most
/// queued bytes wins (lowest source index on ties). The winner pays the
/// frame's wire length in credit. When every backlogged source is in debt,
/// all sources of the class receive one quantum, capped at credit_max, which
/// bounds how long a heavy source can monopolise the port.
inline std::optional<Selection> cbf_select(EgressPort& port) {
    const CbfParams& p = port.cbf();
    for (int q = kNumTrafficClasses - 1; q >= 0; --q) {
        TrafficClassQueue& cls = port.queue(q);
        if (cls.empty()) continue;
        for (;;) {
            std::optional<std::size_t> best;
            bool any_backlogged = false;
            for (std::size_t s = 0; s < cls.sources.size(); ++s) {
                const SubFifo& sf = cls.sources[s];
                if (sf.frames.empty()) continue;
                any_backlogged = true;
                if (sf.credit < 0) continue;
                if (!best || sf.bytes > cls.sources[*best].bytes) best = s;
            }
            if (!any_backlogged) break;
            if (best) {
                SubFifo& sf = cls.sources[*best];
                sf.credit = std::max(p.credit_min,
                                     sf.credit - static_cast<std::int64_t>(sf.frames.front().wire_len));
                return Selection{q, *best};
            }
            if (p.quantum <= 0) {
                // No replenishment configured: fall back to pure occupancy.
                std::size_t top = 0;
                for (std::size_t s = 1; s < cls.sources.size(); ++s) {
                    if (cls.sources[s].bytes > cls.sources[top].bytes) top = s;
                }
                return Selection{q, top};
            }
            for (auto& sf : cls.sources) sf.credit = std::min(p.credit_max, sf.credit + p.quantum);
        }
    }
    return std::nullopt;
}

/// Outcome of a time-aware selection: either a frame to send now, or the
/// local-clock delay after which eligibility may change (absent if only a new
/// arrival can change it).
struct TasDecision {
    std::optional<Selection> pick;
    std::optional<Duration> wake_after;
};

/// Time-aware selection with length-aware gating: a head frame is eligible
/// only if its queue's gate is open and its whole transmission ends before
/// that gate closes. This keeps the transmitter idle at every window start.
inline TasDecision tas_select(const EgressPort& port, SimTime local_now, BitsPerSecond capacity) {
    static const GateControlList kAlwaysOpen{};
    const GateControlList& gcl = port.gcl() ? *port.gcl() : kAlwaysOpen;
    const GateMask gates = gcl.gate_state(local_now);
    for (int q = kNumTrafficClasses - 1; q >= 0; --q) {
        if (port.queue(q).empty() || !((gates >> q) & 1u)) continue;
        const Frame& f = port.head(Selection{q, 0});
        const Duration needed = transmission_delay(f.wire_len, capacity);
        const Duration left = gcl.time_until_gate_close(q, local_now);
        if (left.is_infinite() || needed <= left) return {Selection{q, 0}, std::nullopt};
    }
    TasDecision d;
    if (!port.all_empty()) {
        const Duration next = gcl.time_until_next_change(local_now);
        if (!next.is_infinite()) d.wake_after = next;
    }
    return d;
}

}  // namespace tsn
