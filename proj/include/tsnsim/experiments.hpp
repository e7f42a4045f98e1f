#pragma once

#include "tsnsim/analytics.hpp"
#include "tsnsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsn {

// ---------------------------------------------------------------------------
// Switch constant calibration

/// Measured no-load delays of the two-actuator chain and the link
/// propagation constants they include.
struct CalibrationTarget {
    Duration k1;                // A1 -> RC: processing + egress + link(A1,RC)
    Duration k2;                // A2 -> RC: K1 + link(A2,A1) + ingress + processing + egress
    Duration link_near{10};     // propagation A1 -> RC
    Duration link_far{10};      // propagation A2 -> A1
    double processing_share = 0.4;  // fraction of processing+egress assigned to processing
};

/// Solves the chain's no-load delays for one switch-constant set shared by
/// both bridged endpoints. Only the sums are observable; the processing vs
/// egress split follows `processing_share`.
inline SwitchTiming calibrate(const CalibrationTarget& t) {
    if (t.processing_share < 0.0 || t.processing_share > 1.0) {
        throw std::invalid_argument("calibrate: processing_share must lie in [0, 1]");
    }
    const Duration pe = t.k1 - t.link_near;
    const Duration ingress = t.k2 - t.k1 - pe - t.link_far;
    if (pe.ns < 0) throw std::invalid_argument("calibrate: K1 is smaller than the link propagation");
    if (ingress.ns < 0) throw std::invalid_argument("calibrate: K2 too small for K1 (negative ingress delay)");
    SwitchTiming s;
    s.processing = Duration{std::llround(static_cast<double>(pe.ns) * t.processing_share)};
    s.egress = pe - s.processing;
    s.ingress = ingress;
    return s;
}

// ---------------------------------------------------------------------------
// TAS schedule synthesis

/// Global-time offset from a flow's release to the moment its frame lands
/// in the egress queue of each hop, assuming empty queues everywhere.
inline std::vector<Duration> enqueue_offsets(const PathModel& path) {
    std::vector<Duration> out;
    Duration t{};
    for (std::size_t i = 0; i < path.hops.size(); ++i) {
        const PathHop& h = path.hops[i];
        if (h.sender_forwards) {
            if (!h.sender_is_source) t += h.sender_timing.ingress;
            t += h.sender_timing.processing;
        }
        out.push_back(t);
        if (h.sender_forwards) t += h.sender_timing.egress;
        t += h.propagation;
    }
    return out;
}

struct ScheduleOptions {
    Duration cycle = milliseconds(1);
    Duration margin = microseconds(1);   // slack on each side of a window
    GateMask scheduled = 0x80;           // classes that get exclusive windows
};

/// Exclusive-window GCL for one egress port. Every periodic flow in a
/// scheduled class crossing the port gets a window
/// [enqueue - margin, enqueue + d_t + margin) per occurrence in the cycle,
/// during which only scheduled classes are open; all other classes are open
/// outside the windows.
inline GclConfig synthesize_gcl(const ScenarioConfig& c, const std::string& node, const std::string& toward,
                                const ScheduleOptions& opt = {}) {
    std::vector<std::string> errs;
    Topology t = build_topology(c, errs);
    if (!errs.empty()) throw ConfigValidationError(errs);
    const auto n = t.find(node);
    const auto nb = t.find(toward);
    if (!n || !nb || !t.port_toward_neighbor(*n, *nb)) {
        throw std::invalid_argument("synthesize_gcl: no port " + node + "->" + toward);
    }
    const PortId port = *t.port_toward_neighbor(*n, *nb);
    const std::int64_t cycle = opt.cycle.ns;

    std::vector<std::pair<std::int64_t, std::int64_t>> windows;  // [start, end) in phase, may exceed cycle
    for (const auto& f : c.flows) {
        if (f.type != FlowType::Periodic) continue;
        const int q = t.pcp_to_queue[f.priority];
        if (!((opt.scheduled >> q) & 1u)) continue;
        if (cycle % f.period_ns != 0) {
            throw std::invalid_argument("synthesize_gcl: period of '" + f.name + "' does not divide the cycle");
        }
        const NodeId s = *t.find(f.src);
        const NodeId d = *t.find(f.dst);
        const auto hops = t.path(s, d);
        const PathModel pm = path_model(t, s, d);
        const auto offs = enqueue_offsets(pm);
        for (std::size_t i = 0; i < hops.size(); ++i) {
            if (hops[i].node != *n || hops[i].port != port) continue;
            const Duration dt = transmission_delay(f.payload + c.header_overhead, pm.hops[i].capacity);
            for (std::int64_t rep = 0; rep < cycle / f.period_ns; ++rep) {
                const std::int64_t at = f.phase_ns + rep * f.period_ns + offs[i].ns;
                const std::int64_t start = floor_mod(at - opt.margin.ns, cycle);
                const std::int64_t len = dt.ns + 2 * opt.margin.ns;
                windows.emplace_back(start, start + len);
            }
        }
    }
    GclConfig g;
    g.base_time_ns = 0;
    g.cycle_ns = cycle;
    const GateMask open_rest = static_cast<GateMask>(~opt.scheduled);
    if (windows.empty()) {
        g.entries.push_back({opt.cycle, open_rest});
        return g;
    }
    // Split wrap-around windows, then merge overlaps.
    std::vector<std::pair<std::int64_t, std::int64_t>> flat;
    for (auto [a, b] : windows) {
        if (b - a >= cycle) throw std::invalid_argument("synthesize_gcl: windows cover the whole cycle");
        if (b <= cycle) flat.emplace_back(a, b);
        else {
            flat.emplace_back(a, cycle);
            flat.emplace_back(0, b - cycle);
        }
    }
    std::sort(flat.begin(), flat.end());
    std::vector<std::pair<std::int64_t, std::int64_t>> merged;
    for (auto w : flat) {
        if (!merged.empty() && w.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, w.second);
        } else {
            merged.push_back(w);
        }
    }
    std::int64_t cursor = 0;
    for (auto [a, b] : merged) {
        if (a > cursor) g.entries.push_back({nanoseconds(a - cursor), open_rest});
        g.entries.push_back({nanoseconds(b - a), opt.scheduled});
        cursor = b;
    }
    if (cursor < cycle) g.entries.push_back({nanoseconds(cycle - cursor), open_rest});
    return g;
}

// ---------------------------------------------------------------------------
// Presets for the robot-arm chain S -> A2 -> A1 -> RC

enum class Experiment { SamePriorityBlocking = 1, LowerPriorityBlocking = 2, TimeAwareShaper = 3 };

enum class LinkSpeed { Fast100M, Gigabit };

inline BitsPerSecond bits_per_second(LinkSpeed s) { return s == LinkSpeed::Gigabit ? 1'000'000'000 : 100'000'000; }

/// No-load means the switch constants are calibrated against.
inline CalibrationTarget calibration_target(LinkSpeed s) {
    CalibrationTarget t;
    if (s == LinkSpeed::Fast100M) {
        t.k1 = nanoseconds(3830);
        t.k2 = nanoseconds(9350);
    } else {
        t.k1 = nanoseconds(1060);
        t.k2 = nanoseconds(2400);
    }
    return t;
}

inline std::string preset_name(Experiment e, LinkSpeed s) {
    return "exp" + std::to_string(static_cast<int>(e)) + (s == LinkSpeed::Gigabit ? "_1g" : "_100m");
}

inline constexpr std::int64_t kActuatorPeriodNs = 1'000'000;
inline constexpr std::int64_t kA1PhaseNs = 500'000;  // keeps F_A1 and F_A2 apart at A1 when idle

inline ScenarioConfig make_preset(Experiment e, LinkSpeed speed) {
    ScenarioConfig c;
    c.name = preset_name(e, speed);
    const BitsPerSecond rate = bits_per_second(speed);
    const SwitchTiming timing = calibrate(calibration_target(speed));
    c.nodes = {{"S", NodeKind::Endpoint, {}},
               {"A2", NodeKind::BridgedEndpoint, timing},
               {"A1", NodeKind::BridgedEndpoint, timing},
               {"RC", NodeKind::Endpoint, {}}};
    c.links = {{"S", "A2", rate, 2.0, kCopperSpeed},
               {"A2", "A1", rate, 2.0, kCopperSpeed},
               {"A1", "RC", rate, 2.0, kCopperSpeed}};
    const std::uint8_t actuator_prio = e == Experiment::SamePriorityBlocking ? 0 : 7;
    FlowConfig fa1{"F_A1", FlowType::Periodic, "A1", "RC", 256, actuator_prio, kActuatorPeriodNs, kA1PhaseNs};
    FlowConfig fa2{"F_A2", FlowType::Periodic, "A2", "RC", 256, actuator_prio, kActuatorPeriodNs, 0};
    FlowConfig fs{"F_S", FlowType::Saturating, "S", "RC", 1500, 0};
    fs.rate_bps = rate / 10 * 9;
    fs.record = false;
    // Pacing noise of a user-space load generator; keeps the load from phase-locking
    // to the 1 ms actuator period.
    fs.release_jitter_ns = static_cast<std::int64_t>(10'000'000'000'000ull / rate);
    c.flows = {fa1, fa2, fs};
    switch (e) {
        case Experiment::SamePriorityBlocking:
            c.description = "Same-priority blocking: all flows best-effort, CBF arbitration";
            c.default_policy = Policy::CreditBasedFifo;
            break;
        case Experiment::LowerPriorityBlocking:
            c.description = "Lower-priority blocking: actuators in ST under strict priority";
            c.default_policy = Policy::StrictPriority;
            break;
        case Experiment::TimeAwareShaper:
            c.description = "Time-aware shaper on both actuator egress ports toward RC";
            c.default_policy = Policy::StrictPriority;
            for (auto [node, toward] : {std::pair{"A2", "A1"}, std::pair{"A1", "RC"}}) {
                PortConfig p{node, toward, Policy::TimeAware, std::nullopt};
                p.gcl = synthesize_gcl(c, node, toward);
                c.ports.push_back(std::move(p));
            }
            break;
    }
    c.output.dir = "out/" + c.name;
    return c;
}

/// Copy of `c` with every saturating flow removed (the "no load" rows).
inline ScenarioConfig without_load(ScenarioConfig c) {
    std::erase_if(c.flows, [](const FlowConfig& f) { return f.type == FlowType::Saturating; });
    return c;
}

}  // namespace tsn
