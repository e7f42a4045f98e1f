#pragma once

#include "tsnsim/delays.hpp"
#include "tsnsim/frame.hpp"
#include "tsnsim/time.hpp"
#include "tsnsim/topology.hpp"

#include <cmath>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsn {

/// One link traversal with the constants of the node driving it.
struct PathHop {
    BitsPerSecond capacity = 0;
    Duration propagation{};
    bool sender_forwards = false;  // sender is a switch or bridged endpoint
    bool sender_is_source = false;
    SwitchTiming sender_timing{};
};

/// Closed-form view of a forwarding path, source to destination.
struct PathModel {
    std::vector<PathHop> hops;
    bool destination_forwards = false;
    SwitchTiming destination_timing{};
};

inline PathModel path_model(const Topology& topo, NodeId src, NodeId dst) {
    PathModel pm;
    for (const Hop& h : topo.path(src, dst)) {
        const Node& n = topo.node(h.node);
        const Link& l = topo.link(h.link);
        pm.hops.push_back({l.capacity, l.propagation(), n.forwards(), h.node == src, n.timing});
    }
    const Node& d = topo.node(dst);
    pm.destination_forwards = d.forwards() && src != dst;
    pm.destination_timing = d.timing;
    return pm;
}

/// Constant part of the SFD-to-SFD delay with every queue empty: link
/// propagation plus per-switch ingress/processing/egress. Transmission
/// delays never appear (cut-through, SFD timestamps). A bridged-endpoint
/// source contributes processing + egress only.
inline Duration e2e_zero_queue(const PathModel& path) {
    Duration k{};
    for (const PathHop& h : path.hops) {
        if (h.sender_forwards) {
            if (!h.sender_is_source) k += h.sender_timing.ingress;
            k += h.sender_timing.processing + h.sender_timing.egress;
        }
        k += h.propagation;
    }
    if (path.destination_forwards) k += path.destination_timing.ingress + path.destination_timing.processing;
    return k;
}

/// A bound with its per-hop composition kept visible.
struct BoundBreakdown {
    std::vector<Duration> per_hop;  // one entry per path hop
    Duration total{};
};

/// Worst-case wait behind an in-progress lower-priority frame: one MTU
/// transmission per traversed bridge egress port, accumulated along the path.
inline BoundBreakdown wc_lower_priority_blocking(const PathModel& path, Bytes mtu) {
    BoundBreakdown b;
    for (const PathHop& h : path.hops) {
        const Duration d = h.sender_forwards ? transmission_delay(mtu, h.capacity) : Duration::zero();
        b.per_hop.push_back(d);
        b.total += d;
    }
    return b;
}

/// A same-class frame that can be queued ahead at hop `hop`.
struct Competitor {
    std::size_t hop = 0;
    Bytes wire_len = 0;
};

inline BoundBreakdown wc_same_priority_blocking(const PathModel& path, std::span<const Competitor> competitors) {
    BoundBreakdown b;
    b.per_hop.assign(path.hops.size(), Duration::zero());
    for (const Competitor& c : competitors) {
        if (c.hop >= path.hops.size()) throw std::out_of_range("competitor hop outside the path");
        const Duration d = transmission_delay(c.wire_len, path.hops[c.hop].capacity);
        b.per_hop[c.hop] += d;
        b.total += d;
    }
    return b;
}

/// Simplified line-topology cycle time: every device sends one input frame
/// and receives one output frame over the controller link, and the farthest
/// device sits device_count hops away in each direction.
inline Duration cycle_time_estimate(std::size_t device_count, Bytes per_device_payload, BitsPerSecond capacity,
                                    Duration per_hop_constant) {
    if (device_count == 0) throw std::invalid_argument("cycle_time_estimate: device_count must be >= 1");
    const auto n = static_cast<std::int64_t>(device_count);
    const Duration serialized = transmission_delay(per_device_payload, capacity) * (2 * n);
    return serialized + per_hop_constant * (2 * n);
}

/// Min/Max/Mean/Std/Max-Min of a delay sample (population std).
struct StatsSummary {
    Duration min{};
    Duration max{};
    double mean_ns = 0.0;
    double std_ns = 0.0;
    Duration max_minus_min{};
    std::size_t count = 0;
};

/// Exact-integer moments: sums are accumulated in 128-bit integers, so the
/// only rounding happens in the final division and square root.
inline StatsSummary summarize(std::span<const Duration> samples) {
    if (samples.empty()) throw std::invalid_argument("summarize: empty sample");
    StatsSummary s;
    s.min = s.max = samples.front();
    __int128 sum = 0;
    __int128 sum_sq = 0;
    for (Duration d : samples) {
        if (d < s.min) s.min = d;
        if (d > s.max) s.max = d;
        sum += d.ns;
        sum_sq += static_cast<__int128>(d.ns) * d.ns;
    }
    const auto n = static_cast<__int128>(samples.size());
    s.count = samples.size();
    s.mean_ns = static_cast<double>(static_cast<long double>(sum) / static_cast<long double>(n));
    // n^2 * variance = n * sum_sq - sum^2, exact.
    const __int128 scaled_var = n * sum_sq - sum * sum;
    s.std_ns = static_cast<double>(std::sqrt(static_cast<long double>(scaled_var)) / static_cast<long double>(n));
    s.max_minus_min = s.max - s.min;
    return s;
}

inline StatsSummary summarize(std::span<const LatencyRecord> records) {
    std::vector<Duration> d;
    d.reserve(records.size());
    for (const auto& r : records) d.push_back(r.delay);
    return summarize(std::span<const Duration>(d));
}

/// Microseconds with two decimals.
inline std::string format_us(double ns) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", std::round(ns / 10.0) / 100.0);
    return buf;
}

inline std::string format_us(Duration d) { return format_us(static_cast<double>(d.ns)); }

}  // namespace tsn
