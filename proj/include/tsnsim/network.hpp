#pragma once

#include "tsnsim/clock.hpp"
#include "tsnsim/delays.hpp"
#include "tsnsim/egress.hpp"
#include "tsnsim/engine.hpp"
#include "tsnsim/frame.hpp"
#include "tsnsim/shapers.hpp"
#include "tsnsim/topology.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsn {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NetworkOptions {
    Bytes mtu = 1500;
    Bytes queue_capacity = kDefaultQueueCapacity;
    Policy default_policy = Policy::StrictPriority;
};

/// One serialized frame on one port direction, as seen by observers.
struct TxRecord {
    NodeId node = 0;
    PortId port = 0;
    int queue = 0;
    FlowId flow = 0;
    std::uint64_t frame_id = 0;
    SimTime start;        // global
    SimTime local_start;  // transmitting node's clock
    Duration length;      // serialization time
};

struct FlowCounters {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
};

/// Runtime state of a topology driven by an Engine: frame custody, per-port
/// egress queues, cut-through forwarding and receiver timestamping.
///
/// Timing per hop: a frame whose SFD reaches a forwarding node at t is
/// queued at its egress at t + ingress + processing. When selected at s the
/// port is busy over [s, s + d_t) and the next node sees the SFD at
/// s + egress + propagation. Frames originated by a bridged endpoint skip
/// the ingress term; plain endpoints have no internal latency.
class Network {
public:
    Network(const Topology& topo, Engine& engine, ClockModel clock, NetworkOptions opts = {})
        : topo_(topo), engine_(engine), clock_(std::move(clock)), opts_(opts) {
        topo_.validate();
        ports_.resize(topo_.size());
        for (NodeId n = 0; n < topo_.size(); ++n) {
            const std::size_t np = topo_.ports(n).size();
            const Policy pol = topo_.node(n).forwards() ? opts_.default_policy : Policy::StrictPriority;
            for (std::size_t p = 0; p < np; ++p) {
                ports_[n].emplace_back(pol, np + 1, opts_.queue_capacity);
            }
        }
    }

    void configure_port(NodeId node, PortId port, Policy policy,
                        std::optional<GateControlList> gcl = std::nullopt, CbfParams cbf = {}) {
        EgressPort fresh(policy, topo_.ports(node).size() + 1, opts_.queue_capacity);
        fresh.set_cbf(cbf);
        if (gcl) fresh.set_gcl(std::move(*gcl));
        ports_.at(node).at(port) = std::move(fresh);
    }

    [[nodiscard]] const Topology& topology() const noexcept { return topo_; }
    [[nodiscard]] const ClockModel& clock() const noexcept { return clock_; }
    [[nodiscard]] const NetworkOptions& options() const noexcept { return opts_; }
    [[nodiscard]] const EgressPort& port(NodeId n, PortId p) const { return ports_.at(n).at(p); }
    [[nodiscard]] EgressPort& port(NodeId n, PortId p) { return ports_.at(n).at(p); }

    [[nodiscard]] SimTime local_time(NodeId n, SimTime t) const { return clock_.local_time(n, t); }

    /// Host-side source index used for frames a node originates itself.
    [[nodiscard]] std::size_t host_source(NodeId n) const { return topo_.ports(n).size(); }

    FlowId register_flow(bool record) {
        counters_.emplace_back();
        records_.emplace_back();
        record_flags_.push_back(record);
        return static_cast<FlowId>(counters_.size() - 1);
    }

    [[nodiscard]] const std::vector<FlowCounters>& counters() const noexcept { return counters_; }
    [[nodiscard]] const std::vector<LatencyRecord>& records(FlowId f) const { return records_.at(f); }
    std::vector<LatencyRecord> take_records(FlowId f) { return std::exchange(records_.at(f), {}); }

    std::function<void(const TxRecord&)> on_transmit;
    std::function<void(const LatencyRecord&)> on_deliver;

    /// Hands a frame from its source host to the network at global time
    /// `release` (>= now). The sender timestamp is taken at SFD emission: at
    /// release for bridged endpoints, at transmission start for plain ones.
    void inject(Frame f, SimTime release) {
        if (f.flow >= counters_.size()) throw std::out_of_range("inject: unregistered flow");
        if (f.wire_len > opts_.mtu) {
            throw ConfigError("frame of " + std::to_string(f.wire_len) + " B exceeds MTU " +
                              std::to_string(opts_.mtu));
        }
        if (f.priority >= kNumTrafficClasses) throw ConfigError("priority must be in 0..7");
        f.id = next_frame_id_++;
        ++counters_[f.flow].generated;
        const NodeId src = f.src;
        if (src == f.dst) {
            f.tx_local_time = clock_.local_time(src, release);
            deliver(f.dst, f, release);
            return;
        }
        const auto out = topo_.next_port(src, f.dst);
        if (!out) throw ConfigError("no forwarding entry from '" + topo_.node(src).name + "'");
        f.ingress_port = static_cast<PortId>(host_source(src));
        SimTime ready = release;
        if (topo_.node(src).kind != NodeKind::Endpoint) {
            f.tx_local_time = clock_.local_time(src, release);
            ready = release + topo_.node(src).timing.processing;
        }
        const std::uint64_t slot = park(std::move(f));
        engine_.schedule(ready, EventKind::EgressEligible, src, *out, slot);
    }

    /// Dispatches the event kinds the network owns. Returns false for others.
    bool handle(const Event& ev) {
        switch (ev.kind) {
            case EventKind::SfdArrival: on_sfd(ev); return true;
            case EventKind::EgressEligible: on_eligible(ev); return true;
            case EventKind::TransmitComplete: {
                EgressPort& p = port(ev.node, ev.port);
                p.busy = false;
                try_start(ev.node, ev.port);
                return true;
            }
            case EventKind::GateChange: {
                EgressPort& p = port(ev.node, ev.port);
                if (p.pending_wake && *p.pending_wake == ev.seq) p.pending_wake.reset();
                try_start(ev.node, ev.port);
                return true;
            }
            default: return false;
        }
    }

    /// Frame lands in its egress queue; drops on overflow.
    void ingest_frame(NodeId node, PortId egress, Frame f) {
        EgressPort& p = port(node, egress);
        const int q = topo_.pcp_to_queue[f.priority];
        const FlowId flow = f.flow;
        f.enqueued_at = engine_.now();
        if (!p.enqueue(q, f.ingress_port, std::move(f))) {
            ++counters_[flow].dropped;
        }
        try_start(node, egress);
    }

    /// Starts serializing `f` on an idle port at the current engine time.
    void begin_transmission(NodeId node, PortId port_id, int queue, Frame f) {
        EgressPort& p = port(node, port_id);
        const SimTime start = engine_.now();
        if (p.busy) throw EngineError("overlapping transmissions on one port");
        const PortRef& pr = topo_.ports(node).at(port_id);
        const Link& link = topo_.link(pr.link);
        const Duration dt = transmission_delay(f.wire_len, link.capacity);
        const Node& n = topo_.node(node);
        if (n.kind == NodeKind::Endpoint && f.src == node) {
            f.tx_local_time = clock_.local_time(node, start);
        }
        if (on_transmit) {
            on_transmit(TxRecord{node, port_id, queue, f.flow, f.id, start, clock_.local_time(node, start), dt});
        }
        p.busy = true;
        p.busy_until = start + dt;
        engine_.schedule(p.busy_until, EventKind::TransmitComplete, node, port_id);
        const Duration egress = n.forwards() ? n.timing.egress : Duration::zero();
        const PortId in_port = topo_.peer_port(node, port_id);
        f.ingress_port = in_port;
        const std::uint64_t slot = park(std::move(f));
        engine_.schedule(start + egress + link.propagation(), EventKind::SfdArrival, pr.neighbor, in_port, slot);
    }

    /// Receiver hardware timestamp at SFD arrival.
    LatencyRecord deliver(NodeId endpoint, Frame& f, SimTime sfd_time) {
        f.sfd_rx_time = clock_.local_time(endpoint, sfd_time);
        LatencyRecord r{f.flow, f.seq, f.tx_local_time, f.sfd_rx_time, f.sfd_rx_time - f.tx_local_time};
        ++counters_[f.flow].delivered;
        if (record_flags_[f.flow]) records_[f.flow].push_back(r);
        if (on_deliver) on_deliver(r);
        return r;
    }

    /// Frames currently held anywhere in the network, per flow.
    [[nodiscard]] std::vector<std::uint64_t> in_flight_by_flow() const {
        std::vector<std::uint64_t> out(counters_.size(), 0);
        for (std::size_t i = 0; i < slots_.size(); ++i) {
            if (live_[i]) ++out[slots_[i].flow];
        }
        for (const auto& node_ports : ports_) {
            for (const auto& p : node_ports) {
                for (int q = 0; q < kNumTrafficClasses; ++q) {
                    for (const auto& s : p.queue(q).sources) {
                        for (const auto& f : s.frames) ++out[f.flow];
                    }
                }
            }
        }
        return out;
    }

    [[nodiscard]] std::uint64_t total_drops() const {
        std::uint64_t n = 0;
        for (const auto& c : counters_) n += c.dropped;
        return n;
    }

private:
    std::uint64_t park(Frame f) {
        if (!free_.empty()) {
            const std::uint64_t s = free_.back();
            free_.pop_back();
            slots_[s] = std::move(f);
            live_[s] = true;
            return s;
        }
        slots_.push_back(std::move(f));
        live_.push_back(true);
        return slots_.size() - 1;
    }

    Frame unpark(std::uint64_t slot) {
        live_.at(slot) = false;
        free_.push_back(slot);
        return std::move(slots_[slot]);
    }

    void on_sfd(const Event& ev) {
        Frame f = unpark(ev.ref);
        const Node& n = topo_.node(ev.node);
        if (f.dst == ev.node) {
            // A bridged endpoint hands the frame to its host after its ingress pipeline.
            const SimTime at = n.forwards() ? ev.fire_at + n.timing.ingress + n.timing.processing : ev.fire_at;
            deliver(ev.node, f, at);
            return;
        }
        if (!n.forwards()) {
            throw ConfigError("frame for '" + topo_.node(f.dst).name + "' reached endpoint '" + n.name + "'");
        }
        const auto out = topo_.next_port(ev.node, f.dst);
        if (!out) throw ConfigError("switch '" + n.name + "' has no forwarding entry for the destination");
        f.ingress_port = ev.port;
        const std::uint64_t slot = park(std::move(f));
        engine_.schedule(ev.fire_at + n.timing.ingress + n.timing.processing, EventKind::EgressEligible,
                         ev.node, *out, slot);
    }

    void on_eligible(const Event& ev) { ingest_frame(ev.node, ev.port, unpark(ev.ref)); }

    void try_start(NodeId node, PortId port_id) {
        EgressPort& p = port(node, port_id);
        if (p.busy) return;
        std::optional<Selection> pick;
        switch (p.policy()) {
            case Policy::StrictPriority: pick = sp_select(p); break;
            case Policy::CreditBasedFifo: pick = cbf_select(p); break;
            case Policy::TimeAware: {
                const SimTime now = engine_.now();
                const SimTime local = clock_.local_time(node, now);
                const Link& link = topo_.link(topo_.ports(node)[port_id].link);
                TasDecision d = tas_select(p, local, link.capacity);
                pick = d.pick;
                if (!pick && d.wake_after) {
                    SimTime wake = clock_.to_global(node, local + *d.wake_after);
                    if (wake <= now) wake = now + nanoseconds(1);
                    if (p.pending_wake) engine_.cancel(*p.pending_wake);
                    p.pending_wake = engine_.schedule(wake, EventKind::GateChange, node, port_id);
                }
                break;
            }
        }
        if (!pick) return;
        begin_transmission(node, port_id, pick->queue, p.pop(*pick));
    }

    Topology topo_;
    Engine& engine_;
    ClockModel clock_;
    NetworkOptions opts_;
    std::vector<std::vector<EgressPort>> ports_;
    std::vector<Frame> slots_;
    std::vector<bool> live_;
    std::vector<std::uint64_t> free_;
    std::vector<FlowCounters> counters_;
    std::vector<std::vector<LatencyRecord>> records_;
    std::vector<bool> record_flags_;
    std::uint64_t next_frame_id_ = 0;
};

}  // namespace tsn
