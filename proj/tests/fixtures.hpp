#pragma once

#include "tsnsim/tsnsim.hpp"

#include <string>
#include <vector>

namespace tsn::testing {

// Chain of nodes joined by equal links; `kinds[i]` names node i's role.
inline Topology chain(const std::vector<NodeKind>& kinds, SwitchTiming timing, BitsPerSecond capacity,
                      double length_m = 2.0) {
    Topology t;
    for (std::size_t i = 0; i < kinds.size(); ++i) {
        t.add_node({"n" + std::to_string(i), kinds[i], kinds[i] == NodeKind::Endpoint ? SwitchTiming{} : timing});
    }
    for (NodeId i = 0; i + 1 < kinds.size(); ++i) t.add_link({i, i + 1, capacity, length_m, kCopperSpeed});
    return t;
}

inline Frame frame(FlowId flow, NodeId src, NodeId dst, Bytes len, std::uint8_t prio = 0, std::uint64_t seq = 0) {
    Frame f;
    f.flow = flow;
    f.seq = seq;
    f.priority = prio;
    f.payload_len = len;
    f.wire_len = len;
    f.src = src;
    f.dst = dst;
    return f;
}

// Engine + network pair driven by hand.
struct Bench {
    Engine engine;
    Network net;
    std::vector<TxRecord> tx;
    std::vector<LatencyRecord> rx;

    explicit Bench(const Topology& t, ClockModel clock = ClockModel(0, 0), NetworkOptions opts = {})
        : net(t, engine, std::move(clock), opts) {
        engine.set_handler([this](const Event& ev) { net.handle(ev); });
        net.on_transmit = [this](const TxRecord& r) { tx.push_back(r); };
        net.on_deliver = [this](const LatencyRecord& r) { rx.push_back(r); };
    }
};

}  // namespace tsn::testing
