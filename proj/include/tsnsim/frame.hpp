#pragma once

#include "tsnsim/delays.hpp"
#include "tsnsim/time.hpp"

#include <cstdint>

namespace tsn {

using NodeId = std::uint32_t;
using PortId = std::uint32_t;
using FlowId = std::uint32_t;

inline constexpr int kNumTrafficClasses = 8;

struct Frame {
    std::uint64_t id = 0;
    FlowId flow = 0;
    std::uint64_t seq = 0;  // per-flow sequence number
    std::uint8_t priority = 0;
    Bytes payload_len = 0;
    Bytes wire_len = 0;
    NodeId src = 0;
    NodeId dst = 0;
    SimTime tx_local_time{};  // sender's clock at SFD emission
    SimTime sfd_rx_time{};    // receiver's clock at SFD arrival, set on delivery

    // Bookkeeping for the current hop; not part of the frame on the wire.
    PortId ingress_port = 0;
    SimTime enqueued_at{};
};

/// Receiver-side hardware timestamp record for one delivered frame.
struct LatencyRecord {
    FlowId flow = 0;
    std::uint64_t seq = 0;
    SimTime t_tx;  // sender local clock
    SimTime t_rx;  // receiver local clock
    Duration delay;
};

}  // namespace tsn
