#pragma once

#include "tsnsim/frame.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/time.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <optional>
#include <vector>

namespace tsn {

enum class Policy { CreditBasedFifo, StrictPriority, TimeAware };

inline const char* to_string(Policy p) {
    switch (p) {
        case Policy::CreditBasedFifo: return "CBF";
        case Policy::StrictPriority: return "SP";
        case Policy::TimeAware: return "TAS";
    }
    return "?";
}

/// Occupancy/credit arbitration knobs. Credits are kept per (class, source).
struct CbfParams {
    std::int64_t quantum = 32 * 1024;
    std::int64_t credit_min = -32 * 1024;
    std::int64_t credit_max = 32 * 1024;
};

inline constexpr Bytes kDefaultQueueCapacity = 512 * 1024;

/// FIFO of frames from one ingress source within a traffic class. Non-CBF
/// policies keep every frame of a class in source 0, i.e. one plain FIFO.
struct SubFifo {
    std::deque<Frame> frames;
    Bytes bytes = 0;
    std::int64_t credit = 0;
};

struct TrafficClassQueue {
    std::vector<SubFifo> sources;
    Bytes bytes = 0;
    std::size_t frames = 0;
    std::uint64_t drops = 0;

    [[nodiscard]] bool empty() const noexcept { return frames == 0; }
};

/// Where the selected frame sits: traffic class and source sub-FIFO.
struct Selection {
    int queue = 0;
    std::size_t source = 0;
};

/// Egress side of one port direction: eight byte-bounded traffic-class
/// queues, the selection policy that drains them, and the busy state of the
/// transmitter.
class EgressPort {
public:
    EgressPort() : EgressPort(Policy::StrictPriority, 1) {}

    EgressPort(Policy policy, std::size_t source_count, Bytes capacity = kDefaultQueueCapacity)
        : policy_(policy), capacity_(capacity) {
        const std::size_t n = policy == Policy::CreditBasedFifo ? std::max<std::size_t>(1, source_count) : 1;
        for (auto& q : classes_) {
            q.sources.resize(n);
            for (auto& s : q.sources) s.credit = cbf_.credit_max;
        }
    }

    [[nodiscard]] Policy policy() const noexcept { return policy_; }
    [[nodiscard]] Bytes capacity() const noexcept { return capacity_; }

    void set_cbf(CbfParams p) {
        cbf_ = p;
        for (auto& q : classes_) {
            for (auto& s : q.sources) s.credit = p.credit_max;
        }
    }
    [[nodiscard]] const CbfParams& cbf() const noexcept { return cbf_; }

    void set_gcl(GateControlList g) { gcl_ = std::move(g); }
    [[nodiscard]] const std::optional<GateControlList>& gcl() const noexcept { return gcl_; }

    /// Appends the frame to its class queue. Returns false (and counts a
    /// drop) if it would exceed the byte capacity.
    bool enqueue(int queue, std::size_t source, Frame f) {
        TrafficClassQueue& q = classes_.at(static_cast<std::size_t>(queue));
        if (q.bytes + f.wire_len > capacity_) {
            ++q.drops;
            return false;
        }
        SubFifo& s = q.sources[policy_ == Policy::CreditBasedFifo ? std::min(source, q.sources.size() - 1) : 0];
        q.bytes += f.wire_len;
        ++q.frames;
        s.bytes += f.wire_len;
        s.frames.push_back(std::move(f));
        return true;
    }

    [[nodiscard]] const Frame& head(Selection sel) const {
        return classes_.at(static_cast<std::size_t>(sel.queue)).sources.at(sel.source).frames.front();
    }

    Frame pop(Selection sel) {
        TrafficClassQueue& q = classes_.at(static_cast<std::size_t>(sel.queue));
        SubFifo& s = q.sources.at(sel.source);
        Frame f = std::move(s.frames.front());
        s.frames.pop_front();
        s.bytes -= f.wire_len;
        q.bytes -= f.wire_len;
        --q.frames;
        return f;
    }

    [[nodiscard]] const TrafficClassQueue& queue(int q) const { return classes_.at(static_cast<std::size_t>(q)); }
    TrafficClassQueue& queue(int q) { return classes_.at(static_cast<std::size_t>(q)); }

    [[nodiscard]] bool all_empty() const noexcept {
        return std::all_of(classes_.begin(), classes_.end(), [](const auto& q) { return q.empty(); });
    }

    [[nodiscard]] std::uint64_t drops() const noexcept {
        std::uint64_t n = 0;
        for (const auto& q : classes_) n += q.drops;
        return n;
    }

    // Transmitter state.
    bool busy = false;
    SimTime busy_until{};
    std::optional<std::uint64_t> pending_wake;  // engine id of a scheduled gate wake-up

private:
    Policy policy_;
    Bytes capacity_;
    CbfParams cbf_{};
    std::optional<GateControlList> gcl_;
    std::array<TrafficClassQueue, kNumTrafficClasses> classes_{};
};

}  // namespace tsn
