#pragma once

#include "tsnsim/time.hpp"

#include <cstdint>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace tsn {

enum class EventKind : std::uint8_t {
    SfdArrival,        // first bit of a frame reaches a node's ingress
    EgressEligible,    // frame lands in an egress queue after ingress+processing
    TransmitComplete,  // port finished serializing a frame
    GateChange,        // TAS wake-up at a gate control list boundary
    GeneratorTick,     // traffic source releases a frame
    MeasurementFlush,  // end-of-run bookkeeping
};

using EventId = std::uint64_t;

struct Event {
    SimTime fire_at;
    EventId seq = 0;
    EventKind kind = EventKind::GeneratorTick;
    std::uint32_t node = 0;
    std::uint32_t port = 0;
    std::uint64_t ref = 0;  // frame slot or flow index, depending on kind
};

/// Raised when the model asks for something the engine cannot honour, such
/// as an event in the past. Always indicates a bug in the caller.
class EngineError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Single-threaded discrete-event loop ordered by (fire_at, seq).
///
/// Sequence numbers are assigned at insertion, so events sharing a timestamp
/// run in FIFO order. Cancellation is lazy: cancelled ids are skipped when
/// they reach the head of the queue.
class Engine {
public:
    using Handler = std::function<void(const Event&)>;

    Engine() = default;
    explicit Engine(Handler h) : handler_(std::move(h)) {}

    void set_handler(Handler h) { handler_ = std::move(h); }

    [[nodiscard]] SimTime now() const noexcept { return now_; }

    EventId schedule(SimTime fire_at, EventKind kind, std::uint32_t node = 0,
                     std::uint32_t port = 0, std::uint64_t ref = 0) {
        if (fire_at < now_) {
            throw EngineError("past event: fire_at " + std::to_string(fire_at.ns) +
                              " < now " + std::to_string(now_.ns));
        }
        Event ev{fire_at, next_seq_++, kind, node, port, ref};
        queue_.push(ev);
        return ev.seq;
    }

    EventId schedule(const Event& ev) {
        return schedule(ev.fire_at, ev.kind, ev.node, ev.port, ev.ref);
    }

    /// The id must refer to a still-pending event; the caller owns that
    /// bookkeeping (the queue does not remember fired ids).
    bool cancel(EventId id) {
        if (id >= next_seq_) return false;
        return cancelled_.insert(id).second;
    }

    /// Processes every event with fire_at <= t_end, then parks the clock at
    /// t_end. Returns the number of handler invocations.
    std::uint64_t run_until(SimTime t_end) {
        if (t_end < now_) {
            throw EngineError("run_until target precedes current time");
        }
        std::uint64_t steps = 0;
        while (!queue_.empty() && queue_.top().fire_at <= t_end) {
            const Event ev = queue_.top();
            queue_.pop();
            if (auto it = cancelled_.find(ev.seq); it != cancelled_.end()) {
                cancelled_.erase(it);
                continue;
            }
            now_ = ev.fire_at;
            mix_trace(ev);
            if (trace_enabled_) trace_.push_back(ev);
            ++steps;
            if (handler_) handler_(ev);
        }
        now_ = t_end;
        total_steps_ += steps;
        return steps;
    }

    [[nodiscard]] std::size_t pending() const noexcept { return queue_.size() - cancelled_.size(); }
    [[nodiscard]] std::uint64_t total_steps() const noexcept { return total_steps_; }

    /// FNV-1a digest over every processed event; equal digests mean equal traces.
    [[nodiscard]] std::uint64_t trace_digest() const noexcept { return digest_; }

    void enable_trace(bool on = true) { trace_enabled_ = on; }
    [[nodiscard]] const std::vector<Event>& trace() const noexcept { return trace_; }

private:
    struct Later {
        bool operator()(const Event& a, const Event& b) const noexcept {
            if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
            return a.seq > b.seq;
        }
    };

    void mix(std::uint64_t v) noexcept {
        for (int i = 0; i < 8; ++i) {
            digest_ ^= (v >> (8 * i)) & 0xffu;
            digest_ *= 0x100000001b3ull;
        }
    }

    void mix_trace(const Event& ev) noexcept {
        mix(static_cast<std::uint64_t>(ev.fire_at.ns));
        mix(ev.seq);
        mix(static_cast<std::uint64_t>(ev.kind));
        mix((static_cast<std::uint64_t>(ev.node) << 32) | ev.port);
        mix(ev.ref);
    }

    Handler handler_;
    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::unordered_set<EventId> cancelled_;
    SimTime now_{};
    EventId next_seq_ = 0;
    std::uint64_t total_steps_ = 0;
    std::uint64_t digest_ = 0xcbf29ce484222325ull;
    bool trace_enabled_ = false;
    std::vector<Event> trace_;
};

}  // namespace tsn
