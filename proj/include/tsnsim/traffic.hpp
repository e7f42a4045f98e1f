#pragma once

#include "tsnsim/delays.hpp"
#include "tsnsim/engine.hpp"
#include "tsnsim/frame.hpp"
#include "tsnsim/network.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace tsn {

/// Fixed-rate control traffic: frame k leaves at local time phase + k * period.
struct PeriodicFlowParams {
    std::string name;
    NodeId src = 0;
    NodeId dst = 0;
    Bytes payload = 256;
    Duration period = milliseconds(1);
    Duration phase{};
    std::uint8_t priority = 0;
    std::optional<std::uint64_t> count;  // unlimited within the run if absent
    bool record = true;

    void validate() const {
        if (period.ns <= 0) throw ConfigError(name + ": period must be positive");
        if (phase.ns < 0 || phase >= period) throw ConfigError(name + ": phase must lie in [0, period)");
        if (priority > 7) throw ConfigError(name + ": priority must be in 0..7");
    }
};

/// Bulk load shaped by a token bucket one frame deep.
struct SaturatingFlowParams {
    std::string name;
    NodeId src = 0;
    NodeId dst = 0;
    Bytes payload = 1500;
    BitsPerSecond rate = 0;
    std::uint8_t priority = 0;
    Duration phase{};
    bool record = false;
    // Host pacing noise: each release lands up to this long after its
    // token-bucket instant (uniform, seeded). Zero gives a perfectly smooth source.
    Duration release_jitter{};

    void validate(BitsPerSecond bottleneck) const {
        if (rate > bottleneck) throw ConfigError(name + ": target rate exceeds the path bottleneck");
        if (priority > 7) throw ConfigError(name + ": priority must be in 0..7");
        if (phase.ns < 0) throw ConfigError(name + ": phase must be non-negative");
        if (release_jitter.ns < 0) throw ConfigError(name + ": release jitter must be non-negative");
    }
};

/// Exact integer token bucket. Tokens are bits scaled by 1e9 so that a rate
/// in bit/s accrues an integral amount every nanosecond. The depth is one
/// frame plus the sub-nanosecond remainder of a single accrual step, which
/// keeps the long-run rate exact despite integer release instants.
class TokenBucket {
public:
    TokenBucket(BitsPerSecond rate, std::int64_t depth_bits)
        : rate_(static_cast<std::int64_t>(rate)),
          depth_(depth_bits * kScale + std::max<std::int64_t>(rate_ - 1, 0)),
          tokens_(depth_bits * kScale) {}

    /// Earliest instant >= now at which `bits` can be spent.
    [[nodiscard]] SimTime ready_at(SimTime now, std::int64_t bits) const {
        const std::int64_t cost = bits * kScale;
        const std::int64_t have = tokens_at(now);
        if (have >= cost) return now;
        if (rate_ == 0) return SimTime::max();
        return now + Duration{(cost - have + rate_ - 1) / rate_};
    }

    void spend(SimTime now, std::int64_t bits) {
        const std::int64_t have = tokens_at(now);
        if (have < bits * kScale) throw std::logic_error("token bucket overdrawn");
        tokens_ = have - bits * kScale;
        stamp_ = now;
    }

private:
    static constexpr std::int64_t kScale = 1'000'000'000;

    [[nodiscard]] std::int64_t tokens_at(SimTime now) const {
        const auto refill = static_cast<__int128>((now - stamp_).ns) * rate_ + tokens_;
        return refill >= depth_ ? depth_ : static_cast<std::int64_t>(refill);
    }

    std::int64_t rate_;
    std::int64_t depth_;
    std::int64_t tokens_;
    SimTime stamp_{};
};

class PeriodicSource {
public:
    PeriodicSource(PeriodicFlowParams params, Bytes header_overhead)
        : params_(std::move(params)), overhead_(header_overhead) {
        params_.validate();
    }

    [[nodiscard]] const PeriodicFlowParams& params() const noexcept { return params_; }
    [[nodiscard]] FlowId flow() const noexcept { return flow_; }

    void start(Engine& engine, Network& net, std::uint64_t self, SimTime stop_at) {
        flow_ = net.register_flow(params_.record);
        self_ = self;
        stop_at_ = stop_at;
        // Releases already in the past are skipped, except the latest one, which
        // fires immediately. A clock running slightly ahead keeps seq 0.
        while (net.clock().to_global(params_.src, target(k_ + 1)) <= engine.now()) ++k_;
        arm(engine, net);
    }

    void on_tick(Engine& engine, Network& net) {
        Frame f;
        f.flow = flow_;
        f.seq = k_;
        f.priority = params_.priority;
        f.payload_len = params_.payload;
        f.wire_len = params_.payload + overhead_;
        f.src = params_.src;
        f.dst = params_.dst;
        net.inject(f, engine.now());
        ++k_;
        arm(engine, net);
    }

private:
    [[nodiscard]] SimTime target(std::uint64_t k) const {
        return SimTime{params_.phase.ns + static_cast<std::int64_t>(k) * params_.period.ns};
    }

    void arm(Engine& engine, const Network& net) {
        if (params_.count && k_ >= *params_.count) return;
        SimTime at = net.clock().to_global(params_.src, target(k_));
        if (at < engine.now()) at = engine.now();
        if (at >= stop_at_) return;
        engine.schedule(at, EventKind::GeneratorTick, params_.src, 0, self_);
    }

    PeriodicFlowParams params_;
    Bytes overhead_;
    FlowId flow_ = 0;
    std::uint64_t self_ = 0;
    std::uint64_t k_ = 0;
    SimTime stop_at_{};
};

class SaturatingSource {
public:
    SaturatingSource(SaturatingFlowParams params, Bytes header_overhead)
        : params_(std::move(params)),
          overhead_(header_overhead),
          bits_(static_cast<std::int64_t>((params_.payload + overhead_) * 8)),
          bucket_(params_.rate, bits_) {}

    [[nodiscard]] const SaturatingFlowParams& params() const noexcept { return params_; }
    [[nodiscard]] FlowId flow() const noexcept { return flow_; }

    void start(Engine& engine, Network& net, std::uint64_t self, SimTime stop_at) {
        flow_ = net.register_flow(params_.record);
        self_ = self;
        stop_at_ = stop_at;
        seed_ = net.clock().seed();
        if (params_.rate == 0) return;
        bucket_time_ = engine.now() + params_.phase;
        arm(engine);
    }

    void on_tick(Engine& engine, Network& net) {
        bucket_.spend(bucket_time_, bits_);
        Frame f;
        f.flow = flow_;
        f.seq = seq_++;
        f.priority = params_.priority;
        f.payload_len = params_.payload;
        f.wire_len = params_.payload + overhead_;
        f.src = params_.src;
        f.dst = params_.dst;
        net.inject(f, engine.now());
        bucket_time_ = bucket_.ready_at(bucket_time_, bits_);
        arm(engine);
    }

private:
    [[nodiscard]] Duration pacing_noise(std::uint64_t k) const noexcept {
        if (params_.release_jitter.ns == 0) return Duration::zero();
        const std::uint64_t x = splitmix64(seed_ ^ (static_cast<std::uint64_t>(flow_) << 48) ^ k);
        return Duration{static_cast<std::int64_t>(x % static_cast<std::uint64_t>(params_.release_jitter.ns + 1))};
    }

    void arm(Engine& engine) {
        if (bucket_time_ >= stop_at_) return;
        SimTime at = bucket_time_ + pacing_noise(seq_);
        if (at < engine.now()) at = engine.now();
        engine.schedule(at, EventKind::GeneratorTick, params_.src, 0, self_);
    }

    SaturatingFlowParams params_;
    Bytes overhead_;
    std::int64_t bits_;
    TokenBucket bucket_;
    FlowId flow_ = 0;
    std::uint64_t self_ = 0;
    std::uint64_t seq_ = 0;
    std::uint64_t seed_ = 0;
    SimTime bucket_time_{};
    SimTime stop_at_{};
};

}  // namespace tsn
