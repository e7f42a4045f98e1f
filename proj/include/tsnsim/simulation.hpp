#pragma once

#include "tsnsim/clock.hpp"
#include "tsnsim/engine.hpp"
#include "tsnsim/network.hpp"
#include "tsnsim/topology.hpp"
#include "tsnsim/traffic.hpp"

#include <variant>
#include <vector>

namespace tsn {

/// Engine + network + traffic sources wired together for one run.
/// Owns everything it touches, so independent instances may run on
/// different threads.
class Simulation {
public:
    Simulation(const Topology& topo, ClockModel clock, NetworkOptions opts = {}, Bytes header_overhead = 0)
        : net_(topo, engine_, std::move(clock), opts), overhead_(header_overhead) {
        engine_.set_handler([this](const Event& ev) { dispatch(ev); });
    }

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    [[nodiscard]] Engine& engine() noexcept { return engine_; }
    [[nodiscard]] Network& network() noexcept { return net_; }
    [[nodiscard]] const Network& network() const noexcept { return net_; }

    /// Returns the flow id (flows are numbered in the order they are added).
    FlowId add_periodic(PeriodicFlowParams params) {
        sources_.emplace_back(PeriodicSource(std::move(params), overhead_));
        return static_cast<FlowId>(sources_.size() - 1);
    }

    FlowId add_saturating(SaturatingFlowParams params) {
        const BitsPerSecond bottleneck = net_.topology().link_rate();
        params.validate(bottleneck);
        sources_.emplace_back(SaturatingSource(std::move(params), overhead_));
        return static_cast<FlowId>(sources_.size() - 1);
    }

    /// Releases traffic over [0, duration) and processes every event up to
    /// and including `duration`.
    std::uint64_t run(Duration duration) {
        const SimTime stop = SimTime{} + duration;
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            std::visit([&](auto& s) { s.start(engine_, net_, i, stop); }, sources_[i]);
        }
        return engine_.run_until(stop);
    }

    [[nodiscard]] std::size_t flow_count() const noexcept { return sources_.size(); }

private:
    void dispatch(const Event& ev) {
        if (ev.kind == EventKind::GeneratorTick) {
            std::visit([&](auto& s) { s.on_tick(engine_, net_); }, sources_.at(ev.ref));
            return;
        }
        net_.handle(ev);
    }

    Engine engine_;
    Network net_;
    Bytes overhead_;
    std::vector<std::variant<PeriodicSource, SaturatingSource>> sources_;
};

}  // namespace tsn
