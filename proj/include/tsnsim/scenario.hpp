#pragma once

#include "tsnsim/analytics.hpp"
#include "tsnsim/config.hpp"
#include "tsnsim/experiments.hpp"
#include "tsnsim/simulation.hpp"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace tsn {

/// One summary line, keyed (actuator, queue, policy, load).
struct SummaryRow {
    std::string scenario;
    std::string flow;
    std::string actuator;
    std::string queue;
    std::string policy;
    std::string load;
    std::string capacity;
    StatsSummary stats;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
};

struct PortDrops {
    std::string node;
    std::string toward;
    int queue = 0;
    std::uint64_t drops = 0;
};

struct FlowResult {
    std::string name;
    std::vector<LatencyRecord> records;
    FlowCounters counters;
    std::uint64_t in_flight = 0;
};

struct ScenarioResult {
    std::string name;
    std::vector<FlowResult> flows;
    std::vector<SummaryRow> summary;
    std::vector<PortDrops> drops;
    std::uint64_t trace_digest = 0;
    std::uint64_t events = 0;
};

inline std::string queue_label(int q) {
    if (q == 0) return "BE";
    if (q == kNumTrafficClasses - 1) return "ST";
    return "Q" + std::to_string(q);
}

inline std::string rate_label(BitsPerSecond bps) {
    if (bps == 0) return "-";
    std::ostringstream os;
    if (bps % 1'000'000'000 == 0) os << bps / 1'000'000'000 << " Gbps";
    else if (bps % 1'000'000 == 0) os << bps / 1'000'000 << " Mbps";
    else os << std::fixed << std::setprecision(3) << static_cast<double>(bps) / 1e6 << " Mbps";
    return os.str();
}

/// Runs one validated scenario to completion. Pure with respect to the
/// config: identical inputs give identical results.
inline ScenarioResult run_scenario(const ScenarioConfig& c) {
    auto sim = build_simulation(c);
    Network& net = sim->network();
    const Topology& t = net.topology();
    const std::uint64_t events = sim->run(nanoseconds(c.duration_ns));

    ScenarioResult res;
    res.name = c.name;
    res.trace_digest = sim->engine().trace_digest();
    res.events = events;

    BitsPerSecond load = 0;
    for (const auto& f : c.flows) {
        if (f.type == FlowType::Saturating) load += f.rate_bps;
    }
    const auto in_flight = net.in_flight_by_flow();
    for (FlowId id = 0; id < c.flows.size(); ++id) {
        const FlowConfig& fc = c.flows[id];
        FlowResult fr;
        fr.name = fc.name;
        fr.records = net.take_records(id);
        fr.counters = net.counters()[id];
        fr.in_flight = in_flight[id];
        if (fc.record && !fr.records.empty()) {
            SummaryRow row;
            row.scenario = c.name;
            row.flow = fc.name;
            row.actuator = fc.src;
            row.queue = queue_label(t.pcp_to_queue[fc.priority]);
            const NodeId s = *t.find(fc.src);
            const auto hops = t.path(s, *t.find(fc.dst));
            row.policy = "SP";
            for (const Hop& h : hops) {
                if (t.node(h.node).forwards()) {
                    row.policy = to_string(net.port(h.node, h.port).policy());
                    break;
                }
            }
            row.load = rate_label(load);
            row.capacity = rate_label(t.link_rate());
            row.stats = summarize(std::span<const LatencyRecord>(fr.records));
            row.generated = fr.counters.generated;
            row.delivered = fr.counters.delivered;
            row.dropped = fr.counters.dropped;
            res.summary.push_back(std::move(row));
        }
        res.flows.push_back(std::move(fr));
    }
    for (NodeId n = 0; n < t.size(); ++n) {
        for (PortId p = 0; p < t.ports(n).size(); ++p) {
            const EgressPort& ep = net.port(n, p);
            for (int q = 0; q < kNumTrafficClasses; ++q) {
                if (ep.queue(q).drops == 0) continue;
                res.drops.push_back({t.node(n).name, t.node(t.ports(n)[p].neighbor).name, q, ep.queue(q).drops});
            }
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Output writers. Column sets are part of the external interface.

inline void write_records_csv(std::ostream& os, const ScenarioResult& r) {
    os << "flow,seq,t_tx_ns,t_rx_ns,delay_ns\n";
    for (const auto& f : r.flows) {
        for (const auto& rec : f.records) {
            os << f.name << ',' << rec.seq << ',' << rec.t_tx.ns << ',' << rec.t_rx.ns << ',' << rec.delay.ns << '\n';
        }
    }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
    os << "scenario,flow,actuator,queue,policy,load,capacity,count,min_us,max_us,mean_us,std_us,max_minus_min_us,"
          "generated,delivered,dropped\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << r.flow << ',' << r.actuator << ',' << r.queue << ',' << r.policy << ','
           << r.load << ',' << r.capacity << ',' << r.stats.count << ',' << format_us(r.stats.min) << ','
           << format_us(r.stats.max) << ',' << format_us(r.stats.mean_ns) << ',' << format_us(r.stats.std_ns) << ','
           << format_us(r.stats.max_minus_min) << ',' << r.generated << ',' << r.delivered << ',' << r.dropped
           << '\n';
    }
}

/// Markdown rendering grouped by link capacity, one table per capacity.
inline void write_summary_markdown(std::ostream& os, std::vector<SummaryRow> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.capacity, a.actuator) < std::tie(b.capacity, b.actuator);
    });
    std::string current;
    for (const auto& r : rows) {
        if (r.capacity != current) {
            current = r.capacity;
            os << "\n### Link capacity " << current << "\n\n"
               << "| Actuator | Queue | QoS | Network load | Min (us) | Max (us) | Mean (us) | Std (us) | Max-Min (us) |\n"
               << "|---|---|---|---|---:|---:|---:|---:|---:|\n";
        }
        os << "| " << r.actuator << " | " << r.queue << " | " << r.policy << " | " << r.load << " | "
           << format_us(r.stats.min) << " | " << format_us(r.stats.max) << " | " << format_us(r.stats.mean_ns)
           << " | " << format_us(r.stats.std_ns) << " | " << format_us(r.stats.max_minus_min) << " |\n";
    }
}

inline void write_drops_csv(std::ostream& os, const ScenarioResult& r) {
    os << "node,toward,queue,drops\n";
    for (const auto& d : r.drops) os << d.node << ',' << d.toward << ',' << d.queue << ',' << d.drops << '\n';
}

/// Per-flow (t, delay) series plus a gnuplot script that plots them.
inline void write_timeseries(const std::filesystem::path& dir, const ScenarioResult& r) {
    std::ofstream gp(dir / "plot.gp");
    gp << "set xlabel 'time (s)'\nset ylabel 'delay (us)'\nset datafile separator ','\n"
       << "set key outside\nset title '" << r.name << "'\nplot ";
    bool first = true;
    for (const auto& f : r.flows) {
        if (f.records.empty()) continue;
        const std::string file = "series_" + f.name + ".csv";
        std::ofstream os(dir / file);
        os << "t_s,delay_us\n";
        os << std::fixed;
        for (const auto& rec : f.records) {
            os << std::setprecision(9) << static_cast<double>(rec.t_rx.ns) / 1e9 << ',' << std::setprecision(3)
               << rec.delay.micros() << '\n';
        }
        gp << (first ? "" : ", \\\n     ") << "'" << file << "' every ::1 using 1:2 with points pt 7 ps 0.3 title '"
           << f.name << "'";
        first = false;
    }
    gp << '\n';
}

inline void write_outputs(const std::filesystem::path& dir, const ScenarioResult& r, const OutputConfig& oc) {
    std::filesystem::create_directories(dir);
    if (oc.records) {
        std::ofstream os(dir / "records.csv");
        write_records_csv(os, r);
    }
    {
        std::ofstream os(dir / "summary.csv");
        write_summary_csv(os, r.summary);
    }
    {
        std::ofstream os(dir / "summary.md");
        os << "## " << r.name << '\n';
        write_summary_markdown(os, r.summary);
    }
    {
        std::ofstream os(dir / "drops.csv");
        write_drops_csv(os, r);
    }
    if (oc.timeseries) write_timeseries(dir, r);
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepParameter { FlowPhase, ClockJitter, LoadRate, Payload };

/// Parses "phase:<flow>", "jitter", "load:<flow>" or "payload:<flow>".
struct SweepTarget {
    SweepParameter parameter = SweepParameter::FlowPhase;
    std::string flow;
};

inline SweepTarget parse_sweep_target(const std::string& s, const ScenarioConfig& c) {
    SweepTarget t;
    const auto colon = s.find(':');
    const std::string kind = s.substr(0, colon);
    if (kind == "jitter") {
        if (colon != std::string::npos) throw std::invalid_argument("jitter takes no flow name");
        t.parameter = SweepParameter::ClockJitter;
        return t;
    }
    if (kind == "phase") t.parameter = SweepParameter::FlowPhase;
    else if (kind == "load") t.parameter = SweepParameter::LoadRate;
    else if (kind == "payload") t.parameter = SweepParameter::Payload;
    else throw std::invalid_argument("unknown sweep parameter '" + s + "'");
    if (colon == std::string::npos) throw std::invalid_argument("sweep parameter '" + kind + "' needs ':<flow>'");
    t.flow = s.substr(colon + 1);
    const auto it = std::find_if(c.flows.begin(), c.flows.end(), [&](const auto& f) { return f.name == t.flow; });
    if (it == c.flows.end()) throw std::invalid_argument("sweep: unknown flow '" + t.flow + "'");
    if (t.parameter == SweepParameter::LoadRate && it->type != FlowType::Saturating) {
        throw std::invalid_argument("sweep: load applies to saturating flows only");
    }
    return t;
}

inline ScenarioConfig apply_sweep_value(ScenarioConfig c, const SweepTarget& t, std::int64_t v) {
    if (t.parameter == SweepParameter::ClockJitter) {
        c.clock_default.jitter_ns = v;
        for (auto& [_, cc] : c.clock_nodes) cc.jitter_ns = v;
        return c;
    }
    for (auto& f : c.flows) {
        if (f.name != t.flow) continue;
        switch (t.parameter) {
            case SweepParameter::FlowPhase: f.phase_ns = v; break;
            case SweepParameter::LoadRate: f.rate_bps = static_cast<BitsPerSecond>(v); break;
            case SweepParameter::Payload: f.payload = static_cast<Bytes>(v); break;
            case SweepParameter::ClockJitter: break;
        }
    }
    return c;
}

inline std::vector<std::int64_t> sweep_range(std::int64_t from, std::int64_t to, std::int64_t step) {
    if (step <= 0) throw std::invalid_argument("sweep: step must be positive");
    if (to < from) throw std::invalid_argument("sweep: empty range");
    std::vector<std::int64_t> v;
    for (std::int64_t x = from; x <= to; x += step) v.push_back(x);
    return v;
}

struct SweepPoint {
    std::int64_t value = 0;
    std::vector<SummaryRow> rows;
    std::uint64_t drops = 0;
};

/// Runs one independent simulation per value, optionally on several
/// threads. Results come back in value order whatever the thread count.
inline std::vector<SweepPoint> sweep(const ScenarioConfig& base, const SweepTarget& target,
                                     const std::vector<std::int64_t>& values, unsigned parallel = 1) {
    if (values.empty()) throw std::invalid_argument("sweep: empty range");
    std::vector<ScenarioConfig> configs;
    configs.reserve(values.size());
    for (auto v : values) {
        configs.push_back(apply_sweep_value(base, target, v));
        validate(configs.back());
    }
    std::vector<SweepPoint> out(values.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            try {
                ScenarioResult r = run_scenario(configs[i]);
                out[i].value = values[i];
                out[i].rows = std::move(r.summary);
                for (const auto& d : r.drops) out[i].drops += d.drops;
            } catch (...) {
                std::lock_guard lk(failure_mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(values.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

/// Per-flow extremum of the maximum delay across sweep points.
struct SweepExtremum {
    std::string flow;
    Duration max_delay{};
    std::int64_t at_value = 0;
};

inline std::vector<SweepExtremum> sweep_extrema(const std::vector<SweepPoint>& points) {
    std::vector<SweepExtremum> ex;
    for (const auto& p : points) {
        for (const auto& r : p.rows) {
            auto it = std::find_if(ex.begin(), ex.end(), [&](const auto& e) { return e.flow == r.flow; });
            if (it == ex.end()) ex.push_back({r.flow, r.stats.max, p.value});
            else if (r.stats.max > it->max_delay) *it = {r.flow, r.stats.max, p.value};
        }
    }
    return ex;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepPoint>& points) {
    os << "value,flow,count,min_us,max_us,mean_us,std_us,max_minus_min_us,drops\n";
    for (const auto& p : points) {
        for (const auto& r : p.rows) {
            os << p.value << ',' << r.flow << ',' << r.stats.count << ',' << format_us(r.stats.min) << ','
               << format_us(r.stats.max) << ',' << format_us(r.stats.mean_ns) << ',' << format_us(r.stats.std_ns)
               << ',' << format_us(r.stats.max_minus_min) << ',' << p.drops << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Report: each config with its load and without it.

inline std::vector<SummaryRow> report_rows(const std::vector<ScenarioConfig>& configs, bool include_no_load,
                                           unsigned parallel = 1) {
    std::vector<ScenarioConfig> runs;
    for (const auto& c : configs) {
        if (include_no_load) {
            ScenarioConfig nl = without_load(c);
            nl.name = c.name + "/no-load";
            runs.push_back(std::move(nl));
        }
        runs.push_back(c);
    }
    std::vector<std::vector<SummaryRow>> per(runs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= runs.size()) return;
            try {
                per[i] = run_scenario(runs[i]).summary;
            } catch (...) {
                std::lock_guard lk(mu);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(parallel, static_cast<unsigned>(runs.size())));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    std::vector<SummaryRow> rows;
    for (auto& v : per) rows.insert(rows.end(), v.begin(), v.end());
    return rows;
}

}  // namespace tsn
