#pragma once

#include "tsnsim/clock.hpp"
#include "tsnsim/egress.hpp"
#include "tsnsim/gcl.hpp"
#include "tsnsim/network.hpp"
#include "tsnsim/simulation.hpp"
#include "tsnsim/topology.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tsn {

inline constexpr int kSchemaVersion = 1;

struct NodeConfig {
    std::string name;
    NodeKind kind = NodeKind::Endpoint;
    SwitchTiming timing{};
};

struct LinkConfig {
    std::string a;
    std::string b;
    BitsPerSecond capacity = 0;
    double length_m = 0.0;
    double speed_mps = kCopperSpeed;
};

struct GclConfig {
    std::int64_t base_time_ns = 0;
    std::int64_t cycle_ns = 0;
    std::vector<GateEntry> entries;
};

struct PortConfig {
    std::string node;
    std::string toward;  // neighbour identifying the port
    Policy policy = Policy::StrictPriority;
    std::optional<GclConfig> gcl;
};

struct ClockConfig {
    std::int64_t offset_ns = 0;
    std::int64_t jitter_ns = 0;
};

enum class FlowType { Periodic, Saturating };

struct FlowConfig {
    std::string name;
    FlowType type = FlowType::Periodic;
    std::string src;
    std::string dst;
    Bytes payload = 0;
    std::uint8_t priority = 0;
    std::int64_t period_ns = 0;   // periodic
    std::int64_t phase_ns = 0;
    BitsPerSecond rate_bps = 0;   // saturating
    std::int64_t release_jitter_ns = 0;  // saturating
    std::optional<std::uint64_t> count{};
    bool record = true;
};

struct OutputConfig {
    std::string dir = "out";
    bool records = true;
    bool timeseries = true;
};

/// Everything needed to reproduce one run; mirrors the JSON document.
struct ScenarioConfig {
    int schema_version = kSchemaVersion;
    std::string name = "scenario";
    std::string description;
    std::uint64_t seed = 1;
    std::int64_t duration_ns = 10'000'000'000;
    Bytes header_overhead = 0;
    Bytes mtu = 1500;
    Bytes queue_capacity = kDefaultQueueCapacity;
    Policy default_policy = Policy::StrictPriority;
    CbfParams cbf{};
    std::vector<NodeConfig> nodes;
    std::vector<LinkConfig> links;
    std::vector<PortConfig> ports;
    ClockConfig clock_default{};
    std::map<std::string, ClockConfig> clock_nodes;
    std::vector<FlowConfig> flows;
    OutputConfig output{};
};

/// Every problem found while loading or validating a config.
class ConfigValidationError : public std::runtime_error {
public:
    explicit ConfigValidationError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}
    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid scenario config:";
        for (const auto& p : v) s += "\n  - " + p;
        return s;
    }
    std::vector<std::string> problems_;
};

// ---------------------------------------------------------------------------
// String mappings

inline std::optional<NodeKind> parse_node_kind(std::string_view s) {
    if (s == "endpoint") return NodeKind::Endpoint;
    if (s == "bridged_endpoint") return NodeKind::BridgedEndpoint;
    if (s == "switch") return NodeKind::Switch;
    return std::nullopt;
}

inline std::optional<Policy> parse_policy(std::string_view s) {
    if (s == "cbf" || s == "CBF") return Policy::CreditBasedFifo;
    if (s == "sp" || s == "SP") return Policy::StrictPriority;
    if (s == "tas" || s == "TAS") return Policy::TimeAware;
    return std::nullopt;
}

inline std::string policy_key(Policy p) {
    switch (p) {
        case Policy::CreditBasedFifo: return "cbf";
        case Policy::StrictPriority: return "sp";
        case Policy::TimeAware: return "tas";
    }
    return "sp";
}

inline std::string gate_hex(GateMask m) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned>(m));
    return buf;
}

// ---------------------------------------------------------------------------
// JSON -> config. Problems are collected rather than thrown one at a time.

namespace detail {

using nlohmann::json;

class Reader {
public:
    explicit Reader(std::vector<std::string>& errs) : errs_(errs) {}

    template <typename T>
    T get(const json& obj, const char* key, const std::string& where, T fallback, bool required = false) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) errs_.push_back(where + ": missing required field '" + key + "'");
            return fallback;
        }
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            errs_.push_back(where + ": field '" + key + "' has the wrong type");
            return fallback;
        }
    }

    std::optional<GateMask> gates(const json& v, const std::string& where) {
        if (v.is_number_unsigned() || v.is_number_integer()) {
            const auto n = v.get<std::int64_t>();
            if (n >= 0 && n <= 0xFF) return static_cast<GateMask>(n);
        } else if (v.is_string()) {
            try {
                std::size_t used = 0;
                const auto s = v.get<std::string>();
                const unsigned long n = std::stoul(s, &used, 0);
                if (used == s.size() && n <= 0xFF) return static_cast<GateMask>(n);
            } catch (const std::exception&) {
            }
        }
        errs_.push_back(where + ": gate state must be an 8-bit mask (integer or \"0x..\" string)");
        return std::nullopt;
    }

    std::vector<std::string>& errs_;
};

}  // namespace detail

inline ScenarioConfig config_from_json(const nlohmann::json& j) {
    using nlohmann::json;
    std::vector<std::string> errs;
    detail::Reader r(errs);
    ScenarioConfig c;
    if (!j.is_object()) throw ConfigValidationError({"document root must be an object"});

    c.schema_version = r.get<int>(j, "schema_version", "root", 0, true);
    if (c.schema_version != kSchemaVersion && j.contains("schema_version")) {
        errs.push_back("root: unsupported schema_version " + std::to_string(c.schema_version));
    }
    c.name = r.get<std::string>(j, "name", "root", c.name);
    c.description = r.get<std::string>(j, "description", "root", "");
    c.seed = r.get<std::uint64_t>(j, "seed", "root", c.seed);
    if (j.contains("duration_s")) {
        const double s = r.get<double>(j, "duration_s", "root", 10.0);
        c.duration_ns = static_cast<std::int64_t>(std::llround(s * 1e9));
    }
    c.header_overhead = r.get<Bytes>(j, "header_overhead", "root", c.header_overhead);
    c.mtu = r.get<Bytes>(j, "mtu", "root", c.mtu);
    c.queue_capacity = r.get<Bytes>(j, "queue_capacity_bytes", "root", c.queue_capacity);
    {
        const auto p = r.get<std::string>(j, "default_policy", "root", "sp");
        if (auto pol = parse_policy(p)) c.default_policy = *pol;
        else errs.push_back("root: unknown default_policy '" + p + "'");
    }
    if (j.contains("cbf")) {
        const json& cj = j.at("cbf");
        c.cbf.quantum = r.get<std::int64_t>(cj, "quantum_bytes", "cbf", c.cbf.quantum);
        c.cbf.credit_min = r.get<std::int64_t>(cj, "credit_min_bytes", "cbf", c.cbf.credit_min);
        c.cbf.credit_max = r.get<std::int64_t>(cj, "credit_max_bytes", "cbf", c.cbf.credit_max);
    }

    if (!j.contains("nodes") || !j.at("nodes").is_array()) errs.push_back("root: 'nodes' must be an array");
    else {
        for (std::size_t i = 0; i < j.at("nodes").size(); ++i) {
            const json& nj = j.at("nodes")[i];
            const std::string where = "nodes[" + std::to_string(i) + "]";
            NodeConfig n;
            n.name = r.get<std::string>(nj, "name", where, "", true);
            const auto kind = r.get<std::string>(nj, "kind", where, "endpoint");
            if (auto k = parse_node_kind(kind)) n.kind = *k;
            else errs.push_back(where + ": unknown node kind '" + kind + "'");
            if (nj.contains("timing")) {
                const json& tj = nj.at("timing");
                n.timing.ingress = nanoseconds(r.get<std::int64_t>(tj, "ingress_ns", where + ".timing", 0));
                n.timing.processing = nanoseconds(r.get<std::int64_t>(tj, "processing_ns", where + ".timing", 0));
                n.timing.egress = nanoseconds(r.get<std::int64_t>(tj, "egress_ns", where + ".timing", 0));
            }
            c.nodes.push_back(std::move(n));
        }
    }

    if (!j.contains("links") || !j.at("links").is_array()) errs.push_back("root: 'links' must be an array");
    else {
        for (std::size_t i = 0; i < j.at("links").size(); ++i) {
            const json& lj = j.at("links")[i];
            const std::string where = "links[" + std::to_string(i) + "]";
            LinkConfig l;
            l.a = r.get<std::string>(lj, "a", where, "", true);
            l.b = r.get<std::string>(lj, "b", where, "", true);
            l.capacity = static_cast<BitsPerSecond>(r.get<double>(lj, "capacity_bps", where, 0.0, true));
            l.length_m = r.get<double>(lj, "length_m", where, 0.0);
            l.speed_mps = r.get<double>(lj, "speed_mps", where, kCopperSpeed);
            c.links.push_back(std::move(l));
        }
    }

    if (j.contains("ports")) {
        for (std::size_t i = 0; i < j.at("ports").size(); ++i) {
            const json& pj = j.at("ports")[i];
            std::string where = "ports[" + std::to_string(i) + "]";
            PortConfig p;
            p.node = r.get<std::string>(pj, "node", where, "", true);
            p.toward = r.get<std::string>(pj, "toward", where, "", true);
            where += " (" + p.node + "->" + p.toward + ")";
            const auto pol = r.get<std::string>(pj, "policy", where, "sp");
            if (auto parsed = parse_policy(pol)) p.policy = *parsed;
            else errs.push_back(where + ": unknown policy '" + pol + "'");
            if (pj.contains("gcl")) {
                const json& gj = pj.at("gcl");
                const std::string gwhere = "GCL on " + p.node + "->" + p.toward;
                GclConfig g;
                g.base_time_ns = r.get<std::int64_t>(gj, "base_time_ns", gwhere, 0);
                g.cycle_ns = r.get<std::int64_t>(gj, "cycle_ns", gwhere, 0, true);
                if (gj.contains("entries") && gj.at("entries").is_array()) {
                    for (const json& ej : gj.at("entries")) {
                        GateEntry e;
                        e.duration = nanoseconds(r.get<std::int64_t>(ej, "duration_ns", gwhere, 0, true));
                        if (ej.contains("gates")) {
                            if (auto m = r.gates(ej.at("gates"), gwhere)) e.gates = *m;
                        } else {
                            errs.push_back(gwhere + ": entry missing 'gates'");
                        }
                        g.entries.push_back(e);
                    }
                } else {
                    errs.push_back(gwhere + ": 'entries' must be an array");
                }
                p.gcl = std::move(g);
            }
            c.ports.push_back(std::move(p));
        }
    }

    if (j.contains("clock")) {
        const json& cj = j.at("clock");
        if (cj.contains("default")) {
            c.clock_default.offset_ns = r.get<std::int64_t>(cj.at("default"), "offset_ns", "clock.default", 0);
            c.clock_default.jitter_ns = r.get<std::int64_t>(cj.at("default"), "jitter_ns", "clock.default", 0);
        }
        if (cj.contains("nodes") && cj.at("nodes").is_object()) {
            for (const auto& [name, v] : cj.at("nodes").items()) {
                ClockConfig cc;
                cc.offset_ns = r.get<std::int64_t>(v, "offset_ns", "clock.nodes." + name, 0);
                cc.jitter_ns = r.get<std::int64_t>(v, "jitter_ns", "clock.nodes." + name, 0);
                c.clock_nodes[name] = cc;
            }
        }
    }

    if (!j.contains("flows") || !j.at("flows").is_array()) errs.push_back("root: 'flows' must be an array");
    else {
        for (std::size_t i = 0; i < j.at("flows").size(); ++i) {
            const json& fj = j.at("flows")[i];
            std::string where = "flows[" + std::to_string(i) + "]";
            FlowConfig f;
            f.name = r.get<std::string>(fj, "name", where, "flow" + std::to_string(i));
            where += " (" + f.name + ")";
            const auto type = r.get<std::string>(fj, "type", where, "periodic");
            if (type == "periodic") f.type = FlowType::Periodic;
            else if (type == "saturating") f.type = FlowType::Saturating;
            else errs.push_back(where + ": unknown flow type '" + type + "'");
            f.src = r.get<std::string>(fj, "src", where, "", true);
            f.dst = r.get<std::string>(fj, "dst", where, "", true);
            f.payload = r.get<Bytes>(fj, "payload_bytes", where, 0, true);
            const int prio = r.get<int>(fj, "priority", where, 0);
            if (prio < 0 || prio > 7) errs.push_back(where + ": priority must be in 0..7");
            f.priority = static_cast<std::uint8_t>(std::clamp(prio, 0, 7));
            f.phase_ns = r.get<std::int64_t>(fj, "phase_ns", where, 0);
            f.record = r.get<bool>(fj, "record", where, f.type == FlowType::Periodic);
            if (f.type == FlowType::Periodic) {
                f.period_ns = r.get<std::int64_t>(fj, "period_ns", where, 0, true);
                if (fj.contains("count")) f.count = r.get<std::uint64_t>(fj, "count", where, 0);
            } else {
                f.rate_bps = static_cast<BitsPerSecond>(r.get<double>(fj, "rate_bps", where, 0.0, true));
                f.release_jitter_ns = r.get<std::int64_t>(fj, "release_jitter_ns", where, 0);
            }
            c.flows.push_back(std::move(f));
        }
    }

    if (j.contains("output")) {
        const json& oj = j.at("output");
        c.output.dir = r.get<std::string>(oj, "dir", "output", c.output.dir);
        c.output.records = r.get<bool>(oj, "records", "output", c.output.records);
        c.output.timeseries = r.get<bool>(oj, "timeseries", "output", c.output.timeseries);
    }

    if (!errs.empty()) throw ConfigValidationError(std::move(errs));
    return c;
}

inline nlohmann::ordered_json config_to_json(const ScenarioConfig& c) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["schema_version"] = c.schema_version;
    j["name"] = c.name;
    if (!c.description.empty()) j["description"] = c.description;
    j["seed"] = c.seed;
    j["duration_s"] = static_cast<double>(c.duration_ns) / 1e9;
    j["header_overhead"] = c.header_overhead;
    j["mtu"] = c.mtu;
    j["queue_capacity_bytes"] = c.queue_capacity;
    j["default_policy"] = policy_key(c.default_policy);
    j["cbf"] = {{"quantum_bytes", c.cbf.quantum},
                {"credit_min_bytes", c.cbf.credit_min},
                {"credit_max_bytes", c.cbf.credit_max}};
    j["nodes"] = ordered_json::array();
    for (const auto& n : c.nodes) {
        ordered_json nj{{"name", n.name}, {"kind", to_string(n.kind)}};
        if (n.kind != NodeKind::Endpoint) {
            nj["timing"] = {{"ingress_ns", n.timing.ingress.ns},
                            {"processing_ns", n.timing.processing.ns},
                            {"egress_ns", n.timing.egress.ns}};
        }
        j["nodes"].push_back(nj);
    }
    j["links"] = ordered_json::array();
    for (const auto& l : c.links) {
        j["links"].push_back({{"a", l.a}, {"b", l.b}, {"capacity_bps", l.capacity},
                              {"length_m", l.length_m}, {"speed_mps", l.speed_mps}});
    }
    j["ports"] = ordered_json::array();
    for (const auto& p : c.ports) {
        ordered_json pj{{"node", p.node}, {"toward", p.toward}, {"policy", policy_key(p.policy)}};
        if (p.gcl) {
            ordered_json entries = ordered_json::array();
            for (const auto& e : p.gcl->entries) {
                entries.push_back({{"duration_ns", e.duration.ns}, {"gates", gate_hex(e.gates)}});
            }
            pj["gcl"] = {{"base_time_ns", p.gcl->base_time_ns}, {"cycle_ns", p.gcl->cycle_ns}, {"entries", entries}};
        }
        j["ports"].push_back(pj);
    }
    ordered_json clock{{"default", {{"offset_ns", c.clock_default.offset_ns}, {"jitter_ns", c.clock_default.jitter_ns}}}};
    if (!c.clock_nodes.empty()) {
        ordered_json nodes = ordered_json::object();
        for (const auto& [name, cc] : c.clock_nodes) {
            nodes[name] = {{"offset_ns", cc.offset_ns}, {"jitter_ns", cc.jitter_ns}};
        }
        clock["nodes"] = nodes;
    }
    j["clock"] = clock;
    j["flows"] = ordered_json::array();
    for (const auto& f : c.flows) {
        ordered_json fj{{"name", f.name},
                        {"type", f.type == FlowType::Periodic ? "periodic" : "saturating"},
                        {"src", f.src},
                        {"dst", f.dst},
                        {"payload_bytes", f.payload},
                        {"priority", f.priority}};
        if (f.type == FlowType::Periodic) {
            fj["period_ns"] = f.period_ns;
            if (f.count) fj["count"] = *f.count;
        } else {
            fj["rate_bps"] = f.rate_bps;
            fj["release_jitter_ns"] = f.release_jitter_ns;
        }
        fj["phase_ns"] = f.phase_ns;
        fj["record"] = f.record;
        j["flows"].push_back(fj);
    }
    j["output"] = {{"dir", c.output.dir}, {"records", c.output.records}, {"timeseries", c.output.timeseries}};
    return j;
}

// ---------------------------------------------------------------------------
// Semantic validation and model construction

/// Builds the topology, collecting reference errors into `errs`.
inline Topology build_topology(const ScenarioConfig& c, std::vector<std::string>& errs) {
    Topology t;
    std::set<std::string> names;
    for (const auto& n : c.nodes) {
        if (!names.insert(n.name).second) {
            errs.push_back("duplicate node name '" + n.name + "'");
            continue;
        }
        t.add_node(Node{n.name, n.kind, n.timing});
    }
    for (std::size_t i = 0; i < c.links.size(); ++i) {
        const auto& l = c.links[i];
        auto a = t.find(l.a);
        auto b = t.find(l.b);
        if (!a || !b) {
            errs.push_back("links[" + std::to_string(i) + "] references unknown node '" + (a ? l.b : l.a) + "'");
            continue;
        }
        t.add_link(Link{*a, *b, l.capacity, l.length_m, l.speed_mps});
    }
    return t;
}

inline std::vector<std::string> validation_problems(const ScenarioConfig& c) {
    std::vector<std::string> errs;
    if (c.duration_ns <= 0) errs.push_back("duration must be positive");
    if (c.mtu == 0) errs.push_back("mtu must be positive");
    if (c.cbf.credit_min > c.cbf.credit_max) errs.push_back("cbf: credit_min exceeds credit_max");
    Topology t = build_topology(c, errs);
    try {
        t.validate();
    } catch (const TopologyError& e) {
        errs.insert(errs.end(), e.problems().begin(), e.problems().end());
    }
    std::set<std::pair<std::string, std::string>> seen_ports;
    for (const auto& p : c.ports) {
        const std::string where = "port " + p.node + "->" + p.toward;
        auto n = t.find(p.node);
        auto nb = t.find(p.toward);
        if (!n || !nb) {
            errs.push_back(where + " references an unknown node");
            continue;
        }
        if (!t.port_toward_neighbor(*n, *nb)) errs.push_back(where + ": nodes are not linked");
        if (!t.node(*n).forwards()) errs.push_back(where + ": policies apply to switch egress ports only");
        if (!seen_ports.insert({p.node, p.toward}).second) errs.push_back(where + " configured twice");
        if (p.policy == Policy::TimeAware && !p.gcl) errs.push_back(where + ": TAS policy needs a gcl");
        if (p.gcl) {
            try {
                GateControlList(SimTime{p.gcl->base_time_ns}, nanoseconds(p.gcl->cycle_ns), p.gcl->entries,
                                "GCL on " + p.node + "->" + p.toward);
            } catch (const GclError& e) {
                errs.push_back(e.what());
            }
        }
    }
    auto check_clock = [&](const std::string& who, const ClockConfig& cc) {
        if (cc.jitter_ns < 0) errs.push_back("clock " + who + ": jitter_ns must be >= 0");
    };
    check_clock("default", c.clock_default);
    for (const auto& [name, cc] : c.clock_nodes) {
        if (!t.find(name)) errs.push_back("clock entry for unknown node '" + name + "'");
        check_clock(name, cc);
    }
    std::set<std::string> flow_names;
    for (const auto& f : c.flows) {
        const std::string where = "flow '" + f.name + "'";
        if (!flow_names.insert(f.name).second) errs.push_back(where + ": duplicate flow name");
        auto s = t.find(f.src);
        auto d = t.find(f.dst);
        if (!s) errs.push_back(where + " references unknown node '" + f.src + "'");
        if (!d) errs.push_back(where + " references unknown node '" + f.dst + "'");
        if (s && t.node(*s).kind == NodeKind::Switch) errs.push_back(where + ": a plain switch cannot source traffic");
        if (d && t.node(*d).kind == NodeKind::Switch) errs.push_back(where + ": a plain switch cannot sink traffic");
        if (f.payload + c.header_overhead > c.mtu) errs.push_back(where + ": wire length exceeds MTU");
        if (f.type == FlowType::Periodic) {
            if (f.period_ns <= 0) errs.push_back(where + ": period must be positive");
            else if (f.phase_ns < 0 || f.phase_ns >= f.period_ns) errs.push_back(where + ": phase must lie in [0, period)");
        } else {
            if (f.phase_ns < 0) errs.push_back(where + ": phase must be non-negative");
            if (f.release_jitter_ns < 0) errs.push_back(where + ": release_jitter_ns must be non-negative");
            if (!t.links().empty() && f.rate_bps > t.link_rate()) {
                errs.push_back(where + ": rate exceeds the path bottleneck capacity");
            }
        }
        if (s && d && errs.empty()) {
            try {
                (void)t.path(*s, *d);
            } catch (const std::exception& e) {
                errs.push_back(where + ": " + e.what());
            }
        }
    }
    return errs;
}

inline void validate(const ScenarioConfig& c) {
    auto errs = validation_problems(c);
    if (!errs.empty()) throw ConfigValidationError(std::move(errs));
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigValidationError({"cannot open config file '" + path + "'"});
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigValidationError({std::string("parse error: ") + e.what()});
    }
    ScenarioConfig c = config_from_json(j);
    validate(c);
    return c;
}

inline void save_config(const ScenarioConfig& c, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << config_to_json(c).dump(2) << '\n';
}

inline ClockModel build_clock(const ScenarioConfig& c, const Topology& t) {
    ClockModel clock(t.size(), c.seed);
    for (NodeId n = 0; n < t.size(); ++n) {
        ClockConfig cc = c.clock_default;
        if (auto it = c.clock_nodes.find(t.node(n).name); it != c.clock_nodes.end()) cc = it->second;
        clock.set(n, ClockError{nanoseconds(cc.offset_ns), nanoseconds(cc.jitter_ns)});
    }
    return clock;
}

/// Validated config -> ready-to-run simulation with flows in config order.
inline std::unique_ptr<Simulation> build_simulation(const ScenarioConfig& c) {
    validate(c);
    std::vector<std::string> errs;
    Topology t = build_topology(c, errs);
    NetworkOptions opts{c.mtu, c.queue_capacity, c.default_policy};
    auto sim = std::make_unique<Simulation>(t, build_clock(c, t), opts, c.header_overhead);
    Network& net = sim->network();
    for (NodeId n = 0; n < t.size(); ++n) {
        if (!t.node(n).forwards()) continue;
        for (PortId p = 0; p < t.ports(n).size(); ++p) net.configure_port(n, p, c.default_policy, std::nullopt, c.cbf);
    }
    for (const auto& pc : c.ports) {
        const NodeId n = *t.find(pc.node);
        const PortId p = *t.port_toward_neighbor(n, *t.find(pc.toward));
        std::optional<GateControlList> gcl;
        if (pc.gcl) {
            gcl.emplace(SimTime{pc.gcl->base_time_ns}, nanoseconds(pc.gcl->cycle_ns), pc.gcl->entries,
                        "GCL on " + pc.node + "->" + pc.toward);
        }
        net.configure_port(n, p, pc.policy, std::move(gcl), c.cbf);
    }
    for (const auto& f : c.flows) {
        const NodeId s = *t.find(f.src);
        const NodeId d = *t.find(f.dst);
        if (f.type == FlowType::Periodic) {
            PeriodicFlowParams ps{f.name, s, d, f.payload, nanoseconds(f.period_ns), nanoseconds(f.phase_ns),
                                f.priority, f.count, f.record};
            sim->add_periodic(std::move(ps));
        } else {
            SaturatingFlowParams ss{f.name, s, d, f.payload, f.rate_bps, f.priority, nanoseconds(f.phase_ns),
                                  f.record, nanoseconds(f.release_jitter_ns)};
            sim->add_saturating(std::move(ss));
        }
    }
    return sim;
}

}  // namespace tsn
