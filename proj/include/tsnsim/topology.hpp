#pragma once

#include "tsnsim/delays.hpp"
#include "tsnsim/frame.hpp"
#include "tsnsim/time.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tsn {

enum class NodeKind { Endpoint, BridgedEndpoint, Switch };

inline const char* to_string(NodeKind k) {
    switch (k) {
        case NodeKind::Endpoint: return "endpoint";
        case NodeKind::BridgedEndpoint: return "bridged_endpoint";
        case NodeKind::Switch: return "switch";
    }
    return "?";
}

/// Cut-through switch latency constants. Length-independent by construction.
struct SwitchTiming {
    Duration ingress{};     // reception PHY + MAC
    Duration processing{};  // lookup and forwarding decision
    Duration egress{};      // transmission PHY + MAC
};

struct Node {
    std::string name;
    NodeKind kind = NodeKind::Endpoint;
    SwitchTiming timing{};  // ignored for plain endpoints

    [[nodiscard]] bool forwards() const noexcept { return kind != NodeKind::Endpoint; }
};

struct Link {
    NodeId a = 0;
    NodeId b = 0;
    BitsPerSecond capacity = 0;
    double length_m = 0.0;
    double speed_mps = kCopperSpeed;

    [[nodiscard]] Duration propagation() const { return propagation_delay(length_m, speed_mps); }
};

/// One port of a node: the link it sits on and the node at the other end.
struct PortRef {
    std::size_t link = 0;
    NodeId neighbor = 0;
};

/// One transmission step along a path: `node` sends on `port` over `link`.
struct Hop {
    NodeId node = 0;
    PortId port = 0;
    std::size_t link = 0;
};

/// Thrown by Topology::validate with every violation found.
class TopologyError : public std::runtime_error {
public:
    explicit TopologyError(std::vector<std::string> problems)
        : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

    [[nodiscard]] const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> problems_;
};

/// Static network graph with forwarding derived from the (tree) structure.
class Topology {
public:
    NodeId add_node(Node n) {
        nodes_.push_back(std::move(n));
        ports_.emplace_back();
        routes_valid_ = false;
        return static_cast<NodeId>(nodes_.size() - 1);
    }

    std::size_t add_link(Link l) {
        if (l.a >= nodes_.size() || l.b >= nodes_.size()) {
            throw std::out_of_range("add_link: unknown node");
        }
        links_.push_back(l);
        const std::size_t idx = links_.size() - 1;
        ports_[l.a].push_back({idx, l.b});
        ports_[l.b].push_back({idx, l.a});
        routes_valid_ = false;
        return idx;
    }

    std::array<std::uint8_t, kNumTrafficClasses> pcp_to_queue{0, 1, 2, 3, 4, 5, 6, 7};

    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<Link>& links() const noexcept { return links_; }
    [[nodiscard]] const Node& node(NodeId id) const { return nodes_.at(id); }
    [[nodiscard]] const Link& link(std::size_t i) const { return links_.at(i); }
    [[nodiscard]] const std::vector<PortRef>& ports(NodeId id) const { return ports_.at(id); }
    [[nodiscard]] std::size_t size() const noexcept { return nodes_.size(); }

    [[nodiscard]] std::optional<NodeId> find(std::string_view name) const {
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].name == name) return static_cast<NodeId>(i);
        }
        return std::nullopt;
    }

    [[nodiscard]] std::optional<PortId> port_toward_neighbor(NodeId from, NodeId neighbor) const {
        const auto& ps = ports_.at(from);
        for (std::size_t p = 0; p < ps.size(); ++p) {
            if (ps[p].neighbor == neighbor) return static_cast<PortId>(p);
        }
        return std::nullopt;
    }

    /// Port index on `peer` that terminates the link behind `from`'s `port`.
    [[nodiscard]] PortId peer_port(NodeId from, PortId port) const {
        const PortRef& pr = ports_.at(from).at(port);
        const auto& peer_ports = ports_.at(pr.neighbor);
        for (std::size_t p = 0; p < peer_ports.size(); ++p) {
            if (peer_ports[p].link == pr.link) return static_cast<PortId>(p);
        }
        throw std::logic_error("peer_port: dangling link");
    }

    /// Common link rate; validation guarantees there is exactly one.
    [[nodiscard]] BitsPerSecond link_rate() const {
        return links_.empty() ? 0 : links_.front().capacity;
    }

    /// Collects every structural problem. Throws TopologyError if any.
    void validate() const {
        std::vector<std::string> errs;
        std::unordered_map<std::string, int> seen;
        for (const auto& n : nodes_) {
            if (n.name.empty()) errs.push_back("node with empty name");
            if (++seen[n.name] == 2) errs.push_back("duplicate node name '" + n.name + "'");
            if (n.forwards()) {
                const auto& t = n.timing;
                if (t.ingress.ns < 0 || t.processing.ns < 0 || t.egress.ns < 0) {
                    errs.push_back("node '" + n.name + "' has a negative switch timing constant");
                }
            }
        }
        for (std::size_t i = 0; i < links_.size(); ++i) {
            const Link& l = links_[i];
            const std::string tag = "link " + nodes_[l.a].name + "-" + nodes_[l.b].name;
            if (l.a == l.b) errs.push_back(tag + " is a self-loop");
            if (l.capacity == 0) errs.push_back(tag + " has zero capacity");
            if (!(l.speed_mps > 0.0)) errs.push_back(tag + " has non-positive propagation speed");
            if (l.length_m < 0.0) errs.push_back(tag + " has negative length");
            if (l.capacity != links_.front().capacity) {
                errs.push_back(tag + " capacity differs from the network rate (mixed rates unsupported)");
            }
        }
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            if (nodes_[n].kind == NodeKind::Endpoint && ports_[n].size() > 1) {
                errs.push_back("plain endpoint '" + nodes_[n].name + "' has more than one port");
            }
        }
        if (has_cycle()) errs.push_back("topology contains a cycle; forwarding paths must be unique");
        if (!errs.empty()) throw TopologyError(std::move(errs));
    }

    /// Egress port on `at` toward `dst`, or nullopt if unreachable.
    [[nodiscard]] std::optional<PortId> next_port(NodeId at, NodeId dst) const {
        build_routes();
        const PortId p = routes_[at][dst];
        if (p == kNoRoute) return std::nullopt;
        return p;
    }

    /// Transmission steps from src to dst; empty when src == dst.
    [[nodiscard]] std::vector<Hop> path(NodeId src, NodeId dst) const {
        std::vector<Hop> hops;
        NodeId at = src;
        while (at != dst) {
            auto p = next_port(at, dst);
            if (!p) {
                throw std::invalid_argument("no forwarding entry from '" + nodes_.at(at).name +
                                            "' to '" + nodes_.at(dst).name + "'");
            }
            const PortRef& pr = ports_[at][*p];
            hops.push_back({at, *p, pr.link});
            at = pr.neighbor;
            if (hops.size() > nodes_.size()) throw std::logic_error("forwarding loop");
        }
        return hops;
    }

private:
    static constexpr PortId kNoRoute = ~PortId{0};

    [[nodiscard]] bool has_cycle() const {
        // A forest has exactly (nodes - components) edges.
        std::vector<std::size_t> parent(nodes_.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& l : links_) {
            if (l.a >= nodes_.size() || l.b >= nodes_.size()) continue;
            auto ra = find(l.a), rb = find(l.b);
            if (ra == rb) return true;
            parent[ra] = rb;
        }
        return false;
    }

    // BFS from every destination; next hop toward dst is the port to the BFS parent.
    void build_routes() const {
        if (routes_valid_) return;
        const std::size_t n = nodes_.size();
        routes_.assign(n, std::vector<PortId>(n, kNoRoute));
        for (NodeId dst = 0; dst < n; ++dst) {
            std::vector<bool> seen(n, false);
            std::queue<NodeId> q;
            q.push(dst);
            seen[dst] = true;
            while (!q.empty()) {
                const NodeId u = q.front();
                q.pop();
                for (const PortRef& pr : ports_[u]) {
                    const NodeId v = pr.neighbor;
                    if (seen[v]) continue;
                    // Only forwarding nodes relay; plain endpoints are leaves.
                    seen[v] = true;
                    routes_[v][dst] = *port_toward_neighbor(v, u);
                    if (nodes_[v].forwards() || v == dst) q.push(v);
                }
            }
        }
        routes_valid_ = true;
    }

    std::vector<Node> nodes_;
    std::vector<Link> links_;
    std::vector<std::vector<PortRef>> ports_;
    mutable std::vector<std::vector<PortId>> routes_;
    mutable bool routes_valid_ = false;
};

}  // namespace tsn
