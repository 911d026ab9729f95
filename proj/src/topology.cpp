// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgrecon {

SquareMatrix SquareMatrix::identity(std::size_t n)
{
    SquareMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Topology::Topology(std::vector<NodeSpec> nodes, const std::vector<Edge>& edges)
    : nodes_(std::move(nodes)), adjacency_(nodes_.size() * nodes_.size(), 0)
{
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != static_cast<int>(i)) {
            throw std::invalid_argument("node ids must equal their inventory position");
        }
    }
    for (const auto& [a, b] : edges) {
        if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= size() || static_cast<std::size_t>(b) >= size()) {
            throw std::invalid_argument("edge references an unknown node");
        }
        add_edge(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    }
}

void Topology::add_edge(std::size_t i, std::size_t j) noexcept
{
    set_entry(i, j, true);
    set_entry(j, i, true);
}

std::vector<int> Topology::neighbors(std::size_t i) const
{
    std::vector<int> out;
    for (std::size_t j = 0; j < size(); ++j) {
        if (adjacent(i, j)) {
            out.push_back(static_cast<int>(j));
        }
    }
    return out;
}

int Topology::degree(std::size_t i) const noexcept
{
    int d = 0;
    for (std::size_t j = 0; j < size(); ++j) {
        d += adjacent(i, j) ? 1 : 0;
    }
    return d;
}

std::vector<Edge> Topology::edges() const
{
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = i + 1; j < size(); ++j) {
            if (adjacent(i, j)) {
                out.emplace_back(static_cast<int>(i), static_cast<int>(j));
            }
        }
    }
    return out;
}

bool Topology::connected() const
{
    if (size() == 0) {
        return true;
    }
    std::vector<bool> seen(size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t visited = 1;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < size(); ++j) {
            if (!seen[j] && (adjacent(i, j) || adjacent(j, i))) {
                seen[j] = true;
                ++visited;
                stack.push_back(j);
            }
        }
    }
    return visited == size();
}

std::vector<NodeSpec> default_inventory(std::span<const Tech> eligible_tech)
{
    struct Row {
        Role role;
        Tier tier;
        Tech tech;
    };
    static constexpr Row kRows[] = {
        {Role::SmartMeter, Tier::Han, Tech::ZigBee},  {Role::SmartMeter, Tier::Han, Tech::ZigBee},
        {Role::SmartMeter, Tier::Han, Tech::WiFi},    {Role::Gateway, Tier::Han, Tech::WiFi},
        {Role::DER, Tier::Nan, Tech::LoRa},           {Role::DER, Tier::Nan, Tech::LoRa},
        {Role::FeederRelay, Tier::Nan, Tech::PLC},    {Role::Controller, Tier::Nan, Tech::LTE},
        {Role::PMU, Tier::Wan, Tech::Fiber},          {Role::SCADA, Tier::Wan, Tech::Fiber},
        {Role::AMIHeadend, Tier::Wan, Tech::LTE},     {Role::SubstationGW, Tier::Wan, Tech::PLC},
    };
    std::vector<NodeSpec> nodes;
    int id = 0;
    for (const auto& row : kRows) {
        const bool listed = std::find(eligible_tech.begin(), eligible_tech.end(), row.tech) != eligible_tech.end();
        nodes.push_back(NodeSpec{id++, row.role, row.tier, row.tech, listed && row.tech != Tech::Fiber});
    }
    return nodes;
}

std::vector<NodeSpec> default_inventory()
{
    static constexpr Tech kEligible[] = {Tech::ZigBee, Tech::WiFi, Tech::LoRa, Tech::PLC, Tech::LTE};
    return default_inventory(kEligible);
}

std::vector<Edge> default_edges()
{
    return {{0, 3}, {1, 3}, {2, 3}, {3, 7},  {4, 7},  {5, 7},   {6, 7},
            {7, 8}, {7, 9}, {7, 10}, {7, 11}, {8, 9}, {9, 10}, {10, 11}};
}

Topology build_default_topology()
{
    return Topology(default_inventory(), default_edges());
}

Topology build_default_topology(std::span<const Tech> eligible_tech)
{
    return Topology(default_inventory(eligible_tech), default_edges());
}

SquareMatrix compute_mixing(const Topology& topology, double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("mixing alpha must lie in [0, 1]");
    }
    const std::size_t n = topology.size();
    SquareMatrix w(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int deg = topology.degree(i);
        if (deg == 0) {
            throw std::invalid_argument("node " + std::to_string(i) + " has zero degree");
        }
        const double share = (1.0 - alpha) / static_cast<double>(deg);
        for (std::size_t j = 0; j < n; ++j) {
            w(i, j) = topology.adjacent(i, j) ? share : 0.0;
        }
        w(i, i) += alpha;
    }
    return w;
}

std::vector<double> neighbor_aggregate(const SquareMatrix& mixing, std::span<const double> x)
{
    if (x.size() != mixing.size()) {
        throw std::invalid_argument("neighbor_aggregate: dimension mismatch");
    }
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            acc += mixing(i, j) * x[j];
        }
        out[i] = acc;
    }
    return out;
}

std::vector<double> neighbor_deviation(const SquareMatrix& mixing, std::span<const double> x)
{
    auto out = neighbor_aggregate(mixing, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::abs(x[i] - out[i]);
    }
    return out;
}

std::vector<std::string> check_tier_constraints(const Topology& topology)
{
    std::vector<std::string> out;
    const std::size_t n = topology.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (topology.adjacent(i, i)) {
            out.push_back("self-loop at node " + std::to_string(i));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || !topology.adjacent(i, j)) {
                continue;
            }
            if (!topology.adjacent(j, i)) {
                out.push_back("asymmetric adjacency " + std::to_string(i) + "->" + std::to_string(j));
            }
            if (i < j) {
                const auto ti = topology.node(i).tier;
                const auto tj = topology.node(j).tier;
                if ((ti == Tier::Han && tj == Tier::Wan) || (ti == Tier::Wan && tj == Tier::Han)) {
                    out.push_back("HAN-WAN edge " + std::to_string(i) + "-" + std::to_string(j));
                }
            }
            if (topology.node(i).role == Role::SmartMeter && topology.node(j).role != Role::Gateway) {
                out.push_back("smart meter " + std::to_string(i) + " linked to non-gateway node " + std::to_string(j));
            }
        }
    }
    return out;
}

} // namespace sgrecon
