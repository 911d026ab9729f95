// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "sgrecon/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sgrecon {

struct NodeSpec {
    int id = 0;
    Role role = Role::SmartMeter;
    Tier tier = Tier::Han;
    Tech tech = Tech::ZigBee;
    bool eligible = false;

    bool operator==(const NodeSpec&) const = default;
};

/// Dense row-major square matrix.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}

    static SquareMatrix identity(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * n_ + c]; }
    std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * n_, n_}; }
    std::span<const double> data() const noexcept { return data_; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

using Edge = std::pair<int, int>;

/// Undirected communication graph with role/tier/technology metadata.
class Topology {
public:
    Topology() = default;
    /// Builds from an inventory and an undirected edge list. Edges are stored
    /// symmetrically; ids must index `nodes`.
    Topology(std::vector<NodeSpec> nodes, const std::vector<Edge>& edges);

    std::size_t size() const noexcept { return nodes_.size(); }
    const std::vector<NodeSpec>& nodes() const noexcept { return nodes_; }
    const NodeSpec& node(std::size_t i) const { return nodes_.at(i); }

    bool adjacent(std::size_t i, std::size_t j) const noexcept { return adjacency_[i * size() + j] != 0; }
    /// Sets a single directed entry; used to build malformed fixtures.
    void set_entry(std::size_t i, std::size_t j, bool value) noexcept { adjacency_[i * size() + j] = value ? 1 : 0; }
    void add_edge(std::size_t i, std::size_t j) noexcept;

    std::vector<int> neighbors(std::size_t i) const;
    int degree(std::size_t i) const noexcept;
    /// Undirected edges (i < j) in lexicographic order, read from the upper triangle.
    std::vector<Edge> edges() const;
    bool connected() const;

private:
    std::vector<NodeSpec> nodes_;
    std::vector<std::uint8_t> adjacency_;
};

/// The 12-node HAN/NAN/WAN inventory; eligibility defaults to non-fiber.
std::vector<NodeSpec> default_inventory();
std::vector<NodeSpec> default_inventory(std::span<const Tech> eligible_tech);
std::vector<Edge> default_edges();

Topology build_default_topology();
Topology build_default_topology(std::span<const Tech> eligible_tech);

/// W = alpha I + (1 - alpha) D^-1 A. Throws std::invalid_argument on a
/// zero-degree node or alpha outside [0, 1].
SquareMatrix compute_mixing(const Topology& topology, double alpha);

/// W x. Throws std::invalid_argument on a dimension mismatch.
std::vector<double> neighbor_aggregate(const SquareMatrix& mixing, std::span<const double> x);
/// |x_i - (W x)_i|.
std::vector<double> neighbor_deviation(const SquareMatrix& mixing, std::span<const double> x);

std::vector<std::string> check_tier_constraints(const Topology& topology);

} // namespace sgrecon
