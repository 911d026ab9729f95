// SPDX-License-Identifier: Apache-2.0
//
// Causal rolling descriptors, neighbor aggregates and train-only per-node
// standardization.

#pragma once

#include "sgrecon/topology.hpp"

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgrecon {

/// Rolling statistic suffixes in export order.
inline constexpr std::array<std::string_view, 7> kRollingStats{"roll_mean",    "roll_std",   "roll_skew", "roll_kurt",
                                                               "roll_entropy", "roll_drift", "delta"};
/// Base observables for rolling features, in export order.
inline constexpr std::array<std::string_view, 4> kRollingObservables{"C_db", "SNR", "PER", "L_ewma"};
/// Observables with neighbor aggregates, in export order.
inline constexpr std::array<std::string_view, 4> kNeighborObservables{"SNR", "PER", "L_ewma", "C_db"};

struct RollingFeatures {
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<double> skew;
    std::vector<double> kurt;
    std::vector<double> entropy;
    std::vector<double> drift;
    std::vector<double> delta;

    /// Column by position in kRollingStats.
    const std::vector<double>& column(std::size_t k) const;
};

/// Statistics at epoch t use samples max(0, t - window + 1)..t only.
/// Throws std::invalid_argument for window < 2, bins < 2 or empty input.
RollingFeatures rolling_features(std::span<const double> x, int window, int bins, double std_floor = 1e-8);

std::vector<double> rolling_mean(std::span<const double> x, int window);

struct NeighborFeatures {
    std::vector<std::vector<double>> avg; ///< [node][epoch]
    std::vector<std::vector<double>> dev; ///< [node][epoch]
};

/// avg_i(t) = (W x(t))_i and dev_i(t) = |x_i(t) - avg_i(t)|, with x given as [node][epoch].
NeighborFeatures neighbor_features(const SquareMatrix& mixing, const std::vector<std::vector<double>>& x);

struct ColumnStats {
    double mean = 0.0;
    double std = 1.0;
    bool operator==(const ColumnStats&) const = default;
};

/// Per-node, per-column affine normalization fit on the train split.
class Standardizer {
public:
    explicit Standardizer(double std_floor = 1e-8) : std_floor_(std_floor) {}

    /// Fits one node from named columns. Throws std::invalid_argument on an
    /// empty table.
    void fit_node(int node_id, const std::vector<std::string>& names, const std::vector<std::vector<double>>& columns);
    void set(int node_id, const std::string& column, ColumnStats stats) { params_[node_id][column] = stats; }

    bool has(int node_id, const std::string& column) const;
    /// Throws std::out_of_range for an unknown node or column.
    const ColumnStats& stats(int node_id, const std::string& column) const;
    std::vector<double> apply(int node_id, const std::string& column, std::span<const double> values) const;

    double std_floor() const noexcept { return std_floor_; }
    const std::map<int, std::map<std::string, ColumnStats>>& params() const noexcept { return params_; }

    std::string to_json() const;
    /// Throws std::invalid_argument on a malformed document.
    static Standardizer from_json(std::string_view document);

    bool operator==(const Standardizer&) const = default;

private:
    double std_floor_;
    std::map<int, std::map<std::string, ColumnStats>> params_;
};

/// Mean and population standard deviation (two-pass), std floored.
ColumnStats column_stats(std::span<const double> values, double std_floor);

/// Columns never standardized: identifiers, counts, labels, diagnostics.
bool is_standardization_excluded(std::string_view column) noexcept;

} // namespace sgrecon
