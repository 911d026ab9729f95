// SPDX-License-Identifier: Apache-2.0
//
// Dataset audits: shadowing proxy statistics, coverage, distribution shift,
// leak-safety, causality, label soundness and structural invariants.

#pragma once

#include "sgrecon/config.hpp"
#include "sgrecon/dataset.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/table.hpp"
#include "sgrecon/topology.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sgrecon {

struct ShadowStats {
    std::size_t rows = 0;  ///< qualifying rows
    std::size_t pairs = 0; ///< consecutive qualifying pairs
    double sigma_db = 0.0;
    double rho1 = 0.0;
    double dcor_m = 0.0;
};

/// sigma over qualifying rows; rho1 is the Pearson correlation of
/// consecutive pairs inside qualifying runs; dcor = -v dt / ln rho1.
/// Throws std::invalid_argument with fewer than `min_rows` qualifying rows.
ShadowStats estimate_shadow_stats(std::span<const double> shadow_db, std::span<const std::uint8_t> qualifying,
                                  double speed_mps, double dt_seconds, std::size_t min_rows = 1000);

/// Lag-1 Pearson correlation over pairs (t-1, t) where both rows qualify.
double run_segmented_lag1(std::span<const double> x, std::span<const std::uint8_t> qualifying, std::size_t* pairs = nullptr);

struct ShadowAudit {
    int node_id = 0;
    bool gated = false;
    bool skipped = false;
    bool passed = true;
    double expected_sigma_db = 0.0;
    ShadowStats stats;
    std::string note;
};

struct CoverageEntry {
    int node_id = 0;
    Split split = Split::Train;
    bool eligible = false;
    std::int64_t active = 0;  ///< A_i
    std::int64_t labeled = 0; ///< Y_i
    double ratio = 0.0;       ///< Y_i / max(1, A_i)
    bool gated = false;
    bool passed = true;
};

CoverageEntry coverage_entry(int node_id, Split split, bool eligible, std::span<const double> tx_count,
                             std::span<const double> labels);

struct ClassQuantiles {
    std::array<double, 5> attack{};
    std::array<double, 5> normal{};
};

inline constexpr std::array<double, 5> kShiftQuantiles{0.01, 0.25, 0.50, 0.75, 0.99};
inline constexpr std::array<const char*, 4> kShiftObservables{"C_db", "SNR", "PER", "L_ewma"};

struct ShiftEntry {
    int node_id = 0;
    std::size_t attack_rows = 0;
    std::size_t normal_rows = 0;
    bool skipped = false;
    bool gated = false;
    bool passed = true;
    std::array<double, 4> delta{}; ///< attack mean minus normal mean, per kShiftObservables
    std::array<ClassQuantiles, 4> quantiles{};
};

/// Linear-interpolation quantile of an unsorted sample (copied). NaN on empty input.
double quantile(std::vector<double> values, double q);

ShiftEntry shift_entry(int node_id, const Table& table, std::size_t min_rows, bool eligible);

/// Returns the first epoch t <= cut where features differ after randomizing
/// the input beyond each cut point, or -1 when the feature map is causal.
/// `feature_fn` maps a series to one output per epoch.
std::int64_t future_randomization_probe(const std::function<std::vector<double>(const std::vector<double>&)>& feature_fn,
                                        std::span<const double> x, std::span<const std::int64_t> cuts, RandomStream& stream);

struct CrossSplitEntry {
    int node_id = 0;
    Split other = Split::Val;
    std::size_t pairs = 0;
    double correlation = 0.0;
    double bound = 0.0;
    bool passed = true;
};

/// Correlation of AR(1)-prewhitened shadow traces over rows unlabeled in
/// both splits; the bound is `sigmas / sqrt(pairs)`.
CrossSplitEntry cross_split_correlation(int node_id, Split other, std::span<const double> shadow_a,
                                        std::span<const double> labels_a, std::span<const double> shadow_b,
                                        std::span<const double> labels_b, double sigmas);

struct CheckResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

/// Train standardization audit. Returns one failure string per offending
/// (node, column); empty when the document is a train-only fit.
std::vector<std::string> standardization_audit(const std::vector<Table>& train, const std::vector<Table>& val,
                                               const std::string& normalization_text, double mean_tol, double std_tol);

/// Causality audit over a split: engineered columns must match a fresh
/// recomputation from the raw columns, and must not change when the raw
/// inputs are randomized beyond each cut point.
std::vector<std::string> causality_audit(const GeneratorConfig& config, const Topology& topology,
                                         const std::vector<Table>& tables, int cut_points, std::uint64_t seed,
                                         unsigned threads = 1);

struct ValidationReport {
    ValidationParams thresholds;
    double target_attack_frac = 0.0;
    std::vector<ShadowAudit> shadow;
    std::vector<CoverageEntry> coverage;
    std::vector<ShiftEntry> shift;
    std::vector<CrossSplitEntry> cross_split;
    std::vector<CheckResult> checks;

    bool passed() const noexcept;
    std::string to_json() const;
    std::string to_text() const;
    /// Per-class quantile tables for external plotting.
    std::string quantiles_csv() const;
};

ValidationReport validate_dataset(const Dataset& dataset, unsigned threads = 1);

} // namespace sgrecon
