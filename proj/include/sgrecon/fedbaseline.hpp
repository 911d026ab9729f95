// SPDX-License-Identifier: Apache-2.0
//
// Federated-averaged logistic regression over the non-fiber clients, with
// macro-averaged evaluation.

#pragma once

#include "sgrecon/config.hpp"
#include "sgrecon/features.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/table.hpp"
#include "sgrecon/topology.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sgrecon {

/// Canonical feature order for the detector.
inline constexpr std::array<std::string_view, 11> kBaselineFeatures{
    "SNR",    "C_db",   "PER", "L_ewma", "phase_sin", "phase_cos", "dphase", "avg_neighbor_SNR",
    "avg_neighbor_C_db", "avg_neighbor_PER", "avg_neighbor_L_ewma"};

/// Active rows of one client for one split, standardized with train-only
/// parameters. Row-major features.
struct ClientDataset {
    int node_id = 0;
    Split split = Split::Train;
    std::size_t dim = kBaselineFeatures.size();
    std::vector<double> x;
    std::vector<std::uint8_t> y;

    std::size_t rows() const noexcept { return y.size(); }
    std::span<const double> row(std::size_t r) const noexcept { return {x.data() + r * dim, dim}; }
};

/// tables[split][node] in exported column layout. Fiber nodes are skipped.
/// Throws std::out_of_range when the standardizer lacks an entry.
std::vector<std::array<ClientDataset, 3>> build_client_datasets(const std::array<std::vector<Table>, 3>& tables,
                                                                const Topology& topology,
                                                                const Standardizer& standardizer);

struct LogisticModel {
    std::vector<double> w;
    double b = 0.0;
};

double sigmoid(double z) noexcept;

struct ClassWeights {
    double negative = 1.0;
    double positive = 1.0;
};

/// n / (2 n_c) per class; a missing class gets weight 0.
ClassWeights class_balanced_weights(std::span<const std::uint8_t> y) noexcept;

/// Mean class-weighted cross-entropy over `rows` (all rows when empty).
double logistic_loss(const LogisticModel& model, const ClientDataset& data, ClassWeights weights,
                     std::span<const std::size_t> rows = {});
/// Gradient of logistic_loss; grad_w is resized to the feature dimension.
void logistic_gradient(const LogisticModel& model, const ClientDataset& data, ClassWeights weights,
                       std::span<const std::size_t> rows, std::vector<double>& grad_w, double& grad_b);

/// Federated averaging. `loss_history`, when given, receives the pooled
/// training loss after each round. Throws std::invalid_argument when the
/// pooled labels hold a single class.
LogisticModel fedavg_train(std::span<const ClientDataset> clients, const BaselineParams& params,
                           std::uint64_t train_seed, std::vector<double>* loss_history = nullptr);

struct ClientMetrics {
    int node_id = 0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t tn = 0;
    std::int64_t fn = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    bool no_positives = false;
};

ClientMetrics metrics_from_confusion(int node_id, std::int64_t tp, std::int64_t fp, std::int64_t tn, std::int64_t fn);

struct Evaluation {
    std::vector<ClientMetrics> clients;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
};

Evaluation evaluate_clients(const LogisticModel& model, std::span<const ClientDataset> clients, double threshold);

/// Default training seed when none is configured.
std::uint64_t default_train_seed(std::uint64_t seed_base) noexcept;

std::string metrics_csv(const Evaluation& evaluation);

struct BaselineRun {
    std::uint64_t train_seed = 0;
    LogisticModel model;
    std::vector<double> loss_history;
    Evaluation validation;
    Evaluation test;
    std::size_t train_rows = 0;
};

/// Builds clients, trains on train rows only and evaluates val and test.
BaselineRun run_baseline(const std::array<std::vector<Table>, 3>& tables, const Topology& topology,
                         const Standardizer& standardizer, const BaselineParams& params, std::uint64_t train_seed);

std::string baseline_json(const BaselineRun& run, const BaselineParams& params);

} // namespace sgrecon
