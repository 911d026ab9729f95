// SPDX-License-Identifier: Apache-2.0
//
// End-to-end split generation (latents, attacks, re-derivation, trim,
// features, labels) and dataset export.

#pragma once

#include "sgrecon/attacks.hpp"
#include "sgrecon/channel.hpp"
#include "sgrecon/config.hpp"
#include "sgrecon/features.hpp"
#include "sgrecon/linkchain.hpp"
#include "sgrecon/table.hpp"
#include "sgrecon/topology.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sgrecon {

/// Post-burn-in traces for one node of one split.
struct NodeTrace {
    NodeSpec spec;
    double delta_node_db = 0.0;
    std::vector<std::int32_t> tx_count;
    std::vector<Complex> h;
    std::vector<double> shadow_db;
    std::vector<double> interf_db;
    LinkObservables obs;
    PhaseDescriptors phase;
    std::vector<std::uint8_t> labels;
    /// Deterministic latency part L0 + delta_rtx * reTX(PER), for coherence audits.
    std::vector<double> latency_det_ms;
};

struct SplitOptions {
    bool attacks = true;
    bool build_tables = true;
    unsigned threads = 1;
};

struct SplitArtifact {
    Split split = Split::Train;
    std::uint64_t split_seed = 0;
    std::vector<NodeTrace> nodes;
    std::vector<Table> tables; ///< per node, exported column order
    std::vector<AttackWindow> windows;
    PlacementStats placement;
};

/// Exported per-node CSV header in order.
std::vector<std::string> csv_header();
/// Rolling feature column name, e.g. "SNR_roll_mean".
std::string rolling_column_name(std::string_view observable, std::string_view stat);

/// Engineered columns (rolling, activity, neighbor) from the raw exported
/// columns of every node. `raw[i]` must hold t .. attack_label for node i.
/// Returns full tables in export order.
std::vector<Table> build_feature_tables(const GeneratorConfig& config, const Topology& topology,
                                        std::vector<Table> raw, unsigned threads = 1);

/// Deterministic given (config, topology, split).
SplitArtifact generate_split(const GeneratorConfig& config, const Topology& topology, Split split,
                             const SplitOptions& options = {});

/// Train-only standardizer over every standardized column plus derived C_db.
Standardizer fit_standardizer(const std::vector<Table>& train_tables, double std_floor);

struct FileDigest {
    std::string name;
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct DatasetManifest {
    std::vector<FileDigest> files; ///< every exported file except the digest list itself
    std::size_t window_count = 0;
};

inline constexpr const char* kDigestFile = "digests.sha256";
inline constexpr const char* kManifestFile = "attacks_windows_meta.csv";
inline constexpr const char* kNormalizationFile = "normalization.json";
inline constexpr const char* kConfigFile = "config.json";
inline constexpr const char* kNodesFile = "topology_nodes.csv";
inline constexpr const char* kEdgesFile = "topology_edges.csv";
inline constexpr const char* kAdjacencyFile = "topology_adjacency.txt";

std::string node_file_name(int node_id, Split split);
/// The 42 data files of a dataset for the given topology size, sorted.
std::vector<std::string> dataset_file_names(std::size_t node_count);

/// Writes the dataset into `out_dir` through a sibling staging directory.
/// An existing `out_dir` is replaced only if it is empty or holds a previous
/// dataset (has a digest list). Throws DatasetError on I/O failure.
DatasetManifest generate_dataset(const GeneratorConfig& config, const std::filesystem::path& out_dir,
                                 unsigned threads = 1);

std::string topology_nodes_csv(const Topology& topology);
std::string topology_edges_csv(const Topology& topology);
std::string topology_adjacency_text(const Topology& topology);

} // namespace sgrecon
