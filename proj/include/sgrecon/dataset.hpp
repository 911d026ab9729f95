// SPDX-License-Identifier: Apache-2.0
//
// Reading an exported dataset directory back into memory.

#pragma once

#include "sgrecon/config.hpp"
#include "sgrecon/table.hpp"
#include "sgrecon/topology.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace sgrecon {

struct Dataset {
    std::filesystem::path dir;
    GeneratorConfig config;
    Topology topology;
    std::array<std::vector<Table>, 3> tables; ///< [split][node]
    std::string normalization_text;
    std::string manifest_text;
    std::map<std::string, std::string> listed_digests;   ///< file -> hex, from the digest list
    std::map<std::string, std::string> computed_digests; ///< file -> hex, of the bytes read
};

/// Loads every file of a dataset. Throws DatasetError when a file is
/// missing or unreadable, a CSV is malformed, a node table has the wrong
/// header or row count, or the config snapshot cannot be parsed.
Dataset load_dataset(const std::filesystem::path& dir);

struct ManifestRow {
    Split split = Split::Train;
    int window_id = 0;
    std::int64_t s0 = 0;
    std::int64_t s1 = 0;
    std::int64_t t0 = 0;
    std::int64_t t1 = 0;
    std::vector<int> nodes;
    double kdrop_db = 0.0;
    double shadow_loss_db = 0.0;
    double alpha_drop = 1.0;
    double sigma_mult = 1.0;
};

/// Throws DatasetError on malformed rows.
std::vector<ManifestRow> parse_manifest(const std::string& text);

} // namespace sgrecon
