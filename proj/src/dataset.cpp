// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/dataset.hpp"
#include "sgrecon/numfmt.hpp"
#include "sgrecon/pipeline.hpp"

#include <sstream>

namespace sgrecon {

namespace fs = std::filesystem;

Dataset load_dataset(const fs::path& dir)
{
    if (!fs::is_directory(dir)) {
        throw DatasetError("dataset directory " + dir.string() + " does not exist");
    }
    Dataset ds;
    ds.dir = dir;
    const auto read = [&](const std::string& name) {
        const auto path = dir / name;
        if (!fs::exists(path)) {
            throw DatasetError("missing file " + name);
        }
        std::string content = read_file(path);
        ds.computed_digests[name] = sha256_hex(content);
        return content;
    };

    const std::string digest_text = read(kDigestFile);
    ds.computed_digests.erase(kDigestFile);
    std::istringstream lines(digest_text);
    std::string line;
    while (std::getline(lines, line)) {
        const auto sep = line.find("  ");
        if (sep == std::string::npos || sep != 64) {
            throw DatasetError(std::string(kDigestFile) + ": malformed line '" + line + "'");
        }
        ds.listed_digests[line.substr(sep + 2)] = line.substr(0, sep);
    }

    try {
        ds.config = load_config(read(kConfigFile));
    } catch (const ConfigError& e) {
        throw DatasetError(std::string(kConfigFile) + ": " + e.what());
    }
    ds.topology = build_default_topology(ds.config.attack.eligible_tech);
    ds.normalization_text = read(kNormalizationFile);
    ds.manifest_text = read(kManifestFile);
    for (const char* name : {kNodesFile, kEdgesFile, kAdjacencyFile}) {
        read(name);
    }

    const auto header = csv_header();
    for (Split split : kAllSplits) {
        auto& tables = ds.tables[index(split)];
        for (std::size_t i = 0; i < ds.topology.size(); ++i) {
            const auto name = node_file_name(static_cast<int>(i), split);
            Table table = parse_csv(read(name), name);
            if (table.names != header) {
                throw DatasetError(name + ": unexpected header");
            }
            const auto expected = static_cast<std::size_t>(ds.config.split_length(split));
            if (table.rows() != expected) {
                throw DatasetError(name + ": truncated, " + std::to_string(table.rows()) + " rows, expected " +
                                   std::to_string(expected));
            }
            tables.push_back(std::move(table));
        }
    }
    return ds;
}

std::vector<ManifestRow> parse_manifest(const std::string& text)
{
    std::vector<ManifestRow> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            f.push_back(cell);
        }
        const auto fail = [&] { return DatasetError(std::string(kManifestFile) + ": malformed row " + std::to_string(lineno)); };
        if (f.size() != 12) {
            throw fail();
        }
        ManifestRow r;
        const auto split = split_from_string(f[0]);
        const auto id = parse_int(f[1]);
        const auto s0 = parse_int(f[2]);
        const auto s1 = parse_int(f[3]);
        const auto t0 = parse_int(f[4]);
        const auto t1 = parse_int(f[5]);
        const auto kd = parse_double(f[8]);
        const auto sl = parse_double(f[9]);
        const auto ad = parse_double(f[10]);
        const auto sm = parse_double(f[11]);
        if (!split || !id || !s0 || !s1 || !t0 || !t1 || !kd || !sl || !ad || !sm) {
            throw fail();
        }
        r.split = *split;
        r.window_id = static_cast<int>(*id);
        r.s0 = *s0;
        r.s1 = *s1;
        r.t0 = *t0;
        r.t1 = *t1;
        r.kdrop_db = *kd;
        r.shadow_loss_db = *sl;
        r.alpha_drop = *ad;
        r.sigma_mult = *sm;
        std::stringstream ns(f[6]);
        while (std::getline(ns, cell, ';')) {
            const auto node = parse_int(cell);
            if (!node) {
                throw fail();
            }
            r.nodes.push_back(static_cast<int>(*node));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

} // namespace sgrecon
