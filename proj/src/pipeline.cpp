// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/pipeline.hpp"
#include "sgrecon/parallel.hpp"
#include "sgrecon/traffic.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <system_error>

namespace sgrecon {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string>& raw_column_names()
{
    static const std::vector<std::string> kRaw{"t",   "tx_count", "C",         "phase_sin", "phase_cos",
                                               "dphase", "SNR",    "PER",       "L",         "L_ewma",
                                               "shadow_db", "interf_db", "attack_label"};
    return kRaw;
}

template <typename T>
std::vector<T> trim(const std::vector<T>& v, std::int64_t burn_in)
{
    return std::vector<T>(v.begin() + burn_in, v.end());
}

std::vector<double> c_db_series(std::span<const double> c)
{
    std::vector<double> out(c.size());
    std::transform(c.begin(), c.end(), out.begin(), [](double v) { return 20.0 * std::log10(v); });
    return out;
}

Table raw_table(const NodeTrace& node)
{
    const std::size_t n = node.tx_count.size();
    std::vector<double> t(n);
    std::vector<double> tx(n);
    std::vector<double> label(n);
    for (std::size_t k = 0; k < n; ++k) {
        t[k] = static_cast<double>(k);
        tx[k] = node.tx_count[k];
        label[k] = node.labels[k];
    }
    Table table;
    table.add("t", std::move(t));
    table.add("tx_count", std::move(tx));
    table.add("C", node.obs.c);
    table.add("phase_sin", node.phase.phase_sin);
    table.add("phase_cos", node.phase.phase_cos);
    table.add("dphase", node.phase.dphase);
    table.add("SNR", node.obs.snr_db);
    table.add("PER", node.obs.per);
    table.add("L", node.obs.latency_ms);
    table.add("L_ewma", node.obs.latency_ewma_ms);
    table.add("shadow_db", node.shadow_db);
    table.add("interf_db", node.interf_db);
    table.add("attack_label", std::move(label));
    return table;
}

/// Series used for rolling and neighbor features; C enters as C_db.
std::vector<double> base_series(const Table& raw, std::string_view observable)
{
    if (observable == "C_db") {
        return c_db_series(raw.column("C"));
    }
    return raw.column(observable);
}

} // namespace

std::string rolling_column_name(std::string_view observable, std::string_view stat)
{
    std::string name(observable);
    name += '_';
    name += stat;
    return name;
}

std::vector<std::string> csv_header()
{
    std::vector<std::string> names = raw_column_names();
    for (auto obs : kRollingObservables) {
        for (auto stat : kRollingStats) {
            names.push_back(rolling_column_name(obs, stat));
        }
    }
    names.emplace_back("activity_rate");
    for (auto obs : kNeighborObservables) {
        names.push_back("avg_neighbor_" + std::string(obs));
        names.push_back("dev_" + std::string(obs));
    }
    return names;
}

std::vector<Table> build_feature_tables(const GeneratorConfig& config, const Topology& topology,
                                        std::vector<Table> raw, unsigned threads)
{
    const std::size_t n = topology.size();
    if (raw.size() != n) {
        throw std::invalid_argument("build_feature_tables: one raw table per node required");
    }
    const auto& fp = config.features;
    parallel_for(n, threads, [&](std::size_t i) {
        Table& table = raw[i];
        for (auto obs : kRollingObservables) {
            const auto x = base_series(table, obs);
            const auto f = rolling_features(x, fp.rolling_window, fp.entropy_bins, fp.std_floor);
            for (std::size_t k = 0; k < kRollingStats.size(); ++k) {
                table.add(rolling_column_name(obs, kRollingStats[k]), f.column(k));
            }
        }
        const auto& tx = table.column("tx_count");
        std::vector<double> gate(tx.size());
        std::transform(tx.begin(), tx.end(), gate.begin(), [](double c) { return c > 0.0 ? 1.0 : 0.0; });
        table.add("activity_rate", rolling_mean(gate, fp.rolling_window));
    });

    const auto mixing = compute_mixing(topology, config.mixing_alpha);
    std::vector<NeighborFeatures> neighbor(kNeighborObservables.size());
    parallel_for(kNeighborObservables.size(), threads, [&](std::size_t k) {
        std::vector<std::vector<double>> x(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = base_series(raw[i], kNeighborObservables[k]);
        }
        neighbor[k] = neighbor_features(mixing, x);
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < kNeighborObservables.size(); ++k) {
            raw[i].add("avg_neighbor_" + std::string(kNeighborObservables[k]), std::move(neighbor[k].avg[i]));
            raw[i].add("dev_" + std::string(kNeighborObservables[k]), std::move(neighbor[k].dev[i]));
        }
    }
    return raw;
}

SplitArtifact generate_split(const GeneratorConfig& config, const Topology& topology, Split split,
                             const SplitOptions& options)
{
    const std::int64_t T = config.split_length(split);
    const std::int64_t B = config.burn_in;
    const std::int64_t len = B + T;
    const std::size_t n = topology.size();
    const std::uint64_t seed = derive_split_seed(config, split);
    const std::uint64_t dataset_seed = derive_dataset_seed(config.seed_base);

    SplitArtifact art;
    art.split = split;
    art.split_seed = seed;

    struct Latents {
        std::vector<std::int32_t> tx;
        FadingSequence fading;
        std::vector<double> shadow;
        std::vector<double> interf;
    };
    std::vector<Latents> lat(n);
    const SharedShadowing shared(config, seed, len);
    parallel_for(n, options.threads, [&](std::size_t i) {
        const auto& spec = topology.node(i);
        const auto owner = static_cast<std::uint64_t>(i);
        RandomStream traffic_stream(seed, owner, Process::Traffic);
        const auto schedule = make_schedule(topology, static_cast<int>(i), config.traffic, seed);
        lat[i].tx = generate_tx_counts(spec, len, traffic_stream, config.traffic, schedule).counts;
        RandomStream fading_stream(seed, owner, Process::Fading);
        lat[i].fading = gen_fading_sequence(config.params(spec.tech).fading_rho, len, fading_stream);
        RandomStream shadow_stream(seed, owner, Process::ShadowLocal);
        lat[i].shadow = gen_shadowing(spec, config, shared, shadow_stream);
        RandomStream interf_stream(seed, owner, Process::Interference);
        lat[i].interf = gen_interference(spec, config, len, interf_stream).interf_db;
    });

    std::vector<std::vector<std::uint8_t>> gates(n);
    std::vector<std::vector<std::uint8_t>> labels(n, std::vector<std::uint8_t>(static_cast<std::size_t>(T), 0));
    for (std::size_t i = 0; i < n; ++i) {
        gates[i] = activity_indicator(std::span<const std::int32_t>(lat[i].tx).subspan(static_cast<std::size_t>(B)));
    }

    if (options.attacks) {
        RandomStream placement(seed, kSharedOwner, Process::AttackPlacement);
        art.windows = sample_windows(T, topology, gates, config, placement, &art.placement);
        RandomStream effects(seed, kSharedOwner, Process::AttackEffects);
        finalize_windows(art.windows, split, config, effects);
        for (const auto& w : art.windows) {
            for (int node : w.nodes) {
                const auto i = static_cast<std::size_t>(node);
                apply_attack(w, B, gates[i],
                             AttackableLatents{&lat[i].shadow, &lat[i].fading, topology.node(i).tech == Tech::WiFi},
                             labels[i]);
            }
        }
    }

    art.nodes.resize(n);
    parallel_for(n, options.threads, [&](std::size_t i) {
        const auto& spec = topology.node(i);
        const auto owner = static_cast<std::uint64_t>(i);
        NodeTrace& node = art.nodes[i];
        node.spec = spec;
        RandomStream offset_stream(dataset_seed, owner, Process::NodeOffset);
        node.delta_node_db = config.delta_node_sigma_db * offset_stream.normal();
        const auto meas = measurement_params_for(config, spec.tech);
        const auto link = link_params_for(config, spec, node.delta_node_db);
        RandomStream meas_stream(seed, owner, Process::Measurement);
        RandomStream latency_stream(seed, owner, Process::Latency);
        // The chain runs over burn-in too so recurrences (EWMA, burst filter,
        // phase increments) are warm at the first exported row.
        const auto obs = derive_observables(lat[i].fading.h, lat[i].shadow, lat[i].interf, meas, link, meas_stream,
                                            latency_stream);
        const auto phase = phase_descriptors(lat[i].fading.h);

        node.tx_count = trim(lat[i].tx, B);
        node.h = trim(lat[i].fading.h, B);
        node.shadow_db = trim(lat[i].shadow, B);
        node.interf_db = trim(lat[i].interf, B);
        node.obs.c = trim(obs.c, B);
        node.obs.snr_db = trim(obs.snr_db, B);
        node.obs.per = trim(obs.per, B);
        node.obs.latency_ms = trim(obs.latency_ms, B);
        node.obs.latency_ewma_ms = trim(obs.latency_ewma_ms, B);
        node.phase.phase_sin = trim(phase.phase_sin, B);
        node.phase.phase_cos = trim(phase.phase_cos, B);
        node.phase.dphase = trim(phase.dphase, B);
        node.labels = std::move(labels[i]);
        node.latency_det_ms.resize(node.obs.per.size());
        std::transform(node.obs.per.begin(), node.obs.per.end(), node.latency_det_ms.begin(),
                       [&](double p) { return latency_deterministic(p, link); });
    });

    if (options.build_tables) {
        std::vector<Table> raw(n);
        for (std::size_t i = 0; i < n; ++i) {
            raw[i] = raw_table(art.nodes[i]);
        }
        art.tables = build_feature_tables(config, topology, std::move(raw), options.threads);
    }
    return art;
}

Standardizer fit_standardizer(const std::vector<Table>& train_tables, double std_floor)
{
    Standardizer s(std_floor);
    for (std::size_t i = 0; i < train_tables.size(); ++i) {
        auto names = train_tables[i].names;
        auto columns = train_tables[i].columns;
        names.emplace_back("C_db");
        columns.push_back(c_db_series(train_tables[i].column("C")));
        s.fit_node(static_cast<int>(i), names, columns);
    }
    return s;
}

std::string node_file_name(int node_id, Split split)
{
    return "node" + std::to_string(node_id) + "_" + std::string(to_string(split)) + ".csv";
}

std::vector<std::string> dataset_file_names(std::size_t node_count)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < node_count; ++i) {
        for (Split s : kAllSplits) {
            names.push_back(node_file_name(static_cast<int>(i), s));
        }
    }
    for (const char* f : {kManifestFile, kNodesFile, kEdgesFile, kAdjacencyFile, kNormalizationFile, kConfigFile}) {
        names.emplace_back(f);
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::string topology_nodes_csv(const Topology& topology)
{
    std::string out = "node_id,role,tier,tech,attack_eligible\n";
    for (const auto& n : topology.nodes()) {
        out += std::to_string(n.id) + "," + std::string(to_string(n.role)) + "," + std::string(to_string(n.tier)) +
               "," + std::string(to_string(n.tech)) + "," + (n.eligible ? "1" : "0") + "\n";
    }
    return out;
}

std::string topology_edges_csv(const Topology& topology)
{
    std::string out = "node_a,node_b\n";
    for (const auto& [a, b] : topology.edges()) {
        out += std::to_string(a) + "," + std::to_string(b) + "\n";
    }
    return out;
}

std::string topology_adjacency_text(const Topology& topology)
{
    std::string out;
    for (std::size_t i = 0; i < topology.size(); ++i) {
        for (std::size_t j = 0; j < topology.size(); ++j) {
            if (j > 0) {
                out += ' ';
            }
            out += topology.adjacent(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

namespace {

void commit_directory(const fs::path& staging, const fs::path& out_dir)
{
    std::error_code ec;
    if (fs::exists(out_dir)) {
        if (!fs::is_directory(out_dir)) {
            throw DatasetError(out_dir.string() + " exists and is not a directory");
        }
        const bool empty = fs::is_empty(out_dir);
        if (!empty && !fs::exists(out_dir / kDigestFile)) {
            throw DatasetError("refusing to replace non-dataset directory " + out_dir.string());
        }
        fs::path backup = out_dir;
        backup += ".previous-" + std::to_string(::getpid());
        fs::rename(out_dir, backup, ec);
        if (ec) {
            throw DatasetError("cannot move aside " + out_dir.string() + ": " + ec.message());
        }
        fs::rename(staging, out_dir, ec);
        if (ec) {
            fs::rename(backup, out_dir);
            throw DatasetError("cannot publish " + out_dir.string() + ": " + ec.message());
        }
        fs::remove_all(backup, ec);
        return;
    }
    fs::rename(staging, out_dir, ec);
    if (ec) {
        throw DatasetError("cannot publish " + out_dir.string() + ": " + ec.message());
    }
}

} // namespace

DatasetManifest generate_dataset(const GeneratorConfig& config, const fs::path& out_dir, unsigned threads)
{
    if (const auto violations = validate_config(config); !violations.empty()) {
        throw ConfigError(violations.front().field + ": " + violations.front().message);
    }
    const auto topology = build_default_topology(config.attack.eligible_tech);
    const std::size_t n = topology.size();

    const fs::path target = fs::absolute(out_dir).lexically_normal();
    const fs::path parent = target.has_filename() ? target.parent_path() : target.parent_path().parent_path();
    const std::string leaf = target.has_filename() ? target.filename().string() : target.parent_path().filename().string();
    const fs::path final_dir = parent / leaf;
    fs::path staging = parent / ("." + leaf + ".staging-" + std::to_string(::getpid()));
    std::error_code ec;
    fs::create_directories(parent, ec);
    fs::remove_all(staging, ec);
    if (!fs::create_directory(staging, ec) || ec) {
        throw DatasetError("cannot create staging directory " + staging.string());
    }

    std::map<std::string, FileDigest> digests;
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file(staging / name, content);
        return FileDigest{name, sha256_hex(content), content.size()};
    };

    DatasetManifest manifest;
    try {
        std::string windows_csv = manifest_header() + "\n";
        std::optional<Standardizer> standardizer;
        for (Split split : kAllSplits) {
            auto art = generate_split(config, topology, split, SplitOptions{true, true, threads});
            if (split == Split::Train) {
                standardizer = fit_standardizer(art.tables, config.features.std_floor);
            }
            std::vector<FileDigest> node_digests(n);
            parallel_for(n, threads, [&](std::size_t i) {
                node_digests[i] = emit(node_file_name(static_cast<int>(i), split), format_csv(art.tables[i]));
            });
            for (auto& d : node_digests) {
                digests[d.name] = std::move(d);
            }
            for (const auto& w : art.windows) {
                windows_csv += manifest_row(w) + "\n";
            }
            manifest.window_count += art.windows.size();
        }
        for (const auto& [name, content] :
             std::vector<std::pair<std::string, std::string>>{{kManifestFile, windows_csv},
                                                              {kNodesFile, topology_nodes_csv(topology)},
                                                              {kEdgesFile, topology_edges_csv(topology)},
                                                              {kAdjacencyFile, topology_adjacency_text(topology)},
                                                              {kNormalizationFile, standardizer->to_json()},
                                                              {kConfigFile, to_json_string(config)}}) {
            digests[name] = emit(name, content);
        }
        std::string digest_list;
        for (const auto& [name, d] : digests) {
            digest_list += d.sha256 + "  " + name + "\n";
            manifest.files.push_back(d);
        }
        write_file(staging / kDigestFile, digest_list);
        commit_directory(staging, final_dir);
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
    return manifest;
}

} // namespace sgrecon
