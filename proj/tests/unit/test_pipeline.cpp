// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "fixtures.hpp"

#include "sgrecon/dataset.hpp"
#include "sgrecon/pipeline.hpp"
#include "sgrecon/validation.hpp"

#include <algorithm>
#include <set>

using namespace sgrecon;

namespace {

GeneratorConfig small_config()
{
    auto c = default_config();
    c.t_train = 3000;
    c.t_val = 1500;
    c.t_test = 1500;
    c.burn_in = 200;
    return c;
}

const std::filesystem::path& default_dataset()
{
    static const auto dir = [] {
        auto d = fixtures::scratch_dir("pipeline") / "dataset";
        generate_dataset(default_config(), d, 1);
        return d;
    }();
    return dir;
}

} // namespace

TEST_CASE("split tables have the documented layout and length")
{
    const auto cfg = small_config();
    const auto topo = build_default_topology();
    const auto art = generate_split(cfg, topo, Split::Val);
    REQUIRE(art.tables.size() == 12);
    const auto header = csv_header();
    CHECK(header.size() == 50);
    const std::vector<std::string> raw{"t", "tx_count", "C", "phase_sin", "phase_cos", "dphase", "SNR",
                                       "PER", "L", "L_ewma", "shadow_db", "interf_db", "attack_label"};
    CHECK(std::equal(raw.begin(), raw.end(), header.begin()));
    CHECK(header[13] == "C_db_roll_mean");
    CHECK(header[41] == "activity_rate");
    CHECK(header[42] == "avg_neighbor_SNR");
    CHECK(header[43] == "dev_SNR");
    for (const auto& t : art.tables) {
        CHECK(t.names == header);
        CHECK(t.rows() == static_cast<std::size_t>(cfg.t_val));
        const auto& tt = t.column("t");
        CHECK(tt.front() == 0.0);
        CHECK(tt.back() == static_cast<double>(cfg.t_val - 1));
    }
}

TEST_CASE("split generation is deterministic")
{
    const auto cfg = small_config();
    const auto topo = build_default_topology();
    const auto a = generate_split(cfg, topo, Split::Train);
    const auto b = generate_split(cfg, topo, Split::Train, {true, true, 1});
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(format_csv(a.tables[i]) == format_csv(b.tables[i]));
    }
}

TEST_CASE("passivity, interference invariance and containment")
{
    const auto cfg = small_config();
    const auto topo = build_default_topology();
    const auto attacked = generate_split(cfg, topo, Split::Train);
    const auto clean = generate_split(cfg, topo, Split::Train, {false, true, 1});
    REQUIRE_FALSE(attacked.windows.empty());
    CHECK(clean.windows.empty());
    for (std::size_t i = 0; i < 12; ++i) {
        const auto& a = attacked.nodes[i];
        const auto& c = clean.nodes[i];
        CHECK(a.tx_count == c.tx_count);
        CHECK(a.interf_db == c.interf_db);
        std::vector<std::uint8_t> inside(a.tx_count.size(), 0);
        for (const auto& w : attacked.windows) {
            if (std::find(w.nodes.begin(), w.nodes.end(), static_cast<int>(i)) != w.nodes.end()) {
                std::fill(inside.begin() + w.s0, inside.begin() + w.s1, 1);
            }
        }
        std::size_t first_inside = inside.size();
        for (std::size_t t = 0; t < inside.size(); ++t) {
            if (inside[t]) {
                first_inside = std::min(first_inside, t);
                continue;
            }
            CHECK(a.shadow_db[t] == c.shadow_db[t]);
            CHECK(a.h[t] == c.h[t]);
            CHECK(a.obs.snr_db[t] == c.obs.snr_db[t]);
            CHECK(a.labels[t] == 0);
        }
        // Latency filters carry state forward, so only rows before the first window must match.
        for (std::size_t t = 0; t < first_inside; ++t) {
            CHECK(a.obs.latency_ewma_ms[t] == c.obs.latency_ewma_ms[t]);
        }
    }
}

TEST_CASE("labels are sound and fiber is never labeled")
{
    const auto cfg = small_config();
    const auto topo = build_default_topology();
    for (Split split : kAllSplits) {
        const auto art = generate_split(cfg, topo, split);
        for (std::size_t i = 0; i < 12; ++i) {
            const auto& t = art.tables[i];
            const auto& lab = t.column("attack_label");
            const auto& tx = t.column("tx_count");
            for (std::size_t r = 0; r < lab.size(); ++r) {
                if (lab[r] == 0.0) {
                    continue;
                }
                CHECK(topo.node(i).eligible);
                CHECK(tx[r] > 0.0);
                const bool covered = std::any_of(art.windows.begin(), art.windows.end(), [&](const AttackWindow& w) {
                    return w.s0 <= static_cast<std::int64_t>(r) && static_cast<std::int64_t>(r) < w.s1 &&
                           std::find(w.nodes.begin(), w.nodes.end(), static_cast<int>(i)) != w.nodes.end();
                });
                CHECK(covered);
            }
            if (topo.node(i).tech == Tech::Fiber) {
                CHECK(std::all_of(lab.begin(), lab.end(), [](double v) { return v == 0.0; }));
            }
        }
        for (const auto& w : art.windows) {
            CHECK(w.s0 >= 0);
            CHECK(w.s1 <= cfg.split_length(split));
        }
    }
}

TEST_CASE("exported dataset files and digests")
{
    const auto& dir = default_dataset();
    const auto names = dataset_file_names(12);
    CHECK(names.size() == 42);
    std::set<std::string> on_disk;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        on_disk.insert(e.path().filename().string());
    }
    CHECK(on_disk.size() == 43);
    for (const auto& n : names) {
        CHECK(on_disk.count(n) == 1);
    }
    const auto ds = load_dataset(dir);
    CHECK(ds.listed_digests == ds.computed_digests);
    CHECK(ds.listed_digests.size() == 42);
    for (Split split : kAllSplits) {
        for (const auto& t : ds.tables[index(split)]) {
            CHECK(t.rows() == static_cast<std::size_t>(ds.config.split_length(split)));
        }
    }
    CHECK(read_file(dir / kManifestFile).rfind(manifest_header() + "\n", 0) == 0);
    CHECK(ds.config == default_config());
}

TEST_CASE("regeneration reproduces a deleted file")
{
    const auto& dir = default_dataset();
    const auto copy = fixtures::scratch_dir("regen") / "dataset";
    fixtures::copy_dataset(dir, copy);
    const auto victim = copy / node_file_name(5, Split::Test);
    const auto original = read_file(victim);
    std::filesystem::remove(victim);
    generate_dataset(default_config(), copy, 1);
    CHECK(read_file(victim) == original);
    CHECK(read_file(copy / kDigestFile) == read_file(dir / kDigestFile));
}

TEST_CASE("generation refuses to replace an unrelated directory")
{
    const auto dir = fixtures::scratch_dir("foreign");
    write_file(dir / "keep.txt", "data");
    CHECK_THROWS_AS(generate_dataset(small_config(), dir, 1), DatasetError);
    CHECK(read_file(dir / "keep.txt") == "data");
}

TEST_CASE("default dataset passes validation")
{
    const auto ds = load_dataset(default_dataset());
    const auto report = validate_dataset(ds, 1);
    for (const auto& c : report.checks) {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
    CHECK(report.passed());
}

TEST_CASE("validation-fit normalization fails the leak audit")
{
    const auto copy = fixtures::scratch_dir("leak") / "dataset";
    fixtures::copy_dataset(default_dataset(), copy);
    fixtures::corrupt_normalization(copy);
    const auto report = validate_dataset(load_dataset(copy), 1);
    CHECK_FALSE(report.passed());
    for (const auto& c : report.checks) {
        CHECK(c.passed == (c.name != "standardization"));
    }
}

TEST_CASE("structural damage raises DatasetError naming the file")
{
    const auto copy = fixtures::scratch_dir("damage") / "dataset";
    fixtures::copy_dataset(default_dataset(), copy);
    fixtures::truncate_csv(copy / "node4_val.csv", 3);
    try {
        load_dataset(copy);
        FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
        CHECK(std::string(e.what()).find("node4_val.csv") != std::string::npos);
    }
    fixtures::copy_dataset(default_dataset(), copy);
    std::filesystem::remove(copy / "node2_train.csv");
    CHECK_THROWS_AS(load_dataset(copy), DatasetError);
}

TEST_CASE("tampered bytes fail the digest check")
{
    const auto copy = fixtures::scratch_dir("tamper") / "dataset";
    fixtures::copy_dataset(default_dataset(), copy);
    auto text = read_file(copy / kEdgesFile);
    text += "\n";
    write_file(copy / kEdgesFile, text);
    const auto report = validate_dataset(load_dataset(copy), 1);
    CHECK_FALSE(report.checks.front().passed);
    CHECK(report.checks.front().name == "digests");
}

TEST_CASE("manifest round trip")
{
    const auto ds = load_dataset(default_dataset());
    const auto rows = parse_manifest(ds.manifest_text);
    CHECK_FALSE(rows.empty());
    for (const auto& r : rows) {
        CHECK(r.s1 - r.s0 == ds.config.attack.lead + (r.t1 - r.t0) + ds.config.attack.tail + ds.config.attack.hyst);
        CHECK(std::is_sorted(r.nodes.begin(), r.nodes.end()));
    }
}
