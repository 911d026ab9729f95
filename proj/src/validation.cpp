// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/validation.hpp"
#include "sgrecon/channel.hpp"
#include "sgrecon/features.hpp"
#include "sgrecon/numfmt.hpp"
#include "sgrecon/parallel.hpp"
#include "sgrecon/pipeline.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sgrecon {

namespace {

double pearson(std::span<const double> a, std::span<const double> b)
{
    const auto n = static_cast<double>(a.size());
    if (a.size() < 2) {
        return 0.0;
    }
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        sab += (a[k] - ma) * (b[k] - mb);
        saa += (a[k] - ma) * (a[k] - ma);
        sbb += (b[k] - mb) * (b[k] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) {
        return 0.0;
    }
    return sab / std::sqrt(saa * sbb);
}

std::vector<std::uint8_t> qualifying_rows(const Table& table)
{
    const auto& tx = table.column("tx_count");
    const auto& label = table.column("attack_label");
    std::vector<std::uint8_t> q(tx.size());
    for (std::size_t t = 0; t < q.size(); ++t) {
        q[t] = tx[t] > 0.0 && label[t] == 0.0 ? 1 : 0;
    }
    return q;
}

std::vector<double> c_db(const Table& table)
{
    const auto& c = table.column("C");
    std::vector<double> out(c.size());
    std::transform(c.begin(), c.end(), out.begin(), [](double v) { return 20.0 * std::log10(v); });
    return out;
}

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

double run_segmented_lag1(std::span<const double> x, std::span<const std::uint8_t> qualifying, std::size_t* pairs)
{
    std::vector<double> a;
    std::vector<double> b;
    for (std::size_t t = 1; t < x.size(); ++t) {
        if (qualifying[t] && qualifying[t - 1]) {
            a.push_back(x[t - 1]);
            b.push_back(x[t]);
        }
    }
    if (pairs != nullptr) {
        *pairs = a.size();
    }
    return pearson(a, b);
}

ShadowStats estimate_shadow_stats(std::span<const double> shadow_db, std::span<const std::uint8_t> qualifying,
                                  double speed_mps, double dt_seconds, std::size_t min_rows)
{
    if (shadow_db.size() != qualifying.size()) {
        throw std::invalid_argument("estimate_shadow_stats: length mismatch");
    }
    std::vector<double> rows;
    for (std::size_t t = 0; t < shadow_db.size(); ++t) {
        if (qualifying[t]) {
            rows.push_back(shadow_db[t]);
        }
    }
    if (rows.size() < min_rows) {
        throw std::invalid_argument("estimate_shadow_stats: " + std::to_string(rows.size()) +
                                    " qualifying rows, need " + std::to_string(min_rows));
    }
    ShadowStats s;
    s.rows = rows.size();
    const double mean = std::accumulate(rows.begin(), rows.end(), 0.0) / static_cast<double>(rows.size());
    double ss = 0.0;
    for (double v : rows) {
        ss += (v - mean) * (v - mean);
    }
    s.sigma_db = std::sqrt(ss / static_cast<double>(rows.size() - 1));
    s.rho1 = run_segmented_lag1(shadow_db, qualifying, &s.pairs);
    s.dcor_m = s.rho1 > 0.0 && s.rho1 < 1.0 ? -speed_mps * dt_seconds / std::log(s.rho1)
                                           : std::numeric_limits<double>::infinity();
    return s;
}

CoverageEntry coverage_entry(int node_id, Split split, bool eligible, std::span<const double> tx_count,
                             std::span<const double> labels)
{
    CoverageEntry e;
    e.node_id = node_id;
    e.split = split;
    e.eligible = eligible;
    for (std::size_t t = 0; t < tx_count.size(); ++t) {
        e.active += tx_count[t] > 0.0;
        e.labeled += labels[t] > 0.0 && tx_count[t] > 0.0;
    }
    e.ratio = static_cast<double>(e.labeled) / static_cast<double>(std::max<std::int64_t>(1, e.active));
    return e;
}

double quantile(std::vector<double> values, double q)
{
    if (values.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

ShiftEntry shift_entry(int node_id, const Table& table, std::size_t min_rows, bool eligible)
{
    ShiftEntry e;
    e.node_id = node_id;
    const auto& tx = table.column("tx_count");
    const auto& label = table.column("attack_label");
    const std::array<std::vector<double>, 4> series{c_db(table), table.column("SNR"), table.column("PER"),
                                                    table.column("L_ewma")};
    std::array<std::vector<double>, 4> attack;
    std::array<std::vector<double>, 4> normal;
    for (std::size_t t = 0; t < tx.size(); ++t) {
        if (tx[t] <= 0.0) {
            continue;
        }
        for (std::size_t k = 0; k < 4; ++k) {
            (label[t] > 0.0 ? attack : normal)[k].push_back(series[k][t]);
        }
    }
    e.attack_rows = attack[0].size();
    e.normal_rows = normal[0].size();
    if (e.attack_rows == 0 || e.normal_rows == 0) {
        e.skipped = true;
        return e;
    }
    for (std::size_t k = 0; k < 4; ++k) {
        const double ma = std::accumulate(attack[k].begin(), attack[k].end(), 0.0) / static_cast<double>(e.attack_rows);
        const double mn = std::accumulate(normal[k].begin(), normal[k].end(), 0.0) / static_cast<double>(e.normal_rows);
        e.delta[k] = ma - mn;
        for (std::size_t q = 0; q < kShiftQuantiles.size(); ++q) {
            e.quantiles[k].attack[q] = quantile(attack[k], kShiftQuantiles[q]);
            e.quantiles[k].normal[q] = quantile(normal[k], kShiftQuantiles[q]);
        }
    }
    e.gated = eligible && e.attack_rows >= min_rows;
    e.passed = !e.gated || (e.delta[1] < 0.0 && e.delta[2] > 0.0);
    return e;
}

std::int64_t future_randomization_probe(const std::function<std::vector<double>(const std::vector<double>&)>& feature_fn,
                                        std::span<const double> x, std::span<const std::int64_t> cuts, RandomStream& stream)
{
    const std::vector<double> base_input(x.begin(), x.end());
    const auto base = feature_fn(base_input);
    for (std::int64_t cut : cuts) {
        auto perturbed = base_input;
        for (std::size_t t = static_cast<std::size_t>(cut) + 1; t < perturbed.size(); ++t) {
            perturbed[t] = 100.0 * stream.normal();
        }
        const auto out = feature_fn(perturbed);
        for (std::int64_t t = 0; t <= cut && t < static_cast<std::int64_t>(out.size()); ++t) {
            const auto k = static_cast<std::size_t>(t);
            if (!(out[k] == base[k] || (std::isnan(out[k]) && std::isnan(base[k])))) {
                return t;
            }
        }
    }
    return -1;
}

CrossSplitEntry cross_split_correlation(int node_id, Split other, std::span<const double> shadow_a,
                                        std::span<const double> labels_a, std::span<const double> shadow_b,
                                        std::span<const double> labels_b, double sigmas)
{
    CrossSplitEntry e;
    e.node_id = node_id;
    e.other = other;
    const std::size_t n = std::min(shadow_a.size(), shadow_b.size());
    std::vector<std::uint8_t> clean(n);
    for (std::size_t t = 0; t < n; ++t) {
        clean[t] = labels_a[t] == 0.0 && labels_b[t] == 0.0 ? 1 : 0;
    }
    // Both traces are strongly autocorrelated, so the 1/sqrt(n) null bound
    // only holds after removing the AR(1) structure.
    const double rho_a = run_segmented_lag1(shadow_a.first(n), clean);
    const double rho_b = run_segmented_lag1(shadow_b.first(n), clean);
    std::vector<double> ea;
    std::vector<double> eb;
    for (std::size_t t = 1; t < n; ++t) {
        if (clean[t] && clean[t - 1]) {
            ea.push_back(shadow_a[t] - rho_a * shadow_a[t - 1]);
            eb.push_back(shadow_b[t] - rho_b * shadow_b[t - 1]);
        }
    }
    e.pairs = ea.size();
    e.correlation = pearson(ea, eb);
    e.bound = e.pairs > 0 ? sigmas / std::sqrt(static_cast<double>(e.pairs)) : 0.0;
    e.passed = e.pairs > 0 && std::abs(e.correlation) < e.bound;
    return e;
}

std::vector<std::string> standardization_audit(const std::vector<Table>& train, const std::vector<Table>& val,
                                               const std::string& normalization_text, double mean_tol, double std_tol)
{
    std::vector<std::string> failures;
    Standardizer stored;
    try {
        stored = Standardizer::from_json(normalization_text);
    } catch (const std::exception& e) {
        failures.emplace_back(e.what());
        return failures;
    }
    const double floor = stored.std_floor();
    for (std::size_t i = 0; i < train.size(); ++i) {
        const int node = static_cast<int>(i);
        std::vector<std::pair<std::string, std::vector<double>>> columns;
        for (std::size_t k = 0; k < train[i].names.size(); ++k) {
            if (!is_standardization_excluded(train[i].names[k])) {
                columns.emplace_back(train[i].names[k], train[i].columns[k]);
            }
        }
        columns.emplace_back("C_db", c_db(train[i]));
        for (const auto& [name, values] : columns) {
            if (!stored.has(node, name)) {
                failures.push_back("node " + std::to_string(node) + " column " + name + ": missing parameters");
                continue;
            }
            const auto& s = stored.stats(node, name);
            const auto z = stored.apply(node, name, values);
            const auto zs = column_stats(z, 0.0);
            const auto actual = column_stats(values, floor);
            if (actual.std <= floor) {
                // Constant column: only the stored centre is checkable.
                if (std::abs(actual.mean - s.mean) > mean_tol * std::max(1.0, std::abs(actual.mean))) {
                    failures.push_back("node " + std::to_string(node) + " column " + name + ": constant column not centered");
                }
                continue;
            }
            if (std::abs(zs.mean) >= mean_tol || std::abs(zs.std - 1.0) >= std_tol) {
                failures.push_back("node " + std::to_string(node) + " column " + name + ": standardized train mean " +
                                   format_double(zs.mean) + ", std " + format_double(zs.std));
                continue;
            }
            if (i < val.size()) {
                const auto& vt = val[i];
                const auto vvalues = name == "C_db" ? c_db(vt) : vt.column(name);
                const auto vfit = column_stats(vvalues, floor);
                if (vfit == s) {
                    failures.push_back("node " + std::to_string(node) + " column " + name + ": parameters equal a validation fit");
                }
            }
        }
    }
    return failures;
}

std::vector<std::string> causality_audit(const GeneratorConfig& config, const Topology& topology,
                                         const std::vector<Table>& tables, int cut_points, std::uint64_t seed,
                                         unsigned threads)
{
    static const std::size_t kRawColumns = 13;
    std::vector<std::string> failures;
    const auto header = csv_header();
    std::vector<Table> raw(tables.size());
    for (std::size_t i = 0; i < tables.size(); ++i) {
        for (std::size_t k = 0; k < kRawColumns; ++k) {
            raw[i].add(tables[i].names[k], tables[i].columns[k]);
        }
    }
    const auto recomputed = build_feature_tables(config, topology, raw, threads);
    for (std::size_t i = 0; i < tables.size(); ++i) {
        for (std::size_t k = kRawColumns; k < header.size(); ++k) {
            if (recomputed[i].columns[k] != tables[i].columns[k]) {
                failures.push_back("node " + std::to_string(i) + " column " + header[k] +
                                   ": does not match a causal recomputation");
            }
        }
    }
    if (!failures.empty()) {
        return failures;
    }

    const std::size_t rows = tables.empty() ? 0 : tables.front().rows();
    RandomStream stream(seed, kSharedOwner, Process::Measurement);
    for (int c = 0; c < cut_points; ++c) {
        const auto cut = static_cast<std::size_t>((static_cast<double>(c) + 1.0) * static_cast<double>(rows) /
                                                  (static_cast<double>(cut_points) + 1.0));
        auto perturbed = raw;
        for (auto& table : perturbed) {
            for (std::size_t k = 1; k < kRawColumns; ++k) {
                auto& col = table.columns[k];
                for (std::size_t t = cut + 1; t < col.size(); ++t) {
                    if (table.names[k] == "tx_count") {
                        col[t] = static_cast<double>(stream.uniform_int(0, 3));
                    } else if (table.names[k] == "C") {
                        col[t] = config.eps0 + 3.0 * stream.uniform();
                    } else {
                        col[t] = 50.0 * stream.normal();
                    }
                }
            }
        }
        const auto out = build_feature_tables(config, topology, std::move(perturbed), threads);
        for (std::size_t i = 0; i < tables.size(); ++i) {
            for (std::size_t k = kRawColumns; k < header.size(); ++k) {
                const auto& a = out[i].columns[k];
                const auto& b = tables[i].columns[k];
                if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(cut + 1), b.begin())) {
                    failures.push_back("node " + std::to_string(i) + " column " + header[k] + ": depends on epochs after " +
                                       std::to_string(cut));
                }
            }
        }
    }
    return failures;
}

bool ValidationReport::passed() const noexcept
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

ValidationReport validate_dataset(const Dataset& ds, unsigned threads)
{
    ValidationReport report;
    const auto& config = ds.config;
    const auto& vp = config.validation;
    const auto& topo = ds.topology;
    const std::size_t n = topo.size();
    report.thresholds = vp;
    report.target_attack_frac = config.attack.target_attack_frac;
    const auto& train = ds.tables[index(Split::Train)];

    // Digests.
    {
        CheckResult c{"digests", true, ""};
        std::vector<std::string> problems;
        for (const auto& name : dataset_file_names(n)) {
            const auto listed = ds.listed_digests.find(name);
            const auto computed = ds.computed_digests.find(name);
            if (listed == ds.listed_digests.end()) {
                problems.push_back(name + " not listed");
            } else if (computed == ds.computed_digests.end() || computed->second != listed->second) {
                problems.push_back(name + " digest mismatch");
            }
        }
        c.passed = problems.empty();
        c.detail = problems.empty() ? std::to_string(ds.listed_digests.size()) + " files verified" : problems.front();
        if (problems.size() > 1) {
            c.detail += " (+" + std::to_string(problems.size() - 1) + " more)";
        }
        report.checks.push_back(c);
    }

    // Shadowing proxy statistics on train.
    {
        CheckResult c{"shadow_stats", true, ""};
        for (std::size_t i = 0; i < n; ++i) {
            const auto& spec = topo.node(i);
            ShadowAudit a;
            a.node_id = spec.id;
            a.expected_sigma_db = config.scenario_for(spec.tier).sigma_db;
            const bool in_gate_list =
                std::find(vp.shadow_gate_nodes.begin(), vp.shadow_gate_nodes.end(), spec.id) != vp.shadow_gate_nodes.end();
            if (spec.tech == Tech::Fiber && !config.shadowing.fiber_shadow_override) {
                a.skipped = true;
                a.note = "fiber shadowing is zero without the override";
                report.shadow.push_back(a);
                continue;
            }
            const auto q = qualifying_rows(train[i]);
            try {
                a.stats = estimate_shadow_stats(train[i].column("shadow_db"), q,
                                                config.shadowing.tier_speed_mps[index(spec.tier)], config.dt_seconds,
                                                static_cast<std::size_t>(vp.shadow_min_rows));
            } catch (const std::invalid_argument& e) {
                a.skipped = true;
                a.note = e.what();
                a.gated = in_gate_list;
                a.passed = !in_gate_list;
                report.shadow.push_back(a);
                continue;
            }
            a.gated = in_gate_list;
            const bool sigma_ok = std::abs(a.stats.sigma_db - a.expected_sigma_db) <= vp.sigma_rel_tol * a.expected_sigma_db;
            const bool rho_ok = a.stats.rho1 > vp.rho_lo && a.stats.rho1 < vp.rho_hi;
            a.passed = !a.gated || (sigma_ok && rho_ok);
            report.shadow.push_back(a);
            if (!a.passed) {
                c.passed = false;
                c.detail += "node " + std::to_string(a.node_id) + " sigma " + fmt(a.stats.sigma_db) + " rho1 " +
                            fmt(a.stats.rho1) + "; ";
            }
        }
        report.checks.push_back(c);
    }

    // Coverage.
    {
        CheckResult c{"coverage", true, ""};
        const double r = config.attack.target_attack_frac;
        for (Split split : kAllSplits) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto& t = ds.tables[index(split)][i];
                auto e = coverage_entry(static_cast<int>(i), split, topo.node(i).eligible, t.column("tx_count"),
                                        t.column("attack_label"));
                const auto total_labels = std::count_if(t.column("attack_label").begin(), t.column("attack_label").end(),
                                                        [](double v) { return v > 0.0; });
                if (!e.eligible) {
                    e.gated = true;
                    e.passed = total_labels == 0;
                } else if (split == Split::Train && e.active >= vp.coverage_min_active) {
                    e.gated = true;
                    e.passed = e.ratio >= vp.coverage_lo_factor * r && e.ratio <= vp.coverage_hi_factor * r;
                }
                if (!e.passed) {
                    c.passed = false;
                    c.detail += "node " + std::to_string(i) + " " + std::string(to_string(split)) + " r=" + fmt(e.ratio) + "; ";
                }
                report.coverage.push_back(e);
            }
        }
        report.checks.push_back(c);
    }

    // Distribution shift on test.
    {
        CheckResult c{"shift", true, ""};
        const auto& test = ds.tables[index(Split::Test)];
        for (std::size_t i = 0; i < n; ++i) {
            auto e = shift_entry(static_cast<int>(i), test[i], static_cast<std::size_t>(vp.shift_min_rows),
                                 topo.node(i).eligible);
            if (!e.passed) {
                c.passed = false;
                c.detail += "node " + std::to_string(i) + " dSNR " + fmt(e.delta[1]) + " dPER " + fmt(e.delta[2]) + "; ";
            }
            report.shift.push_back(e);
        }
        report.checks.push_back(c);
    }

    // Label soundness against the manifest.
    {
        CheckResult c{"label_soundness", true, ""};
        std::size_t violations = 0;
        try {
            const auto rows = parse_manifest(ds.manifest_text);
            const auto& ap = config.attack;
            std::array<std::vector<std::vector<std::uint8_t>>, 3> covered;
            for (Split split : kAllSplits) {
                covered[index(split)].assign(n, std::vector<std::uint8_t>(static_cast<std::size_t>(config.split_length(split)), 0));
            }
            for (const auto& w : rows) {
                const auto T = config.split_length(w.split);
                const bool shape_ok = w.s0 >= 0 && w.s0 < w.s1 && w.s1 <= T && w.t0 == w.s0 + ap.lead &&
                                      w.s1 - w.s0 == ap.lead + (w.t1 - w.t0) + ap.tail + ap.hyst;
                if (!shape_ok) {
                    ++violations;
                    c.detail = "window " + std::to_string(w.window_id) + " has an invalid interval; ";
                    continue;
                }
                for (int node : w.nodes) {
                    if (node < 0 || static_cast<std::size_t>(node) >= n || !topo.node(static_cast<std::size_t>(node)).eligible) {
                        ++violations;
                        c.detail = "window " + std::to_string(w.window_id) + " names an ineligible node; ";
                        continue;
                    }
                    auto& mask = covered[index(w.split)][static_cast<std::size_t>(node)];
                    std::fill(mask.begin() + w.s0, mask.begin() + w.s1, std::uint8_t{1});
                }
            }
            for (Split split : kAllSplits) {
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& t = ds.tables[index(split)][i];
                    const auto& label = t.column("attack_label");
                    const auto& tx = t.column("tx_count");
                    for (std::size_t k = 0; k < label.size(); ++k) {
                        if (label[k] != 0.0 && (label[k] != 1.0 || tx[k] <= 0.0 || !covered[index(split)][i][k])) {
                            if (violations == 0) {
                                c.detail += "node " + std::to_string(i) + " " + std::string(to_string(split)) + " row " +
                                            std::to_string(k) + "; ";
                            }
                            ++violations;
                        }
                    }
                }
            }
        } catch (const DatasetError& e) {
            ++violations;
            c.detail = e.what();
        }
        c.passed = violations == 0;
        c.detail = std::to_string(violations) + " unsound labels" + (c.detail.empty() ? "" : ": " + c.detail);
        report.checks.push_back(c);
    }

    // Structural invariants.
    {
        CheckResult c{"structure", true, ""};
        std::vector<std::string> problems;
        const auto mixing = compute_mixing(topo, config.mixing_alpha);
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = mixing.row(i);
            if (std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0) > 1e-12) {
                problems.push_back("mixing row " + std::to_string(i) + " does not sum to 1");
            }
        }
        for (const auto& v : check_tier_constraints(topo)) {
            if (v.rfind("HAN-WAN", 0) == 0) {
                problems.push_back(v);
            }
        }
        if (!topo.connected()) {
            problems.emplace_back("topology is not connected");
        }
        for (Split split : kAllSplits) {
            for (std::size_t i = 0; i < n; ++i) {
                const auto& t = ds.tables[index(split)][i];
                const auto& s = t.column("phase_sin");
                const auto& co = t.column("phase_cos");
                const auto& per = t.column("PER");
                const auto& cc = t.column("C");
                const auto& tt = t.column("t");
                for (std::size_t k = 0; k < t.rows(); ++k) {
                    const bool ok = std::abs(s[k] * s[k] + co[k] * co[k] - 1.0) <= 1e-9 &&
                                    per[k] >= config.per_eps && per[k] <= 1.0 - config.per_eps &&
                                    cc[k] >= config.eps0 && tt[k] == static_cast<double>(k);
                    if (!ok) {
                        problems.push_back(node_file_name(static_cast<int>(i), split) + " row " + std::to_string(k) +
                                           " violates a row invariant");
                        break;
                    }
                }
            }
        }
        c.passed = problems.empty();
        c.detail = problems.empty() ? "ok" : problems.front();
        report.checks.push_back(c);
    }

    // Leak-safety (1): train-only standardization.
    {
        CheckResult c{"standardization", true, ""};
        const auto failures = standardization_audit(train, ds.tables[index(Split::Val)], ds.normalization_text,
                                                    vp.std_mean_tol, vp.std_std_tol);
        c.passed = failures.empty();
        c.detail = failures.empty() ? "train-only fit confirmed"
                                    : failures.front() + (failures.size() > 1 ? " (+" + std::to_string(failures.size() - 1) + " more)" : "");
        report.checks.push_back(c);
    }

    // Leak-safety (2): causality on the validation split.
    {
        CheckResult c{"causality", true, ""};
        const auto failures = causality_audit(config, topo, ds.tables[index(Split::Val)], vp.causality_cut_points,
                                              derive_split_seed(config, Split::Val), threads);
        c.passed = failures.empty();
        c.detail = failures.empty() ? "all engineered columns causal"
                                    : failures.front() + (failures.size() > 1 ? " (+" + std::to_string(failures.size() - 1) + " more)" : "");
        report.checks.push_back(c);
    }

    // Leak-safety (3): cross-split independence.
    {
        CheckResult c{"cross_split", true, ""};
        for (std::size_t i = 0; i < n; ++i) {
            const auto& a = train[i];
            const auto& sa = a.column("shadow_db");
            if (std::all_of(sa.begin(), sa.end(), [](double v) { return v == 0.0; })) {
                continue;
            }
            for (Split other : {Split::Val, Split::Test}) {
                const auto& b = ds.tables[index(other)][i];
                auto e = cross_split_correlation(static_cast<int>(i), other, sa, a.column("attack_label"),
                                                 b.column("shadow_db"), b.column("attack_label"), vp.xcorr_sigmas);
                if (!e.passed) {
                    c.passed = false;
                    c.detail += "node " + std::to_string(i) + " train-" + std::string(to_string(other)) + " rho " +
                                fmt(e.correlation) + " bound " + fmt(e.bound) + "; ";
                }
                report.cross_split.push_back(e);
            }
        }
        report.checks.push_back(c);
    }
    return report;
}

std::string ValidationReport::to_json() const
{
    using json = nlohmann::ordered_json;
    json doc;
    doc["passed"] = passed();
    json checks_j = json::array();
    for (const auto& c : checks) {
        checks_j.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    doc["checks"] = checks_j;
    doc["thresholds"] = json{{"sigma_rel_tol", thresholds.sigma_rel_tol},
                             {"rho_open_interval", {thresholds.rho_lo, thresholds.rho_hi}},
                             {"shadow_gate_nodes", thresholds.shadow_gate_nodes},
                             {"shadow_min_rows", thresholds.shadow_min_rows},
                             {"coverage_bounds", {thresholds.coverage_lo_factor * target_attack_frac,
                                                  thresholds.coverage_hi_factor * target_attack_frac}},
                             {"coverage_min_active", thresholds.coverage_min_active},
                             {"shift_min_rows", thresholds.shift_min_rows},
                             {"std_mean_tol", thresholds.std_mean_tol},
                             {"std_std_tol", thresholds.std_std_tol},
                             {"xcorr_sigmas", thresholds.xcorr_sigmas},
                             {"causality_cut_points", thresholds.causality_cut_points}};
    json shadow_j = json::array();
    for (const auto& s : shadow) {
        shadow_j.push_back(json{{"node", s.node_id},       {"gated", s.gated},
                                {"skipped", s.skipped},    {"passed", s.passed},
                                {"expected_sigma_db", s.expected_sigma_db},
                                {"n_rows", s.stats.rows},  {"n_pairs", s.stats.pairs},
                                {"sigma_hat_db", s.stats.sigma_db}, {"rho1_hat", s.stats.rho1},
                                {"dcor_hat_m", std::isfinite(s.stats.dcor_m) ? json(s.stats.dcor_m) : json(nullptr)},
                                {"note", s.note}});
    }
    doc["shadow"] = shadow_j;
    json cov_j = json::array();
    for (const auto& e : coverage) {
        cov_j.push_back(json{{"node", e.node_id}, {"split", to_string(e.split)}, {"eligible", e.eligible},
                             {"A", e.active}, {"Y", e.labeled}, {"r", e.ratio}, {"gated", e.gated}, {"passed", e.passed}});
    }
    doc["coverage"] = cov_j;
    json shift_j = json::array();
    for (const auto& e : shift) {
        json d = json::object();
        for (std::size_t k = 0; k < 4; ++k) {
            d[kShiftObservables[k]] = e.skipped ? json(nullptr) : json(e.delta[k]);
        }
        shift_j.push_back(json{{"node", e.node_id}, {"n_attack", e.attack_rows}, {"n_normal", e.normal_rows},
                               {"skipped", e.skipped}, {"gated", e.gated}, {"passed", e.passed}, {"delta", d}});
    }
    doc["shift"] = shift_j;
    json xs_j = json::array();
    for (const auto& e : cross_split) {
        xs_j.push_back(json{{"node", e.node_id}, {"pair", "train-" + std::string(to_string(e.other))},
                            {"n_pairs", e.pairs}, {"rho", e.correlation}, {"bound", e.bound}, {"passed", e.passed}});
    }
    doc["cross_split"] = xs_j;
    return doc.dump(2) + "\n";
}

std::string ValidationReport::to_text() const
{
    std::ostringstream out;
    out << "shadowing (train, non-attack active rows)\n";
    out << "  node  gated  n_rows   sigma_hat  expected  rho1_hat  dcor_hat_m\n";
    for (const auto& s : shadow) {
        char line[160];
        if (s.skipped) {
            std::snprintf(line, sizeof line, "  %4d  %-5s  skipped (%s)\n", s.node_id, s.gated ? "yes" : "no", s.note.c_str());
        } else {
            std::snprintf(line, sizeof line, "  %4d  %-5s  %6zu  %9.3f  %8.3f  %8.4f  %10.2f%s\n", s.node_id,
                          s.gated ? "yes" : "no", s.stats.rows, s.stats.sigma_db, s.expected_sigma_db, s.stats.rho1,
                          s.stats.dcor_m, s.passed ? "" : "  FAIL");
        }
        out << line;
    }
    out << "coverage (r = Y / max(1, A))\n";
    for (const auto& e : coverage) {
        if (e.split != Split::Train) {
            continue;
        }
        char line[128];
        std::snprintf(line, sizeof line, "  node %2d  A=%6lld  Y=%5lld  r=%.4f%s\n", e.node_id,
                      static_cast<long long>(e.active), static_cast<long long>(e.labeled), e.ratio,
                      e.passed ? "" : "  FAIL");
        out << line;
    }
    out << "shift (test, attack minus normal, active rows)\n";
    for (const auto& e : shift) {
        char line[160];
        if (e.skipped) {
            std::snprintf(line, sizeof line, "  node %2d  skipped\n", e.node_id);
        } else {
            std::snprintf(line, sizeof line, "  node %2d  n_att=%4zu  dC_db=%8.3f  dSNR=%8.3f  dPER=%7.4f  dL_ewma=%9.3f%s\n",
                          e.node_id, e.attack_rows, e.delta[0], e.delta[1], e.delta[2], e.delta[3],
                          e.passed ? "" : "  FAIL");
        }
        out << line;
    }
    out << "checks\n";
    for (const auto& c : checks) {
        out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << (c.detail.empty() ? "ok" : c.detail) << "\n";
    }
    out << (passed() ? "validation passed\n" : "validation FAILED\n");
    return out.str();
}

std::string ValidationReport::quantiles_csv() const
{
    std::string out = "node_id,observable,class,q01,q25,q50,q75,q99\n";
    for (const auto& e : shift) {
        if (e.skipped) {
            continue;
        }
        for (std::size_t k = 0; k < 4; ++k) {
            for (int cls = 0; cls < 2; ++cls) {
                out += std::to_string(e.node_id) + "," + kShiftObservables[k] + (cls == 0 ? ",normal" : ",attack");
                const auto& q = cls == 0 ? e.quantiles[k].normal : e.quantiles[k].attack;
                for (double v : q) {
                    out += "," + format_double(v);
                }
                out += "\n";
            }
        }
    }
    return out;
}

} // namespace sgrecon
