// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "stats_oracle.hpp"

#include "sgrecon/attacks.hpp"
#include "sgrecon/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

using namespace sgrecon;

namespace {

bool induced_connected(const Topology& topo, const std::vector<int>& group)
{
    std::set<int> members(group.begin(), group.end());
    std::set<int> seen{group.front()};
    std::queue<int> q;
    q.push(group.front());
    while (!q.empty()) {
        const int i = q.front();
        q.pop();
        for (int j : topo.neighbors(static_cast<std::size_t>(i))) {
            if (members.count(j) && !seen.count(j)) {
                seen.insert(j);
                q.push(j);
            }
        }
    }
    return seen.size() == members.size();
}

std::vector<std::vector<std::uint8_t>> default_activity(const GeneratorConfig& cfg, const Topology& topo,
                                                        std::int64_t len, std::uint64_t seed)
{
    std::vector<std::vector<std::uint8_t>> act;
    for (std::size_t i = 0; i < topo.size(); ++i) {
        RandomStream s(seed, i, Process::Traffic);
        const auto sched = make_schedule(topo, static_cast<int>(i), cfg.traffic, seed);
        act.push_back(activity_indicator(generate_tx_counts(topo.node(i), len, s, cfg.traffic, sched).counts));
    }
    return act;
}

} // namespace

TEST_CASE("ramp profile")
{
    const auto r = ramp_profile(0, 20, 0.2);
    CHECK(r[0] == 0.25);
    CHECK(r[3] == 1.0);
    CHECK(r[10] == 1.0);
    const auto quick = ramp_profile(5, 40, 1e-6);
    CHECK(quick[0] == 1.0);
    const auto long_ramp = ramp_profile(100, 237, 0.35);
    CHECK(std::is_sorted(long_ramp.begin(), long_ramp.end()));
    CHECK(long_ramp.back() == 1.0);
    CHECK_THROWS_AS(ramp_profile(3, 3, 0.2), std::invalid_argument);
}

TEST_CASE("shadow-loss mixture")
{
    const auto cfg = default_config();
    RandomStream s(1);
    std::array<int, 4> counts{};
    const int draws = 100000;
    for (int k = 0; k < draws; ++k) {
        const auto d = sample_mixture(cfg.attack.shadow, s);
        CHECK(d.value >= 0.5);
        CHECK(d.value <= 67.0);
        ++counts[static_cast<std::size_t>(d.mode)];
    }
    const double weights[] = {0.35, 0.35, 0.20, 0.10};
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(counts[k] / static_cast<double>(draws) - weights[k]) <= 0.01);
    }
    Mixture single{{10.0}, {1.0}, {0.0}, 0.5, 67.0};
    CHECK(sample_mixture(single, s).value == 10.0);
}

TEST_CASE("kdrop mapping")
{
    const auto id = map_kdrop(0.0, 0.0, 0.01, 0.0, 0.03);
    CHECK(id.alpha_drop == 1.0);
    CHECK(id.sigma_mult == 1.0);
    const auto big = map_kdrop(1e6, 0.05, 0.01, 0.2, 0.03);
    CHECK(big.alpha_drop == 0.05);
    CHECK(big.sigma_mult == doctest::Approx(1.2 + 0.03e6));
    KdropMapping prev = map_kdrop(0.0, 0.05, 0.01, 0.2, 0.03);
    for (int step = 1; step <= 670; ++step) {
        const auto cur = map_kdrop(0.1 * step, 0.05, 0.01, 0.2, 0.03);
        CHECK(cur.alpha_drop <= prev.alpha_drop);
        CHECK(cur.sigma_mult >= prev.sigma_mult);
        prev = cur;
    }
    CHECK_THROWS_AS(map_kdrop(-1.0, 0.05, 0.01, 0.2, 0.03), std::invalid_argument);
}

TEST_CASE("Gilbert-Elliott chain")
{
    RandomStream s(2);
    const auto zeros = gilbert_elliott_sequence(1000, 0.0, 0.3, s);
    CHECK(std::all_of(zeros.begin(), zeros.end(), [](std::uint8_t v) { return v == 0; }));
    const auto alt = gilbert_elliott_sequence(10, 1.0, 1.0, s);
    for (std::size_t t = 0; t < alt.size(); ++t) {
        CHECK(alt[t] == t % 2);
    }
    const auto long_run = gilbert_elliott_sequence(1000000, 0.05, 0.25, s);
    const double bad = std::count(long_run.begin(), long_run.end(), std::uint8_t{1}) / 1e6;
    CHECK(std::abs(bad - 0.05 / 0.30) <= 0.01);
}

TEST_CASE("group sampling")
{
    const auto topo = build_default_topology();
    RandomStream s(3);
    CHECK(sample_group(0, topo, 1, s) == std::vector<int>{0});
    CHECK(sample_group(0, topo, 2, s) == std::vector<int>{0, 3});
    CHECK_THROWS_AS(sample_group(8, topo, 2, s), std::invalid_argument);
    for (int trial = 0; trial < 2000; ++trial) {
        std::vector<int> eligible;
        for (const auto& n : topo.nodes()) {
            if (n.eligible) {
                eligible.push_back(n.id);
            }
        }
        const int anchor = eligible[static_cast<std::size_t>(s.uniform_int(0, static_cast<std::int64_t>(eligible.size()) - 1))];
        const int k = static_cast<int>(s.uniform_int(1, 3));
        const auto g = sample_group(anchor, topo, k, s);
        CHECK(std::is_sorted(g.begin(), g.end()));
        CHECK(std::find(g.begin(), g.end(), anchor) != g.end());
        CHECK(static_cast<int>(g.size()) <= k);
        CHECK(induced_connected(topo, g));
        for (int j : g) {
            CHECK(topo.node(static_cast<std::size_t>(j)).eligible);
        }
    }
}

TEST_CASE("no activity means no windows")
{
    const auto cfg = default_config();
    const auto topo = build_default_topology();
    std::vector<std::vector<std::uint8_t>> act(topo.size(), std::vector<std::uint8_t>(2000, 0));
    RandomStream s(4);
    PlacementStats stats;
    CHECK(sample_windows(2000, topo, act, cfg, s, &stats).empty());
    CHECK(stats.attempts == 0);
}

TEST_CASE("placement respects bounds, uniqueness and coverage")
{
    const auto cfg = default_config();
    const auto topo = build_default_topology();
    const double r = cfg.attack.target_attack_frac;
    const std::int64_t len = 20000;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto act = default_activity(cfg, topo, len, seed);
        RandomStream s(seed, kSharedOwner, Process::AttackPlacement);
        auto windows = sample_windows(len, topo, act, cfg, s);
        std::set<std::pair<std::int64_t, std::vector<int>>> keys;
        std::vector<std::vector<std::uint8_t>> labeled(topo.size(), std::vector<std::uint8_t>(len, 0));
        for (const auto& w : windows) {
            CHECK(0 <= w.s0);
            CHECK(w.s0 < w.s1);
            CHECK(w.s1 <= len);
            CHECK(w.t0 == w.s0 + cfg.attack.lead);
            CHECK(w.s1 - w.s0 == cfg.attack.lead + (w.t1 - w.t0) + cfg.attack.tail + cfg.attack.hyst);
            CHECK(w.t1 - w.t0 >= cfg.attack.win_core_min);
            CHECK(w.t1 - w.t0 <= cfg.attack.win_core_max);
            CHECK(keys.emplace(w.t0, w.nodes).second);
            CHECK(induced_connected(topo, w.nodes));
            for (int j : w.nodes) {
                std::fill(labeled[static_cast<std::size_t>(j)].begin() + w.s0, labeled[static_cast<std::size_t>(j)].begin() + w.s1, 1);
            }
        }
        for (std::size_t i = 0; i < topo.size(); ++i) {
            std::int64_t a = 0;
            std::int64_t y = 0;
            for (std::int64_t t = 0; t < len; ++t) {
                a += act[i][static_cast<std::size_t>(t)];
                y += act[i][static_cast<std::size_t>(t)] & labeled[i][static_cast<std::size_t>(t)];
            }
            if (!topo.node(i).eligible) {
                CHECK(y == 0);
            } else if (a >= 500) {
                const double ri = static_cast<double>(y) / static_cast<double>(a);
                CHECK(ri >= 0.8 * r);
                CHECK(ri <= 1.3 * r);
            }
        }
    }
}

TEST_CASE("overlap can be disabled")
{
    auto cfg = default_config();
    cfg.attack.allow_overlap = false;
    const auto topo = build_default_topology();
    const std::int64_t len = 20000;
    const auto act = default_activity(cfg, topo, len, 77);
    RandomStream s(77, kSharedOwner, Process::AttackPlacement);
    const auto windows = sample_windows(len, topo, act, cfg, s);
    REQUIRE_FALSE(windows.empty());
    for (std::size_t a = 0; a < windows.size(); ++a) {
        for (std::size_t b = a + 1; b < windows.size(); ++b) {
            const auto& wa = windows[a];
            const auto& wb = windows[b];
            std::vector<int> shared;
            std::set_intersection(wa.nodes.begin(), wa.nodes.end(), wb.nodes.begin(), wb.nodes.end(), std::back_inserter(shared));
            if (!shared.empty()) {
                CHECK((wa.s1 <= wb.s0 || wb.s1 <= wa.s0));
            }
        }
    }
}

TEST_CASE("finalize orders windows and draws effects")
{
    const auto cfg = default_config();
    const auto topo = build_default_topology();
    const auto act = default_activity(cfg, topo, 5000, 5);
    RandomStream s(5, kSharedOwner, Process::AttackPlacement);
    auto windows = sample_windows(5000, topo, act, cfg, s);
    RandomStream e(5, kSharedOwner, Process::AttackEffects);
    finalize_windows(windows, Split::Val, cfg, e);
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const auto& w = windows[k];
        CHECK(w.window_id == static_cast<int>(k));
        CHECK(w.split == Split::Val);
        CHECK(static_cast<std::int64_t>(w.ramp.size()) == w.length());
        CHECK(static_cast<std::int64_t>(w.ge_trace.size()) == w.length());
        CHECK(w.shadow_loss_db >= 0.5);
        CHECK(w.shadow_loss_db <= 67.0);
        CHECK(w.alpha_drop > 0.0);
        CHECK(w.alpha_drop <= 1.0);
        CHECK(w.sigma_mult >= 1.0);
        if (k > 0) {
            CHECK(std::tie(windows[k - 1].s0, windows[k - 1].nodes) < std::tie(w.s0, w.nodes));
        }
    }
}

TEST_CASE("apply_attack: gating, exact shadow loss and containment")
{
    const std::int64_t burn = 10;
    const std::int64_t len = 200;
    RandomStream fs(6);
    auto fading = gen_fading_sequence(0.9, burn + len, fs);
    const auto fading0 = fading;
    std::vector<double> shadow(static_cast<std::size_t>(burn + len), 1.25);
    const auto shadow0 = shadow;
    std::vector<std::uint8_t> act(static_cast<std::size_t>(len), 1);
    act[60] = 0;
    std::vector<std::uint8_t> labels(static_cast<std::size_t>(len), 0);

    AttackWindow w;
    w.s0 = 50;
    w.s1 = 100;
    w.t0 = 55;
    w.t1 = 90;
    w.nodes = {0};
    w.shadow_loss_db = 15.0;
    w.alpha_drop = 0.8;
    w.sigma_mult = 1.5;
    w.ramp = ramp_profile(w.s0, w.s1, 0.2);
    w.ge_trace.assign(50, 0);
    apply_attack(w, burn, act, {&shadow, &fading, false}, labels);

    for (std::int64_t t = 0; t < len; ++t) {
        const auto tau = static_cast<std::size_t>(burn + t);
        const bool inside = t >= w.s0 && t < w.s1;
        if (!inside || act[static_cast<std::size_t>(t)] == 0) {
            CHECK(shadow[tau] == shadow0[tau]);
            CHECK(fading.h[tau] == fading0.h[tau]);
            CHECK(labels[static_cast<std::size_t>(t)] == 0);
        } else {
            CHECK(labels[static_cast<std::size_t>(t)] == 1);
            const double r = w.ramp[static_cast<std::size_t>(t - w.s0)];
            CHECK(shadow[tau] == doctest::Approx(shadow0[tau] - 15.0 * r));
        }
    }
    // Past the ramp the loss is the full window value.
    CHECK(shadow0[burn + 80] - shadow[burn + 80] == 15.0);
    for (std::size_t tau = 0; tau < static_cast<std::size_t>(burn); ++tau) {
        CHECK(fading.h[tau] == fading0.h[tau]);
    }

    AttackWindow bad = w;
    bad.s1 = len + 5;
    bad.ramp.resize(static_cast<std::size_t>(bad.length()), 1.0);
    bad.ge_trace.resize(static_cast<std::size_t>(bad.length()), 0);
    CHECK_THROWS_AS(apply_attack(bad, burn, act, {&shadow, &fading, false}, labels), std::out_of_range);
}

TEST_CASE("identity mapping leaves fading bit-exact")
{
    RandomStream fs(7);
    auto fading = gen_fading_sequence(0.95, 400, fs);
    const auto fading0 = fading;
    std::vector<double> shadow(400, 0.0);
    std::vector<std::uint8_t> act(300, 1);
    std::vector<std::uint8_t> labels(300, 0);
    AttackWindow w;
    w.s0 = 20;
    w.s1 = 280;
    w.nodes = {0};
    w.ramp = ramp_profile(w.s0, w.s1, 0.2);
    w.ge_trace.assign(260, 1);
    apply_attack(w, 100, act, {&shadow, &fading, false}, labels);
    CHECK(fading.h == fading0.h);
}

TEST_CASE("innovation multiplier raises innovation variance")
{
    const double rho = 0.9;
    const std::int64_t len = 200;
    std::vector<double> attacked;
    std::vector<double> normal;
    for (int rep = 0; rep < 60; ++rep) {
        RandomStream fs(1000 + static_cast<std::uint64_t>(rep));
        auto fading = gen_fading_sequence(rho, len, fs);
        const auto fading0 = fading;
        std::vector<double> shadow(static_cast<std::size_t>(len), 0.0);
        std::vector<std::uint8_t> act(static_cast<std::size_t>(len), 1);
        std::vector<std::uint8_t> labels(static_cast<std::size_t>(len), 0);
        AttackWindow w;
        w.s0 = 50;
        w.s1 = 150;
        w.nodes = {0};
        w.alpha_drop = 0.9;
        w.sigma_mult = 1.6;
        w.ramp.assign(100, 1.0);
        w.ge_trace.assign(100, 0);
        apply_attack(w, 0, act, {&shadow, &fading, false}, labels);
        const double rho_t = rho * w.alpha_drop;
        for (std::int64_t t = w.s0 + 1; t < w.s1; ++t) {
            const auto i = static_cast<std::size_t>(t);
            attacked.push_back(std::abs(fading.h[i] - rho_t * fading.h[i - 1]));
            normal.push_back(std::abs(fading0.h[i] - rho * fading0.h[i - 1]));
        }
    }
    CHECK(oracle::variance(attacked) > 1.5 * oracle::variance(normal));
}

TEST_CASE("reflection is applied only to reflective nodes")
{
    RandomStream fs(8);
    auto plain = gen_fading_sequence(0.9, 100, fs);
    auto wifi = plain;
    const auto base = plain;
    std::vector<double> shadow(100, 0.0);
    std::vector<std::uint8_t> act(100, 1);
    std::vector<std::uint8_t> labels(100, 0);
    AttackWindow w;
    w.s0 = 10;
    w.s1 = 30;
    w.nodes = {2, 3};
    w.ramp.assign(20, 1.0);
    w.ge_trace.assign(20, 0);
    w.reflect = true;
    w.reflection.assign(20, Complex(0.3, 0.0));
    apply_attack(w, 0, act, {&shadow, &plain, false}, labels);
    apply_attack(w, 0, act, {&shadow, &wifi, true}, labels);
    CHECK(plain.h == base.h);
    CHECK(wifi.h[10] == base.h[10] + Complex(0.3, 0.0));
}

TEST_CASE("manifest rows")
{
    CHECK(manifest_header() == "split,window_id,s0,s1,t0,t1,nodes,group_size,kdrop_db,shadow_loss_db,alpha_drop,sigma_mult");
    AttackWindow w;
    w.split = Split::Test;
    w.window_id = 3;
    w.s0 = 10;
    w.s1 = 60;
    w.t0 = 15;
    w.t1 = 50;
    w.nodes = {3, 7};
    w.kdrop_db = 6.5;
    w.shadow_loss_db = 15.25;
    w.alpha_drop = 0.5;
    w.sigma_mult = 1.5;
    CHECK(manifest_row(w) == "test,3,10,60,15,50,3;7,2,6.5,15.25,0.5,1.5");
}
