// SPDX-License-Identifier: Apache-2.0

#include "doctest.h"

#include "sgrecon/traffic.hpp"

#include <algorithm>

using namespace sgrecon;

namespace {

TrafficSeries series_for(int node_id, std::int64_t length, std::uint64_t seed)
{
    const auto topo = build_default_topology();
    const auto cfg = default_config();
    RandomStream stream(seed, static_cast<std::uint64_t>(node_id), Process::Traffic);
    const auto schedule = make_schedule(topo, node_id, cfg.traffic, seed);
    return generate_tx_counts(topo.node(static_cast<std::size_t>(node_id)), length, stream, cfg.traffic, schedule);
}

double autocorrelation(const std::vector<std::int32_t>& x, std::size_t lag)
{
    double m = 0.0;
    for (auto v : x) {
        m += v;
    }
    m /= static_cast<double>(x.size());
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        den += (x[t] - m) * (x[t] - m);
        if (t >= lag) {
            num += (x[t] - m) * (x[t - lag] - m);
        }
    }
    return num / den;
}

} // namespace

TEST_CASE("PMU telemetry is near-continuous across seeds")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = series_for(8, 1000, seed);
        const auto active = std::count_if(s.counts.begin(), s.counts.end(), [](int c) { return c > 0; });
        CHECK(active >= 990);
    }
}

TEST_CASE("smart meter autocorrelation peaks at the report period")
{
    const auto s = series_for(0, 5000, 3);
    std::size_t best = 1;
    double best_value = -2.0;
    for (std::size_t lag = 1; lag <= 25; ++lag) {
        const double r = autocorrelation(s.counts, lag);
        if (r > best_value) {
            best_value = r;
            best = lag;
        }
    }
    CHECK(best == 15);
}

TEST_CASE("counts are deterministic, non-negative and bounded")
{
    const auto cfg = default_config();
    for (int node = 0; node < 12; ++node) {
        const auto a = series_for(node, 3000, 9);
        const auto b = series_for(node, 3000, 9);
        CHECK(a.counts == b.counts);
        for (auto c : a.counts) {
            CHECK(c >= 0);
            CHECK(c <= cfg.traffic.max_count);
        }
    }
}

TEST_CASE("gateway carries its meters' reports")
{
    const auto cfg = default_config();
    const auto gw = series_for(3, 3000, 5);
    const auto m0 = traffic_phase(5, 0, cfg.traffic.meter_period);
    for (std::int64_t t = m0; t < 3000; t += cfg.traffic.meter_period) {
        CHECK(gw.counts[static_cast<std::size_t>(t)] >= 1);
    }
}

TEST_CASE("invalid length is rejected")
{
    const auto topo = build_default_topology();
    const auto cfg = default_config();
    RandomStream stream(1);
    CHECK_THROWS_AS(generate_tx_counts(topo.node(0), 0, stream, cfg.traffic, {}), std::invalid_argument);
}

TEST_CASE("activity indicator")
{
    const std::vector<std::int32_t> c{0, 2, 0, 1};
    CHECK(activity_indicator(c) == std::vector<std::uint8_t>{0, 1, 0, 1});
    CHECK(activity_indicator(std::vector<std::int32_t>(6, 0)) == std::vector<std::uint8_t>(6, 0));
    CHECK(activity_indicator(std::vector<std::int32_t>(6, 3)) == std::vector<std::uint8_t>(6, 1));
    const auto s = series_for(4, 2000, 12);
    const auto gate = activity_indicator(s.counts);
    for (std::size_t t = 0; t < gate.size(); ++t) {
        CHECK((gate[t] == 1) == (s.counts[t] > 0));
    }
    CHECK(activity_indicator(s.counts) == gate);
}
