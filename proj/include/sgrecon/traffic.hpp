// SPDX-License-Identifier: Apache-2.0
//
// Role-conditioned transmission counts tx_count_i(t) and the activity gate
// a_i(t) = [tx_count_i(t) > 0].

#pragma once

#include "sgrecon/config.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/topology.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sgrecon {

struct TrafficSeries {
    int node_id = 0;
    Split split = Split::Train;
    std::vector<std::int32_t> counts;
};

/// Schedule context for one node: the report phase of each smart meter the
/// node aggregates (only used by gateways) and the node's own report phase.
struct TrafficSchedule {
    int own_phase = 0;
    std::vector<int> child_meter_phases;
};

/// Phase of a node's periodic schedule in [0, period), drawn from its own
/// phase sub-stream so gateways can reproduce their children's schedules.
int traffic_phase(std::uint64_t split_seed, int node_id, int period) noexcept;

TrafficSchedule make_schedule(const Topology& topology, int node_id, const TrafficParams& params,
                              std::uint64_t split_seed);

/// Throws std::invalid_argument for length < 1.
TrafficSeries generate_tx_counts(const NodeSpec& node, std::int64_t length, RandomStream& stream,
                                 const TrafficParams& params, const TrafficSchedule& schedule);

std::vector<std::uint8_t> activity_indicator(std::span<const std::int32_t> counts);

} // namespace sgrecon
