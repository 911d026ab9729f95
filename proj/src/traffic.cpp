// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/traffic.hpp"

#include <algorithm>
#include <stdexcept>

namespace sgrecon {

int traffic_phase(std::uint64_t split_seed, int node_id, int period) noexcept
{
    RandomStream stream(split_seed, static_cast<std::uint64_t>(node_id), Process::TrafficPhase);
    return static_cast<int>(stream.uniform_int(0, period - 1));
}

TrafficSchedule make_schedule(const Topology& topology, int node_id, const TrafficParams& params,
                              std::uint64_t split_seed)
{
    TrafficSchedule schedule;
    const auto& node = topology.node(static_cast<std::size_t>(node_id));
    const int period = node.role == Role::SmartMeter ? params.meter_period : params.poll_period;
    schedule.own_phase = traffic_phase(split_seed, node_id, period);
    if (node.role == Role::Gateway) {
        for (int child : topology.neighbors(static_cast<std::size_t>(node_id))) {
            if (topology.node(static_cast<std::size_t>(child)).role == Role::SmartMeter) {
                schedule.child_meter_phases.push_back(traffic_phase(split_seed, child, params.meter_period));
            }
        }
    }
    return schedule;
}

TrafficSeries generate_tx_counts(const NodeSpec& node, std::int64_t length, RandomStream& stream,
                                 const TrafficParams& p, const TrafficSchedule& schedule)
{
    if (length < 1) {
        throw std::invalid_argument("traffic length must be >= 1");
    }
    TrafficSeries series;
    series.node_id = node.id;
    series.counts.resize(static_cast<std::size_t>(length), 0);

    bool der_on = false;
    for (std::int64_t t = 0; t < length; ++t) {
        std::int64_t count = 0;
        switch (node.role) {
        case Role::SmartMeter:
            count = ((t - schedule.own_phase) % p.meter_period == 0) ? 1 : 0;
            count += stream.bernoulli(p.meter_extra_p) ? 1 : 0;
            break;
        case Role::Gateway:
            for (int phase : schedule.child_meter_phases) {
                count += ((t - phase) % p.meter_period == 0) ? 1 : 0;
            }
            count += stream.poisson(p.gateway_background_rate);
            break;
        case Role::DER: {
            // Two-state on/off chain with geometric sojourns.
            const double flip = der_on ? 1.0 / p.der_mean_on : 1.0 / p.der_mean_off;
            if (stream.bernoulli(flip)) {
                der_on = !der_on;
            }
            const auto burst = stream.poisson(p.der_on_rate);
            count = der_on ? burst : 0;
            break;
        }
        case Role::FeederRelay:
            count = stream.bernoulli(p.relay_event_p) ? 1 : 0;
            break;
        case Role::Controller:
        case Role::SCADA:
        case Role::AMIHeadend:
            count = ((t - schedule.own_phase) % p.poll_period == 0) ? 1 : 0;
            count += stream.poisson(p.poll_background_rate);
            break;
        case Role::PMU:
            count = stream.bernoulli(p.pmu_dropout_p) ? 0 : 1;
            break;
        case Role::SubstationGW:
            count = stream.poisson(p.substation_rate);
            break;
        default:
            throw std::invalid_argument("unknown node role");
        }
        series.counts[static_cast<std::size_t>(t)] =
            static_cast<std::int32_t>(std::clamp<std::int64_t>(count, 0, p.max_count));
    }
    return series;
}

std::vector<std::uint8_t> activity_indicator(std::span<const std::int32_t> counts)
{
    std::vector<std::uint8_t> gate(counts.size());
    std::transform(counts.begin(), counts.end(), gate.begin(),
                   [](std::int32_t c) { return static_cast<std::uint8_t>(c > 0 ? 1 : 0); });
    return gate;
}

} // namespace sgrecon
