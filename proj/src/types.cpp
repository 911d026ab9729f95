// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/types.hpp"

namespace sgrecon {

namespace {

constexpr std::array<std::string_view, 9> kRoleNames{"SmartMeter", "Gateway", "DER",
                                                     "FeederRelay", "Controller", "PMU",
                                                     "SCADA", "AMIHeadend", "SubstationGW"};
constexpr std::array<std::string_view, 3> kTierNames{"HAN", "NAN", "WAN"};
constexpr std::array<std::string_view, 6> kTechNames{"ZigBee", "WiFi", "LoRa", "PLC", "LTE", "Fiber"};
constexpr std::array<std::string_view, 3> kSplitNames{"train", "val", "test"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view name) noexcept
{
    for (std::size_t i = 0; i < N; ++i) {
        if (names[i] == name) {
            return static_cast<Enum>(i);
        }
    }
    return std::nullopt;
}

} // namespace

std::string_view to_string(Role role) noexcept { return kRoleNames[static_cast<std::size_t>(role)]; }
std::string_view to_string(Tier tier) noexcept { return kTierNames[index(tier)]; }
std::string_view to_string(Tech tech) noexcept { return kTechNames[index(tech)]; }
std::string_view to_string(Split split) noexcept { return kSplitNames[index(split)]; }

std::optional<Role> role_from_string(std::string_view name) noexcept { return lookup<Role>(kRoleNames, name); }
std::optional<Tier> tier_from_string(std::string_view name) noexcept { return lookup<Tier>(kTierNames, name); }
std::optional<Tech> tech_from_string(std::string_view name) noexcept { return lookup<Tech>(kTechNames, name); }
std::optional<Split> split_from_string(std::string_view name) noexcept { return lookup<Split>(kSplitNames, name); }

} // namespace sgrecon
