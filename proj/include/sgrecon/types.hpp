// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sgrecon {

enum class Role { SmartMeter, Gateway, DER, FeederRelay, Controller, PMU, SCADA, AMIHeadend, SubstationGW };
enum class Tier { Han, Nan, Wan };
enum class Tech { ZigBee, WiFi, LoRa, PLC, LTE, Fiber };
enum class Split { Train, Val, Test };

inline constexpr std::size_t kTierCount = 3;
inline constexpr std::size_t kTechCount = 6;
inline constexpr std::array<Split, 3> kAllSplits{Split::Train, Split::Val, Split::Test};
inline constexpr std::array<Tech, kTechCount> kAllTechs{Tech::ZigBee, Tech::WiFi, Tech::LoRa,
                                                        Tech::PLC,    Tech::LTE,  Tech::Fiber};
inline constexpr std::array<Tier, kTierCount> kAllTiers{Tier::Han, Tier::Nan, Tier::Wan};

std::string_view to_string(Role role) noexcept;
std::string_view to_string(Tier tier) noexcept;
std::string_view to_string(Tech tech) noexcept;
std::string_view to_string(Split split) noexcept;

std::optional<Role> role_from_string(std::string_view name) noexcept;
std::optional<Tier> tier_from_string(std::string_view name) noexcept;
std::optional<Tech> tech_from_string(std::string_view name) noexcept;
std::optional<Split> split_from_string(std::string_view name) noexcept;

constexpr std::size_t index(Tier tier) noexcept { return static_cast<std::size_t>(tier); }
constexpr std::size_t index(Tech tech) noexcept { return static_cast<std::size_t>(tech); }
constexpr std::size_t index(Split split) noexcept { return static_cast<std::size_t>(split); }

/// Raised for configuration errors: unparsable documents, unknown keys and
/// invariant violations.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a dataset directory is incomplete or unreadable.
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sgrecon
