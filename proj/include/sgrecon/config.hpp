// SPDX-License-Identifier: Apache-2.0
//
// Generator parameters. Every numeric knob used by the generator, the
// validation harness and the federated baseline lives in GeneratorConfig and
// is serialized with the dataset, so a release can be regenerated from its
// own config snapshot.

#pragma once

#include "sgrecon/types.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sgrecon {

/// Per-technology channel, measurement and link parameters.
struct TechParams {
    double fading_rho = 0.9;
    double gamma0_db = 0.0;
    double margin_db = 0.0;
    double per_k = 1.0;         ///< logistic steepness, per dB
    double gamma50_db = 0.0;    ///< ignored for LoRa (spreading-factor table)
    double latency_base_ms = 1.0;
    double delta_rtx_ms = 0.8;
    double jitter_sigma_ms = 0.05;
    double meas_sigma_db = 1.0;
    double meas_clip_db = 3.0;
    double meas_quant_db = 0.5;
    double interf_scale_db = 0.0;

    bool operator==(const TechParams&) const = default;
};

struct Mixture {
    std::vector<double> modes;
    std::vector<double> weights;
    std::vector<double> sigmas;
    double clip_lo = 0.0;
    double clip_hi = 1.0;

    bool operator==(const Mixture&) const = default;
};

struct LoRaParams {
    std::map<int, double> sf_gamma50_db; ///< spreading factor -> SNR at PER 0.5
    std::map<int, int> node_sf;          ///< node id -> spreading factor
    int default_sf = 7;

    bool operator==(const LoRaParams&) const = default;
};

struct TrafficParams {
    int max_count = 20;
    int meter_period = 15;
    double meter_extra_p = 0.02;
    double gateway_background_rate = 0.3;
    double der_mean_on = 10.0;
    double der_mean_off = 40.0;
    double der_on_rate = 1.0;
    double relay_event_p = 0.1;
    int poll_period = 5;
    double poll_background_rate = 0.5;
    double pmu_dropout_p = 0.005;
    double substation_rate = 0.8;

    bool operator==(const TrafficParams&) const = default;
};

struct ScenarioParams {
    double sigma_db = 0.0;
    double dcor_m = 1.0;

    bool operator==(const ScenarioParams&) const = default;
};

struct ShadowingParams {
    /// Keyed "InH_LOS", "InH_NLOS", "UMi_LOS", ..., "RMa_NLOS".
    std::map<std::string, ScenarioParams> scenarios;
    std::array<std::string, kTierCount> tier_scenario;
    std::array<double, kTierCount> tier_speed_mps{};
    double share_global = 0.1;
    double share_layer = 0.2;
    double share_local = 0.7;
    /// Synthesize WAN shadowing for fiber nodes instead of a zero process.
    bool fiber_shadow_override = false;

    bool operator==(const ShadowingParams&) const = default;
};

struct InterferenceParams {
    double background_rho = 0.9;
    double plc_p_enter = 0.02;
    double plc_p_exit = 0.3;
    double plc_alpha = 1.5;
    double plc_scale_db = 1.0;
    double impulse_clip_lo_db = 0.0;
    double impulse_clip_hi_db = 30.0;

    bool operator==(const InterferenceParams&) const = default;
};

struct BurstParams {
    double p0 = 0.005;
    double c_slope = 0.1;
    double scale_factor = 2.0; ///< burst magnitude scale as a multiple of L0
    double decay = 0.5;

    bool operator==(const BurstParams&) const = default;
};

struct AttackParams {
    double target_attack_frac = 0.08;
    int win_core_min = 30;
    int win_core_max = 120;
    int lead = 5;
    int tail = 5;
    int hyst = 5;
    double ramp_frac = 0.2;
    int group_min = 1;
    int group_max = 3;
    bool allow_overlap = true;
    std::vector<Tech> eligible_tech;
    int placement_budget_per_node = 10;
    Mixture shadow;
    Mixture kdrop;
    double alpha_a0 = 0.05;
    double alpha_a1 = 0.01;
    double sigma_s0 = 0.2;
    double sigma_s1 = 0.03;
    double alpha_floor = 0.05;
    double ge_p_gb = 0.05;
    double ge_p_bg = 0.25;
    double wifi_reflect_prob = 1.0;
    double wifi_reflect_k_db = 3.0;
    double wifi_reflect_rel_amp = 0.3;

    bool operator==(const AttackParams&) const = default;
};

struct FeatureParams {
    int rolling_window = 32;
    int entropy_bins = 16;
    double std_floor = 1e-8;

    bool operator==(const FeatureParams&) const = default;
};

struct BaselineParams {
    int rounds = 30;
    int local_epochs = 2;
    int batch_size = 256;
    double learning_rate = 0.05;
    double threshold = 0.5;
    bool class_balanced = true;
    std::optional<std::uint64_t> train_seed;

    bool operator==(const BaselineParams&) const = default;
};

struct ValidationParams {
    double sigma_rel_tol = 0.10;
    double rho_lo = 0.9;
    double rho_hi = 1.0;
    std::vector<int> shadow_gate_nodes{0, 4, 8};
    int shadow_min_rows = 1000;
    double coverage_lo_factor = 0.8;
    double coverage_hi_factor = 1.3;
    int coverage_min_active = 500;
    int shift_min_rows = 100;
    double std_mean_tol = 1e-9;
    double std_std_tol = 1e-6;
    double xcorr_sigmas = 3.0;
    int causality_cut_points = 8;

    bool operator==(const ValidationParams&) const = default;
};

struct GeneratorConfig {
    std::uint64_t seed_base = 42;
    double dt_seconds = 1.0;
    std::int64_t t_train = 20000;
    std::int64_t t_val = 5000;
    std::int64_t t_test = 5000;
    std::int64_t burn_in = 500;
    double mixing_alpha = 0.30;
    double ewma_beta = 0.7;
    double per_eps = 1e-6;
    double r_max = 10.0;
    double delta_node_sigma_db = 1.0;
    double eps_min = 1e-4;
    double eps0 = 1e-5;
    std::array<TechParams, kTechCount> tech{};
    LoRaParams lora;
    TrafficParams traffic;
    ShadowingParams shadowing;
    InterferenceParams interference;
    BurstParams burst;
    AttackParams attack;
    FeatureParams features;
    BaselineParams baseline;
    ValidationParams validation;

    std::int64_t split_length(Split split) const noexcept;
    const TechParams& params(Tech t) const noexcept { return tech[index(t)]; }
    bool is_eligible(Tech t) const noexcept;
    /// SNR at PER 0.5 for a node, resolving LoRa spreading factors.
    double gamma50_for(int node_id, Tech t) const;
    const ScenarioParams& scenario_for(Tier tier) const;

    bool operator==(const GeneratorConfig&) const = default;
};

/// Configuration with every documented default applied.
GeneratorConfig default_config();

/// Parses a JSON document. Omitted keys take their defaults; unknown keys,
/// type mismatches and invariant violations raise ConfigError naming the key.
GeneratorConfig load_config(std::string_view document);
GeneratorConfig load_config_file(const std::string& path);

/// Effective configuration as a JSON document (pretty-printed, stable key order).
std::string to_json_string(const GeneratorConfig& config);

struct Violation {
    std::string field;
    std::string message;
};

std::vector<Violation> validate_config(const GeneratorConfig& config);

/// Deterministic, platform-independent seed for one split. Injective in
/// (seed_base, split) for seed_base < 2^62.
std::uint64_t derive_split_seed(const GeneratorConfig& config, Split split) noexcept;
std::uint64_t derive_split_seed(std::uint64_t seed_base, Split split) noexcept;

/// Seed for dataset-level draws that are shared by all splits (static
/// per-node calibration offsets).
std::uint64_t derive_dataset_seed(std::uint64_t seed_base) noexcept;

} // namespace sgrecon
