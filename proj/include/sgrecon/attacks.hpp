// SPDX-License-Identifier: Apache-2.0
//
// Presence-only attack windows: quota-driven placement, ramped and
// activity-gated perturbation of shadowing and fading, labels and manifest.

#pragma once

#include "sgrecon/channel.hpp"
#include "sgrecon/config.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/topology.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sgrecon {

struct AttackWindow {
    Split split = Split::Train;
    int window_id = 0;
    std::int64_t s0 = 0; ///< labeled interval [s0, s1), post-burn-in epochs
    std::int64_t s1 = 0;
    std::int64_t t0 = 0; ///< core interval [t0, t1)
    std::int64_t t1 = 0;
    std::vector<int> nodes; ///< sorted
    double shadow_loss_db = 0.0;
    int shadow_mode = 0;
    double kdrop_db = 0.0;
    double alpha_drop = 1.0;
    double sigma_mult = 1.0;
    std::vector<double> ramp;            ///< r_w(t), one entry per labeled epoch
    std::vector<std::uint8_t> ge_trace;  ///< one entry per labeled epoch
    bool reflect = false;
    std::vector<Complex> reflection;     ///< g e^{j theta} per labeled epoch, empty when !reflect

    std::int64_t length() const noexcept { return s1 - s0; }
};

/// r(t) for t in [s0, s1): (t - s0 + 1) / L_ramp on the ramp, 1 afterwards.
std::vector<double> ramp_profile(std::int64_t s0, std::int64_t s1, double ramp_frac);

struct MixtureDraw {
    double value = 0.0;
    int mode = 0;
};

/// Picks a component by weight, draws Normal(mode, sigma) and clips.
MixtureDraw sample_mixture(const Mixture& mixture, RandomStream& stream);

struct KdropMapping {
    double alpha_drop = 1.0;
    double sigma_mult = 1.0;
};

KdropMapping map_kdrop(double kdrop_db, double a0, double a1, double s0_coef, double s1_coef,
                       double alpha_floor = 0.05);

/// Two-state chain starting in the good state (0).
std::vector<std::uint8_t> gilbert_elliott_sequence(std::int64_t length, double p_gb, double p_bg,
                                                   RandomStream& stream);

using NodePredicate = std::function<bool(int)>;

/// Randomized frontier expansion from `anchor` over nodes accepted by
/// `admit` (default: attack-eligible nodes). Returns a sorted, connected set
/// of at most k nodes. Throws std::invalid_argument if the anchor is not admitted.
std::vector<int> sample_group(int anchor, const Topology& topology, int k, RandomStream& stream,
                              const NodePredicate& admit = {});

struct PlacementStats {
    std::int64_t attempts = 0;
    std::int64_t budget = 0;
    bool budget_exhausted = false;
};

/// Places windows on the post-burn-in timeline. `activity[i]` is node i's
/// activity gate over [0, split_len). Effects (mixture draws, GE traces,
/// reflections) are drawn afterwards by finalize_windows.
std::vector<AttackWindow> sample_windows(std::int64_t split_len, const Topology& topology,
                                         std::span<const std::vector<std::uint8_t>> activity,
                                         const GeneratorConfig& config, RandomStream& stream,
                                         PlacementStats* stats = nullptr);

/// Sorts windows by (s0, nodes), assigns window ids and draws per-window
/// effects in that order.
void finalize_windows(std::vector<AttackWindow>& windows, Split split, const GeneratorConfig& config,
                      RandomStream& stream);

/// Per-node latents an attack can touch, indexed on the latent timeline
/// (burn-in included).
struct AttackableLatents {
    std::vector<double>* shadow_db = nullptr;
    FadingSequence* fading = nullptr;
    bool reflective = false; ///< node receives the Wi-Fi reflected component
};

/// Applies one window to one node. `activity` and `labels` cover the
/// post-burn-in timeline; epoch t maps to latent index burn_in + t.
/// Throws std::out_of_range if the window leaves either range.
void apply_attack(const AttackWindow& window, std::int64_t burn_in, std::span<const std::uint8_t> activity,
                  AttackableLatents latents, std::span<std::uint8_t> labels);

std::string manifest_header();
/// One CSV line (no trailing newline) per window.
std::string manifest_row(const AttackWindow& window);

} // namespace sgrecon
