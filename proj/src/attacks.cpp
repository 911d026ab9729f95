// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/attacks.hpp"
#include "sgrecon/numfmt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace sgrecon {

std::vector<double> ramp_profile(std::int64_t s0, std::int64_t s1, double ramp_frac)
{
    if (s1 <= s0) {
        throw std::invalid_argument("ramp_profile: empty interval");
    }
    if (!(ramp_frac > 0.0 && ramp_frac <= 1.0)) {
        throw std::invalid_argument("ramp_profile: ramp_frac must lie in (0, 1]");
    }
    const std::int64_t length = s1 - s0;
    const auto ramp_len =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::round(ramp_frac * static_cast<double>(length))));
    std::vector<double> r(static_cast<std::size_t>(length));
    for (std::int64_t k = 0; k < length; ++k) {
        r[static_cast<std::size_t>(k)] =
            k + 1 >= ramp_len ? 1.0 : static_cast<double>(k + 1) / static_cast<double>(ramp_len);
    }
    return r;
}

MixtureDraw sample_mixture(const Mixture& mixture, RandomStream& stream)
{
    if (mixture.modes.empty() || mixture.modes.size() != mixture.weights.size() ||
        mixture.modes.size() != mixture.sigmas.size()) {
        throw std::invalid_argument("sample_mixture: malformed mixture");
    }
    const double u = stream.uniform();
    const double z = stream.normal();
    double acc = 0.0;
    std::size_t mode = mixture.modes.size() - 1;
    for (std::size_t k = 0; k < mixture.weights.size(); ++k) {
        acc += mixture.weights[k];
        if (u < acc) {
            mode = k;
            break;
        }
    }
    const double value = mixture.modes[mode] + mixture.sigmas[mode] * z;
    return {std::clamp(value, mixture.clip_lo, mixture.clip_hi), static_cast<int>(mode)};
}

KdropMapping map_kdrop(double kdrop_db, double a0, double a1, double s0_coef, double s1_coef, double alpha_floor)
{
    if (kdrop_db < 0.0) {
        throw std::invalid_argument("map_kdrop: kdrop must be >= 0");
    }
    KdropMapping m;
    m.alpha_drop = std::clamp(1.0 / (1.0 + a0 + a1 * kdrop_db), alpha_floor, 1.0);
    m.sigma_mult = 1.0 + s0_coef + s1_coef * kdrop_db;
    return m;
}

std::vector<std::uint8_t> gilbert_elliott_sequence(std::int64_t length, double p_gb, double p_bg,
                                                   RandomStream& stream)
{
    std::vector<std::uint8_t> g(static_cast<std::size_t>(std::max<std::int64_t>(length, 0)));
    std::uint8_t state = 0;
    for (std::size_t t = 0; t < g.size(); ++t) {
        g[t] = state;
        const double u = stream.uniform();
        state = state == 0 ? (u < p_gb ? 1 : 0) : (u < p_bg ? 0 : 1);
    }
    return g;
}

std::vector<int> sample_group(int anchor, const Topology& topology, int k, RandomStream& stream,
                              const NodePredicate& admit)
{
    const auto admitted = [&](int id) {
        return admit ? admit(id) : topology.node(static_cast<std::size_t>(id)).eligible;
    };
    if (anchor < 0 || static_cast<std::size_t>(anchor) >= topology.size() || !admitted(anchor)) {
        throw std::invalid_argument("sample_group: anchor " + std::to_string(anchor) + " is not eligible");
    }
    std::vector<int> group{anchor};
    std::vector<int> frontier;
    const auto extend_frontier = [&](int from) {
        for (int j : topology.neighbors(static_cast<std::size_t>(from))) {
            const bool known = std::find(group.begin(), group.end(), j) != group.end() ||
                               std::find(frontier.begin(), frontier.end(), j) != frontier.end();
            if (!known && admitted(j)) {
                frontier.push_back(j);
            }
        }
    };
    extend_frontier(anchor);
    while (static_cast<int>(group.size()) < k && !frontier.empty()) {
        const auto pick = static_cast<std::size_t>(stream.uniform_int(0, static_cast<std::int64_t>(frontier.size()) - 1));
        const int next = frontier[pick];
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));
        group.push_back(next);
        extend_frontier(next);
    }
    std::sort(group.begin(), group.end());
    return group;
}

std::vector<AttackWindow> sample_windows(std::int64_t split_len, const Topology& topology,
                                         std::span<const std::vector<std::uint8_t>> activity,
                                         const GeneratorConfig& config, RandomStream& stream, PlacementStats* stats)
{
    const auto& ap = config.attack;
    const std::size_t n = topology.size();
    if (activity.size() != n) {
        throw std::invalid_argument("sample_windows: activity must cover every node");
    }
    std::vector<std::int64_t> quota(n, 0);
    std::vector<std::int64_t> covered(n, 0);
    std::vector<std::vector<std::uint8_t>> labeled(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (static_cast<std::int64_t>(activity[i].size()) != split_len) {
            throw std::invalid_argument("sample_windows: activity length mismatch");
        }
        labeled[i].assign(static_cast<std::size_t>(split_len), 0);
        if (topology.node(i).eligible) {
            const auto active = std::count(activity[i].begin(), activity[i].end(), std::uint8_t{1});
            quota[i] = static_cast<std::int64_t>(std::ceil(ap.target_attack_frac * static_cast<double>(active)));
        }
    }
    const auto deficit = [&](std::size_t i) { return topology.node(i).eligible ? quota[i] - covered[i] : 0; };

    PlacementStats local;
    local.budget = static_cast<std::int64_t>(ap.placement_budget_per_node) * static_cast<std::int64_t>(n) *
                   std::max<std::int64_t>(1, (split_len + 999) / 1000);
    std::vector<AttackWindow> windows;
    std::set<std::pair<std::int64_t, std::vector<int>>> keys;

    while (local.attempts < local.budget) {
        std::int64_t total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            total += std::max<std::int64_t>(0, deficit(i));
        }
        if (total == 0) {
            break;
        }
        ++local.attempts;

        // Anchor proportional to remaining deficit.
        std::int64_t pick = stream.uniform_int(0, total - 1);
        std::size_t anchor = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto d = std::max<std::int64_t>(0, deficit(i));
            if (pick < d) {
                anchor = i;
                break;
            }
            pick -= d;
        }
        const std::int64_t core = stream.uniform_int(ap.win_core_min, ap.win_core_max);
        const std::int64_t lab = ap.lead + core + ap.tail + ap.hyst;
        const std::int64_t k = stream.uniform_int(ap.group_min, ap.group_max);
        if (lab > split_len) {
            continue;
        }
        const std::int64_t s0 = stream.uniform_int(0, split_len - lab);
        // Only nodes still under quota join, so groups do not overshoot
        // neighbors that already met their target.
        const auto group = sample_group(static_cast<int>(anchor), topology, static_cast<int>(k), stream,
                                        [&](int j) { return deficit(static_cast<std::size_t>(j)) > 0; });

        AttackWindow w;
        w.s0 = s0;
        w.s1 = s0 + lab;
        w.t0 = s0 + ap.lead;
        w.t1 = w.t0 + core;
        w.nodes = group;
        if (!keys.emplace(w.t0, w.nodes).second) {
            continue;
        }
        if (!ap.allow_overlap) {
            bool clash = false;
            for (int j : w.nodes) {
                const auto& mask = labeled[static_cast<std::size_t>(j)];
                clash = clash || std::any_of(mask.begin() + s0, mask.begin() + w.s1, [](std::uint8_t v) { return v != 0; });
            }
            if (clash) {
                keys.erase({w.t0, w.nodes});
                continue;
            }
        }
        for (int j : w.nodes) {
            auto& mask = labeled[static_cast<std::size_t>(j)];
            const auto& act = activity[static_cast<std::size_t>(j)];
            for (std::int64_t t = w.s0; t < w.s1; ++t) {
                const auto idx = static_cast<std::size_t>(t);
                if (!mask[idx]) {
                    mask[idx] = 1;
                    covered[static_cast<std::size_t>(j)] += act[idx];
                }
            }
        }
        windows.push_back(std::move(w));
    }
    for (std::size_t i = 0; i < n; ++i) {
        local.budget_exhausted = local.budget_exhausted || deficit(i) > 0;
    }
    if (stats != nullptr) {
        *stats = local;
    }
    return windows;
}

void finalize_windows(std::vector<AttackWindow>& windows, Split split, const GeneratorConfig& config,
                      RandomStream& stream)
{
    const auto& ap = config.attack;
    std::sort(windows.begin(), windows.end(), [](const AttackWindow& a, const AttackWindow& b) {
        return std::tie(a.s0, a.nodes) < std::tie(b.s0, b.nodes);
    });
    const double k_lin = std::pow(10.0, ap.wifi_reflect_k_db / 10.0);
    const double los = std::sqrt(k_lin / (k_lin + 1.0));
    const double scatter = std::sqrt(1.0 / (2.0 * (k_lin + 1.0)));
    for (std::size_t id = 0; id < windows.size(); ++id) {
        auto& w = windows[id];
        w.split = split;
        w.window_id = static_cast<int>(id);
        w.ramp = ramp_profile(w.s0, w.s1, ap.ramp_frac);
        const auto shadow = sample_mixture(ap.shadow, stream);
        w.shadow_loss_db = shadow.value;
        w.shadow_mode = shadow.mode;
        w.kdrop_db = sample_mixture(ap.kdrop, stream).value;
        const auto mapping = map_kdrop(w.kdrop_db, ap.alpha_a0, ap.alpha_a1, ap.sigma_s0, ap.sigma_s1, ap.alpha_floor);
        w.alpha_drop = mapping.alpha_drop;
        w.sigma_mult = mapping.sigma_mult;
        w.ge_trace = gilbert_elliott_sequence(w.length(), ap.ge_p_gb, ap.ge_p_bg, stream);
        w.reflect = stream.bernoulli(ap.wifi_reflect_prob);
        w.reflection.clear();
        if (w.reflect) {
            // Rician amplitude with unit mean power, scaled relative to the
            // unit-RMS stationary envelope.
            w.reflection.resize(static_cast<std::size_t>(w.length()));
            for (auto& g : w.reflection) {
                const double x = stream.normal();
                const double y = stream.normal();
                const double theta = 2.0 * std::numbers::pi * stream.uniform();
                const double amplitude = ap.wifi_reflect_rel_amp * std::abs(Complex(los + scatter * x, scatter * y));
                g = std::polar(amplitude, theta);
            }
        }
    }
}

void apply_attack(const AttackWindow& window, std::int64_t burn_in, std::span<const std::uint8_t> activity,
                  AttackableLatents latents, std::span<std::uint8_t> labels)
{
    auto& shadow = *latents.shadow_db;
    auto& fading = *latents.fading;
    const auto latent_len = static_cast<std::int64_t>(fading.h.size());
    if (window.s0 < 0 || window.s1 > static_cast<std::int64_t>(activity.size()) ||
        window.s1 > static_cast<std::int64_t>(labels.size()) || burn_in + window.s1 > latent_len ||
        static_cast<std::int64_t>(shadow.size()) != latent_len) {
        throw std::out_of_range("apply_attack: window outside the latent range");
    }
    const double rho = fading.rho;
    for (std::int64_t t = window.s0; t < window.s1; ++t) {
        const auto k = static_cast<std::size_t>(t - window.s0);
        const auto tau = static_cast<std::size_t>(burn_in + t);
        const double a = activity[static_cast<std::size_t>(t)] != 0 ? 1.0 : 0.0;
        if (a == 0.0) {
            continue;
        }
        const double ra = window.ramp[k] * a;
        shadow[tau] -= window.shadow_loss_db * ra;

        const int exponent = 1 + window.ge_trace[k];
        const double rho_t = rho * std::pow(window.alpha_drop, exponent);
        const double nu = std::pow(window.sigma_mult, exponent);
        Complex attacked;
        if (tau == 0) {
            attacked = nu * fading.innovation[0];
        } else {
            attacked = rho_t * fading.h[tau - 1] + (std::sqrt(1.0 - rho_t * rho_t) * nu) * fading.innovation[tau];
        }
        if (latents.reflective && window.reflect) {
            attacked += window.reflection[k];
        }
        fading.h[tau] += ra * (attacked - fading.h[tau]);
        labels[static_cast<std::size_t>(t)] = 1;
    }
}

std::string manifest_header()
{
    return "split,window_id,s0,s1,t0,t1,nodes,group_size,kdrop_db,shadow_loss_db,alpha_drop,sigma_mult";
}

std::string manifest_row(const AttackWindow& w)
{
    std::string row(to_string(w.split));
    row += ',';
    append_int(row, w.window_id);
    for (std::int64_t v : {w.s0, w.s1, w.t0, w.t1}) {
        row += ',';
        append_int(row, v);
    }
    row += ',';
    for (std::size_t k = 0; k < w.nodes.size(); ++k) {
        if (k > 0) {
            row += ';';
        }
        append_int(row, w.nodes[k]);
    }
    row += ',';
    append_int(row, static_cast<std::int64_t>(w.nodes.size()));
    for (double v : {w.kdrop_db, w.shadow_loss_db, w.alpha_drop, w.sigma_mult}) {
        row += ',';
        append_double(row, v);
    }
    return row;
}

} // namespace sgrecon
