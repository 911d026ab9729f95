// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sgrecon {

FadingSequence gen_fading_sequence(double rho, std::int64_t length, RandomStream& stream)
{
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument("fading rho must lie in [0, 1)");
    }
    FadingSequence seq;
    seq.rho = rho;
    if (length <= 0) {
        return seq;
    }
    const auto n = static_cast<std::size_t>(length);
    seq.h.resize(n);
    seq.innovation.resize(n);
    const double scale = std::sqrt(1.0 - rho * rho);
    seq.innovation[0] = stream.complex_normal();
    seq.h[0] = seq.innovation[0];
    for (std::size_t t = 1; t < n; ++t) {
        seq.innovation[t] = stream.complex_normal();
        seq.h[t] = rho * seq.h[t - 1] + scale * seq.innovation[t];
    }
    return seq;
}

PhaseDescriptors phase_descriptors(std::span<const Complex> h)
{
    PhaseDescriptors out;
    out.phase_sin.resize(h.size());
    out.phase_cos.resize(h.size());
    out.dphase.resize(h.size());
    double previous = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) {
        const double phi = std::atan2(h[t].imag(), h[t].real());
        out.phase_sin[t] = std::sin(phi);
        out.phase_cos[t] = std::cos(phi);
        if (t == 0) {
            out.dphase[t] = 0.0;
        } else {
            // Unwrapping keeps the increment in (-pi, pi].
            double d = phi - previous;
            while (d > std::numbers::pi) {
                d -= 2.0 * std::numbers::pi;
            }
            while (d <= -std::numbers::pi) {
                d += 2.0 * std::numbers::pi;
            }
            out.dphase[t] = d;
        }
        previous = phi;
    }
    return out;
}

double shadow_ar_coefficient(double speed_mps, double dt_seconds, double dcor_m) noexcept
{
    return std::exp(-speed_mps * dt_seconds / dcor_m);
}

std::vector<double> ar1_from_innovations(double rho, std::span<const double> innovations)
{
    std::vector<double> x(innovations.size());
    if (x.empty()) {
        return x;
    }
    const double scale = std::sqrt(1.0 - rho * rho);
    x[0] = innovations[0];
    for (std::size_t t = 1; t < x.size(); ++t) {
        x[t] = rho * x[t - 1] + scale * innovations[t];
    }
    return x;
}

std::vector<double> gen_ar1(double rho, std::int64_t length, RandomStream& stream)
{
    std::vector<double> e(static_cast<std::size_t>(std::max<std::int64_t>(length, 0)));
    for (auto& v : e) {
        v = stream.normal();
    }
    return ar1_from_innovations(rho, e);
}

SharedShadowing::SharedShadowing(const GeneratorConfig& config, std::uint64_t split_seed, std::int64_t length)
    : length_(length)
{
    RandomStream global_stream(split_seed, kSharedOwner, Process::ShadowGlobal);
    std::vector<double> global_innovations(static_cast<std::size_t>(std::max<std::int64_t>(length, 0)));
    for (auto& v : global_innovations) {
        v = global_stream.normal();
    }
    for (Tier tier : kAllTiers) {
        const auto& scenario = config.scenario_for(tier);
        rho_[index(tier)] = shadow_ar_coefficient(config.shadowing.tier_speed_mps[index(tier)], config.dt_seconds,
                                                  scenario.dcor_m);
        global_[index(tier)] = ar1_from_innovations(rho_[index(tier)], global_innovations);
        RandomStream layer_stream(split_seed, kSharedOwner + 1 + index(tier), Process::ShadowLayer);
        layer_[index(tier)] = gen_ar1(rho_[index(tier)], length, layer_stream);
    }
}

std::vector<double> gen_shadowing(const NodeSpec& node, const GeneratorConfig& config,
                                  const SharedShadowing& shared, RandomStream& local_stream)
{
    const auto n = static_cast<std::size_t>(shared.length());
    if (node.tech == Tech::Fiber && !config.shadowing.fiber_shadow_override) {
        return std::vector<double>(n, 0.0);
    }
    const double sigma = config.scenario_for(node.tier).sigma_db;
    const double rho = shared.rho(node.tier);
    const double c_g = std::sqrt(config.shadowing.share_global);
    const double c_l = std::sqrt(config.shadowing.share_layer);
    const double c_n = std::sqrt(config.shadowing.share_local);
    const auto local = gen_ar1(rho, shared.length(), local_stream);
    const auto global = shared.global(node.tier);
    const auto layer = shared.layer(node.tier);
    std::vector<double> s(n);
    for (std::size_t t = 0; t < n; ++t) {
        s[t] = sigma * (c_g * global[t] + c_l * layer[t] + c_n * local[t]);
    }
    return s;
}

InterferenceTrace gen_interference(const NodeSpec& node, const GeneratorConfig& config, std::int64_t length,
                                   RandomStream& stream)
{
    const auto n = static_cast<std::size_t>(std::max<std::int64_t>(length, 0));
    InterferenceTrace trace;
    trace.interf_db.assign(n, 0.0);
    trace.impulse_db.assign(n, 0.0);
    if (node.tech == Tech::Fiber) {
        return trace;
    }
    const auto& ip = config.interference;
    const double scale = config.params(node.tech).interf_scale_db;
    const auto background = gen_ar1(ip.background_rho, length, stream);
    const bool impulsive = node.tech == Tech::PLC;
    bool in_impulse = false;
    for (std::size_t t = 0; t < n; ++t) {
        double impulse = 0.0;
        if (impulsive) {
            in_impulse = in_impulse ? !stream.bernoulli(ip.plc_p_exit) : stream.bernoulli(ip.plc_p_enter);
            const double magnitude = std::abs(stream.symmetric_stable(ip.plc_alpha)) * ip.plc_scale_db;
            if (in_impulse) {
                impulse = std::clamp(magnitude, ip.impulse_clip_lo_db, ip.impulse_clip_hi_db);
            }
        }
        trace.impulse_db[t] = impulse;
        trace.interf_db[t] = std::max(0.0, scale * std::abs(background[t]) + impulse);
    }
    return trace;
}

} // namespace sgrecon
