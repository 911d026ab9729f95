// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/linkchain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgrecon {

MeasurementParams measurement_params_for(const GeneratorConfig& config, Tech tech)
{
    const auto& p = config.params(tech);
    return MeasurementParams{p.meas_sigma_db, p.meas_clip_db, p.meas_quant_db, config.eps_min, config.eps0};
}

LinkParams link_params_for(const GeneratorConfig& config, const NodeSpec& node, double delta_node_db)
{
    const auto& p = config.params(node.tech);
    LinkParams link;
    link.gamma0_db = p.gamma0_db;
    link.delta_node_db = delta_node_db;
    link.margin_db = p.margin_db;
    link.per_k = p.per_k;
    link.gamma50_db = config.gamma50_for(node.id, node.tech);
    link.per_eps = config.per_eps;
    link.latency_base_ms = p.latency_base_ms;
    link.delta_rtx_ms = p.delta_rtx_ms;
    link.jitter_sigma_ms = p.jitter_sigma_ms;
    link.r_max = config.r_max;
    link.ewma_beta = config.ewma_beta;
    link.burst_p0 = config.burst.p0;
    link.burst_c_slope = config.burst.c_slope;
    link.burst_scale_ms = config.burst.scale_factor * p.latency_base_ms;
    link.burst_decay = config.burst.decay;
    return link;
}

double quantize_db(double u, double q) noexcept
{
    // std::round breaks ties away from zero.
    return q * std::round(u / q);
}

double measure_csi(double envelope, const MeasurementParams& params, double z) noexcept
{
    const double h_db = 20.0 * std::log10(std::max(envelope, params.eps_min));
    const double noise = std::clamp(params.sigma_db * z, -params.clip_db, params.clip_db);
    const double measured_db = quantize_db(h_db + noise, params.quant_db);
    return std::max(std::pow(10.0, measured_db / 20.0), params.eps0);
}

double measure_csi(double envelope, const MeasurementParams& params, RandomStream& stream) noexcept
{
    return measure_csi(envelope, params, stream.normal());
}

double compute_snr(double c, double shadow_db, double interf_db, const LinkParams& link) noexcept
{
    return link.gamma0_db + link.delta_node_db + 20.0 * std::log10(c) + link.margin_db + shadow_db - interf_db;
}

double compute_per(double snr_db, const LinkParams& link) noexcept
{
    const double per = 1.0 / (1.0 + std::exp(link.per_k * (snr_db - link.gamma50_db)));
    return std::clamp(per, link.per_eps, 1.0 - link.per_eps);
}

double retx_proxy(double per, double r_max, double per_eps) noexcept
{
    const double p = std::min(per, 1.0 - per_eps);
    return std::min(r_max, p / (1.0 - p));
}

double latency_deterministic(double per, const LinkParams& link) noexcept
{
    return link.latency_base_ms + link.delta_rtx_ms * retx_proxy(per, link.r_max, link.per_eps);
}

double LatencyModel::step(double per, RandomStream& stream) noexcept
{
    const double jitter = link_.jitter_sigma_ms * stream.normal();
    const double u = stream.uniform();
    const double magnitude = stream.exponential(link_.burst_scale_ms);
    double shock = 0.0;
    if (link_.burst_enabled && u < std::min(1.0, link_.burst_p0 + link_.burst_c_slope * per)) {
        shock = magnitude;
    }
    burst_ = link_.burst_decay * burst_ + shock;
    const double latency = latency_deterministic(per, link_) + jitter + burst_;
    return std::max(latency, 0.1 * link_.latency_base_ms);
}

std::vector<double> ewma_latency(std::span<const double> latency, double beta)
{
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw std::invalid_argument("EWMA beta must lie in [0, 1)");
    }
    std::vector<double> out(latency.size());
    for (std::size_t t = 0; t < latency.size(); ++t) {
        out[t] = t == 0 ? latency[0] : beta * out[t - 1] + (1.0 - beta) * latency[t];
    }
    return out;
}

LinkObservables derive_observables(std::span<const Complex> h, std::span<const double> shadow_db,
                                   std::span<const double> interf_db, const MeasurementParams& meas,
                                   const LinkParams& link, RandomStream& measurement, RandomStream& latency)
{
    if (shadow_db.size() != h.size() || interf_db.size() != h.size()) {
        throw std::invalid_argument("derive_observables: latent length mismatch");
    }
    const std::size_t n = h.size();
    LinkObservables obs;
    obs.c.resize(n);
    obs.snr_db.resize(n);
    obs.per.resize(n);
    obs.latency_ms.resize(n);
    LatencyModel model(link);
    for (std::size_t t = 0; t < n; ++t) {
        obs.c[t] = measure_csi(std::abs(h[t]), meas, measurement);
        obs.snr_db[t] = compute_snr(obs.c[t], shadow_db[t], interf_db[t], link);
        obs.per[t] = compute_per(obs.snr_db[t], link);
        obs.latency_ms[t] = model.step(obs.per[t], latency);
    }
    obs.latency_ewma_ms = ewma_latency(obs.latency_ms, link.ewma_beta);
    return obs;
}

} // namespace sgrecon
