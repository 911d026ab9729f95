// SPDX-License-Identifier: Apache-2.0
//
// Deterministic latent-to-observable chain: measured amplitude C, SNR, PER,
// latency L and smoothed latency L_ewma.

#pragma once

#include "sgrecon/channel.hpp"
#include "sgrecon/config.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/topology.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sgrecon {

struct MeasurementParams {
    double sigma_db = 1.0;
    double clip_db = 3.0;
    double quant_db = 0.5;
    double eps_min = 1e-4;
    double eps0 = 1e-5;
};

struct LinkParams {
    double gamma0_db = 0.0;
    double delta_node_db = 0.0;
    double margin_db = 0.0;
    double per_k = 1.0;
    double gamma50_db = 0.0;
    double per_eps = 1e-6;
    double latency_base_ms = 1.0;
    double delta_rtx_ms = 0.8;
    double jitter_sigma_ms = 0.05;
    double r_max = 10.0;
    double ewma_beta = 0.7;
    double burst_p0 = 0.005;
    double burst_c_slope = 0.1;
    double burst_scale_ms = 2.0;
    double burst_decay = 0.5;
    bool burst_enabled = true;
};

MeasurementParams measurement_params_for(const GeneratorConfig& config, Tech tech);
LinkParams link_params_for(const GeneratorConfig& config, const NodeSpec& node, double delta_node_db);

/// q * round(u / q) with ties rounded away from zero.
double quantize_db(double u, double q) noexcept;

/// Measured amplitude for a given envelope and a raw standard-normal draw z
/// (noise = clip(sigma * z)).
double measure_csi(double envelope, const MeasurementParams& params, double z) noexcept;
/// Same, drawing z from the stream (exactly one normal per call).
double measure_csi(double envelope, const MeasurementParams& params, RandomStream& stream) noexcept;

double compute_snr(double c, double shadow_db, double interf_db, const LinkParams& link) noexcept;
double compute_per(double snr_db, const LinkParams& link) noexcept;
double retx_proxy(double per, double r_max, double per_eps = 1e-6) noexcept;

/// Deterministic latency part L0 + delta_rtx * reTX(per).
double latency_deterministic(double per, const LinkParams& link) noexcept;

/// Latency recurrence. Each step consumes exactly three draws (jitter normal,
/// occurrence uniform, magnitude exponential) whatever the PER, so paired runs
/// stay aligned.
class LatencyModel {
public:
    explicit LatencyModel(const LinkParams& link) : link_(link) {}
    double step(double per, RandomStream& stream) noexcept;
    double burst_state() const noexcept { return burst_; }

private:
    LinkParams link_;
    double burst_ = 0.0;
};

std::vector<double> ewma_latency(std::span<const double> latency, double beta);

struct LinkObservables {
    std::vector<double> c;
    std::vector<double> snr_db;
    std::vector<double> per;
    std::vector<double> latency_ms;
    std::vector<double> latency_ewma_ms;
};

/// Runs the whole chain over a latent trace. `measurement` and `latency`
/// are consumed once per epoch.
LinkObservables derive_observables(std::span<const Complex> h, std::span<const double> shadow_db,
                                   std::span<const double> interf_db, const MeasurementParams& meas,
                                   const LinkParams& link, RandomStream& measurement, RandomStream& latency);

} // namespace sgrecon
