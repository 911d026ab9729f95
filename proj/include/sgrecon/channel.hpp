// SPDX-License-Identifier: Apache-2.0
//
// Split-local propagation latents: complex Gauss-Markov fading, composite
// shadowing in dB and technology-conditioned interference in dB.

#pragma once

#include "sgrecon/config.hpp"
#include "sgrecon/rng.hpp"
#include "sgrecon/topology.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace sgrecon {

using Complex = std::complex<double>;

/// Fading trace plus the unit innovations that drove it. The innovations are
/// kept so attacked updates can be re-derived from the same draws.
struct FadingSequence {
    double rho = 0.0;
    std::vector<Complex> h;
    std::vector<Complex> innovation; ///< innovation[0] is the stationary initial draw
};

/// h(t) = rho h(t-1) + sqrt(1 - rho^2) w(t), h(0) ~ CN(0, 1).
/// Throws std::invalid_argument unless 0 <= rho < 1.
FadingSequence gen_fading_sequence(double rho, std::int64_t length, RandomStream& stream);

struct PhaseDescriptors {
    std::vector<double> phase_sin;
    std::vector<double> phase_cos;
    std::vector<double> dphase; ///< unwrapped first difference, dphase[0] = 0
};

PhaseDescriptors phase_descriptors(std::span<const Complex> h);

/// Per-epoch AR coefficient exp(-v dt / d_cor).
double shadow_ar_coefficient(double speed_mps, double dt_seconds, double dcor_m) noexcept;

/// Stationary unit-variance AR(1) driven by the given standard-normal innovations.
std::vector<double> ar1_from_innovations(double rho, std::span<const double> innovations);
std::vector<double> gen_ar1(double rho, std::int64_t length, RandomStream& stream);

/// Shadowing components shared across nodes of one split: a global process
/// (shared innovations, filtered per tier so each tier keeps its own AR
/// coefficient) and one layer process per tier.
class SharedShadowing {
public:
    SharedShadowing(const GeneratorConfig& config, std::uint64_t split_seed, std::int64_t length);

    double rho(Tier tier) const noexcept { return rho_[index(tier)]; }
    std::span<const double> global(Tier tier) const noexcept { return global_[index(tier)]; }
    std::span<const double> layer(Tier tier) const noexcept { return layer_[index(tier)]; }
    std::int64_t length() const noexcept { return length_; }

private:
    std::int64_t length_ = 0;
    std::array<double, kTierCount> rho_{};
    std::array<std::vector<double>, kTierCount> global_;
    std::array<std::vector<double>, kTierCount> layer_;
};

/// s = sigma (c_g G + c_l L_tier + c_n N_i) in dB; all-zero for fiber unless
/// the fiber-shadow override is set.
std::vector<double> gen_shadowing(const NodeSpec& node, const GeneratorConfig& config,
                                  const SharedShadowing& shared, RandomStream& local_stream);

struct InterferenceTrace {
    std::vector<double> interf_db;
    std::vector<double> impulse_db; ///< impulsive component only (zero for non-PLC)
};

InterferenceTrace gen_interference(const NodeSpec& node, const GeneratorConfig& config, std::int64_t length,
                                   RandomStream& stream);

} // namespace sgrecon
