// SPDX-License-Identifier: Apache-2.0
//
// Platform-independent pseudo-random streams.
//
// Every random draw in the generator comes from a RandomStream, which wraps a
// xoshiro256** engine seeded through SplitMix64. Distributions are implemented
// here rather than taken from <random> because the standard distributions are
// implementation-defined and would make exports differ across standard
// libraries.

#pragma once

#include <complex>
#include <cstdint>

namespace sgrecon {

/// SplitMix64 finalizer. Bijective on 64-bit integers.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Latent processes that own an independent sub-stream.
enum class Process : std::uint32_t {
    Traffic = 1,
    TrafficPhase,
    Fading,
    ShadowLocal,
    ShadowLayer,
    ShadowGlobal,
    Interference,
    Measurement,
    Latency,
    NodeOffset,
    AttackPlacement,
    AttackEffects,
    Baseline,
};

/// Key for a sub-stream: (seed, owner, process). `owner` is a node id or
/// one of the sentinel owners below for shared streams.
std::uint64_t stream_key(std::uint64_t seed, std::uint64_t owner, Process process) noexcept;

inline constexpr std::uint64_t kSharedOwner = 0xFFFF'0000ULL;

class RandomStream {
public:
    explicit RandomStream(std::uint64_t key) noexcept;
    RandomStream(std::uint64_t seed, std::uint64_t owner, Process process) noexcept
        : RandomStream(stream_key(seed, owner, process)) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform() noexcept;
    /// Uniform integer on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
    double normal() noexcept;
    double normal(double mean, double sd) noexcept { return mean + sd * normal(); }
    /// Circularly-symmetric complex Gaussian with unit total variance.
    std::complex<double> complex_normal() noexcept;
    double exponential(double scale) noexcept;
    std::int64_t poisson(double lambda) noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }
    /// Symmetric alpha-stable variate, unit scale (Chambers-Mallows-Stuck).
    double symmetric_stable(double alpha) noexcept;

private:
    std::uint64_t s_[4];
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

} // namespace sgrecon
