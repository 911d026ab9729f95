// SPDX-License-Identifier: Apache-2.0

#include "sgrecon/rng.hpp"

#include <cmath>
#include <numbers>

namespace sgrecon {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

} // namespace

std::uint64_t stream_key(std::uint64_t seed, std::uint64_t owner, Process process) noexcept
{
    const std::uint64_t tag = mix64((owner << 8) ^ static_cast<std::uint64_t>(process));
    return mix64(seed ^ rotl(tag, 17)) ^ tag;
}

RandomStream::RandomStream(std::uint64_t key) noexcept
{
    std::uint64_t z = key;
    for (auto& word : s_) {
        z += 0x9E3779B97F4A7C15ULL;
        word = mix64(z);
    }
}

std::uint64_t RandomStream::next_u64() noexcept
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RandomStream::uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::int64_t RandomStream::uniform_int(std::int64_t lo, std::int64_t hi) noexcept
{
    if (hi <= lo) {
        return lo;
    }
    const auto range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) {
        return static_cast<std::int64_t>(next_u64());
    }
    // Lemire's multiply-shift with rejection.
    unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * range;
    auto low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(next_u64()) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return lo + static_cast<std::int64_t>(m >> 64);
}

double RandomStream::normal() noexcept
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

std::complex<double> RandomStream::complex_normal() noexcept
{
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

double RandomStream::exponential(double scale) noexcept
{
    return -scale * std::log(1.0 - uniform());
}

std::int64_t RandomStream::poisson(double lambda) noexcept
{
    if (lambda <= 0.0) {
        return 0;
    }
    if (lambda < 30.0) {
        const double limit = std::exp(-lambda);
        std::int64_t k = 0;
        double product = uniform();
        while (product > limit) {
            ++k;
            product *= uniform();
        }
        return k;
    }
    // Large rates do not occur in the default traffic models; a rounded
    // normal approximation keeps the draw count fixed.
    const double draw = std::round(lambda + std::sqrt(lambda) * normal());
    return draw < 0.0 ? 0 : static_cast<std::int64_t>(draw);
}

double RandomStream::symmetric_stable(double alpha) noexcept
{
    const double v = std::numbers::pi * (uniform() - 0.5);
    const double w = -std::log(1.0 - uniform());
    if (std::abs(alpha - 1.0) < 1e-12) {
        return std::tan(v);
    }
    const double a = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha);
    const double b = std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
    return a * b;
}

} // namespace sgrecon
