#pragma once

// Seedable, splittable random streams. Stream (seed, index) is a pure
// function of its two arguments, so parallel maps over run indices stay
// bitwise reproducible. Distributions are implemented here rather than
// taken from <random>, whose distribution algorithms are
// implementation-defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "pentaks/spectral.hpp"

namespace pentaks {

/// SplitMix64 (Steele, Lea, Flood 2014).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) noexcept : state_(state) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double strictly inside (0, 1): (k + 1/2) / 2^53.
    double uniform() noexcept { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal deviate by Box-Muller (one of the pair is discarded).
    double normal() noexcept {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t state_;
};

/// Independent substream for run `index` under `seed`.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) noexcept {
    SplitMix64 mix(seed);
    const std::uint64_t base = mix.next();
    SplitMix64 idx(index ^ 0xD1B54A32D192ED03ULL);
    return SplitMix64(base ^ idx.next());
}

/// Haar-random pure state: normalized standard complex Gaussian amplitudes.
inline StateVector haar_state(int dim, SplitMix64& rng) {
    require_dim(dim);
    std::array<Complex, max_dim> a{};
    for (int i = 0; i < dim; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        a[static_cast<std::size_t>(i)] = {re, im};
    }
    return StateVector::normalized(std::span<const Complex>(a.data(), static_cast<std::size_t>(dim)));
}

} // namespace pentaks
