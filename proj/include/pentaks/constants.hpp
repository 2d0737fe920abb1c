#pragma once

#include <numbers>

namespace pentaks {

/// Golden mean, (1 + sqrt 5) / 2.
inline constexpr double golden_ratio = std::numbers::phi;

/// 1 / golden_ratio^5, the overlap-sum deficit of the regular pentagram and
/// the optimal Hardy probability.
inline constexpr double golden_inverse_fifth =
    1.0 / (golden_ratio * golden_ratio * golden_ratio * golden_ratio * golden_ratio);

/// Classical (non-contextual) bound on the pentagram operator expectation.
inline constexpr double classical_bound = 2.0;

} // namespace pentaks
