#pragma once

#include "invevo/grid.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace invevo::testing {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Random trigonometric polynomial with integer frequencies up to max_freq
/// per axis, unit-scale coefficients.
inline Field band_limited(const Grid& g, int max_freq, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Field f(g);
    for (int kx = 0; kx <= max_freq; ++kx) {
        for (int ky = 0; ky <= (g.dim() == 2 ? max_freq : 0); ++ky) {
            const double a = nd(rng), b = nd(rng), px = nd(rng), py = nd(rng);
            if (g.dim() == 1) {
                f += Field::sample(g, [&](double x) {
                    return a * std::cos(kTwoPi * kx * x + px) + b * std::sin(kTwoPi * kx * x);
                });
            } else {
                f += Field::sample(g, [&](double x, double y) {
                    return a * std::cos(kTwoPi * (kx * x + ky * y) + px) + b * std::sin(kTwoPi * (kx * x - ky * y) + py);
                });
            }
        }
    }
    return f;
}

inline Field zero_mean(Field f) {
    const double m = mean(f);
    for (double& v : f.data()) v -= m;
    return f;
}

/// Rescaled to unit L∞.
inline Field unit(Field f) {
    f *= 1.0 / max_abs(f);
    return f;
}

} // namespace invevo::testing
