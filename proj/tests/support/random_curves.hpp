#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "knotdist/geometry.hpp"

namespace knotdist::test_support {

/// Seeded random simple polygon with `n` vertices sampled uniformly in the
/// parameter of a low-order random Fourier curve (the full period for closed
/// curves, 80% of it for open ones). Draws are repeated until every pair of
/// non-adjacent segments is at least `clearance` times the length apart.
inline PolyCurve random_fourier_curve(std::uint64_t seed, std::size_t n, bool closed,
                                      double clearance = 1e-3, int harmonics = 3) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  const double span = closed ? 2.0 * std::numbers::pi : 1.6 * std::numbers::pi;
  const double denom = closed ? static_cast<double>(n) : static_cast<double>(n - 1);
  while (true) {
    std::vector<double> coef(static_cast<std::size_t>(6 * harmonics));
    for (std::size_t k = 0; k < coef.size(); ++k) coef[k] = g(rng) / (1.0 + static_cast<double>(k / 6));
    std::vector<Vec3> v;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = span * static_cast<double>(i) / denom;
      Vec3 p{0, 0, 0};
      for (int h = 0; h < harmonics; ++h) {
        const double c = std::cos((h + 1) * t), s = std::sin((h + 1) * t);
        const double* a = &coef[static_cast<std::size_t>(6 * h)];
        p = p + Vec3{a[0] * c + a[1] * s, a[2] * c + a[3] * s, a[4] * c + a[5] * s};
      }
      v.push_back(p);
    }
    try {
      PolyCurve curve(std::move(v), closed);
      if (is_simple(curve, clearance * curve.total_length())) return curve;
    } catch (const std::exception&) {
      // degenerate draw; try again
    }
  }
}

inline PolyCurve random_closed_curve(std::uint64_t seed, std::size_t n) {
  return random_fourier_curve(seed, n, true);
}

/// Seeded random simple open polygon: a self-avoiding Gaussian random walk.
inline PolyCurve random_open_curve(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    std::vector<Vec3> v{{0, 0, 0}};
    for (std::size_t i = 1; i < n; ++i) v.push_back(v.back() + Vec3{g(rng), g(rng), g(rng)});
    try {
      PolyCurve curve(std::move(v), false);
      if (is_simple(curve, 1e-3 * curve.total_length())) return curve;
    } catch (const std::exception&) {
    }
  }
}

}  // namespace knotdist::test_support
