#pragma once

// Test-only reference implementations, independent of the library's solution
// paths: brute-force grid maximization, bisection inversions and the plain
// arithmetic re-evaluations the unit tests freeze their expectations against.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "covertplan/vec2.hpp"

namespace covertplan::testing {

inline double ratio_at(const Vec2& q, const Vec2& q_b, const Vec2& q_w,
                       double altitude) {
  const double h2 = altitude * altitude;
  return std::sqrt(((q - q_b).norm2() + h2) / ((q - q_w).norm2() + h2));
}

struct GridMax {
  Vec2 point;
  double ratio = 0.0;
};

/// Brute-force maximizer of the slant-distance ratio over a disk: dense grid
/// over the bounding box, a dense boundary scan, then local refinement around
/// the incumbent.
inline GridMax grid_ratio_oracle(const Vec2& center, double radius,
                                 const Vec2& q_b, const Vec2& q_w,
                                 double altitude, int grid = 400) {
  GridMax best{center, ratio_at(center, q_b, q_w, altitude)};
  const auto consider = [&](const Vec2& q) {
    if (distance(q, center) > radius * (1.0 + 1e-12)) return;
    const double r = ratio_at(q, q_b, q_w, altitude);
    if (r > best.ratio) best = {q, r};
  };
  for (int i = 0; i <= grid; ++i)
    for (int j = 0; j <= grid; ++j)
      consider({center.x - radius + 2.0 * radius * i / grid,
                center.y - radius + 2.0 * radius * j / grid});
  const int boundary = 4096;
  for (int i = 0; i < boundary; ++i) {
    const double th = 2.0 * M_PI * i / boundary;
    consider({center.x + radius * std::cos(th), center.y + radius * std::sin(th)});
  }
  // local refinement: shrinking pattern search around the incumbent
  double span = 2.0 * radius / grid;
  for (int round = 0; round < 40; ++round) {
    const GridMax before = best;
    for (int di = -2; di <= 2; ++di)
      for (int dj = -2; dj <= 2; ++dj) {
        Vec2 q{before.point.x + span * di / 2.0, before.point.y + span * dj / 2.0};
        const double d = distance(q, center);
        if (d > radius) q = center + (q - center) * (radius / d);
        consider(q);
      }
    span *= 0.5;
  }
  return best;
}

/// Invert a monotone increasing function by bisection.
inline double bisect_increasing(const std::function<double(double)>& f,
                                double target, double lo, double hi,
                                double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Central finite difference.
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace covertplan::testing
