#pragma once

// Deterministic piecewise-constant ellipse phantom. Stands in for clinical
// images in benchmarks: crisp edges, large flat regions, intensities in
// [0,1]. Membership is a pure point-in-ellipse test, so the image is exactly
// piecewise constant (no anti-aliasing).

#include <array>
#include <cmath>
#include <numbers>

#include "csrecon/grid.hpp"

namespace csrecon {

namespace detail {

struct PhantomEllipse {
  double cx, cy;        // center in [-1,1]^2
  double a, b;          // semi-axes
  double angle_deg;     // rotation
  double value;         // additive intensity
};

inline constexpr std::array<PhantomEllipse, 7> kPhantomEllipses = {{
    {0.00, 0.00, 0.88, 0.94, 0.0, 0.75},    // outer shell
    {0.00, 0.00, 0.80, 0.86, 0.0, -0.25},   // interior drop to 0.5
    {-0.26, -0.18, 0.26, 0.36, 20.0, 0.30}, // left lobe
    {0.28, -0.12, 0.17, 0.30, -16.0, 0.22}, // right lobe
    {0.02, 0.40, 0.32, 0.16, 0.0, -0.35},   // dark lower bar
    {0.04, -0.46, 0.11, 0.08, 0.0, 0.25},   // small bright spot
    {-0.08, 0.12, 0.05, 0.05, 0.0, -0.20},  // small dark spot
}};

}  // namespace detail

/// Piecewise-constant test image built from a fixed ellipse set; pixel
/// centers map to [-1,1]^2 and values are clamped to [0,1].
inline Image ellipse_phantom(int width, int height) {
  Image img(width, height);
  for (int r = 0; r < height; ++r) {
    for (int c = 0; c < width; ++c) {
      const double u = (2.0 * c + 1.0) / width - 1.0;
      const double v = (2.0 * r + 1.0) / height - 1.0;
      double val = 0.0;
      for (const auto& e : detail::kPhantomEllipses) {
        const double th = e.angle_deg * std::numbers::pi / 180.0;
        const double du = u - e.cx;
        const double dv = v - e.cy;
        const double x = du * std::cos(th) + dv * std::sin(th);
        const double y = -du * std::sin(th) + dv * std::cos(th);
        if ((x * x) / (e.a * e.a) + (y * y) / (e.b * e.b) <= 1.0) val += e.value;
      }
      img.at(r, c) = val < 0.0 ? 0.0 : (val > 1.0 ? 1.0 : val);
    }
  }
  return img;
}

}  // namespace csrecon
