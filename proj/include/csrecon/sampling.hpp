#pragma once

// k-space undersampling mask generation. Radial masks are unions of digital
// lines through the centered origin, index-shifted so DC lands at bin (0,0);
// variable-density masks draw each bin independently with a power-law radial
// profile. Every generated mask selects the DC bin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "csrecon/grid.hpp"

namespace csrecon {

enum class MaskKind { radial, variable_density, full };

struct MaskSpec {
  MaskKind kind = MaskKind::radial;
  int width = 0;
  int height = 0;
  int num_lines = 0;             // radial only; 0 means target the fraction
  double target_fraction = 0.25; // in (0,1]
  double tol = 0.01;             // fraction targeting tolerance
  double decay = 2.0;            // variable-density only
  std::uint64_t seed = 0;        // variable-density only
};

inline double mask_fraction(const SamplingMask& mask) {
  return static_cast<double>(mask.count()) / static_cast<double>(mask.size());
}

namespace detail {

// Nearest integer with ties broken toward the lower index.
inline int round_half_down(double v) {
  return static_cast<int>(std::ceil(v - 0.5));
}

// Signed frequency offset of a DC-at-(0,0) index, given the centered origin.
inline int signed_offset(int idx, int center, int extent) {
  return (idx + center) % extent - center;
}

}  // namespace detail

/// Union of num_lines digital lines through the centered k-space origin at
/// angles k*pi/num_lines, shifted so DC maps to bin (0,0). Deterministic.
inline SamplingMask radial_mask(int width, int height, int num_lines) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("radial_mask: dimensions must be positive");
  }
  if (num_lines < 1) {
    throw std::invalid_argument("radial_mask: num_lines must be >= 1");
  }
  const int cx = width / 2;
  const int cy = height / 2;
  std::vector<std::uint8_t> centered(
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0);
  auto mark = [&](int x, int y) {
    if (x >= 0 && x < width && y >= 0 && y < height)
      centered[static_cast<std::size_t>(y) * width + x] = 1;
  };
  for (int k = 0; k < num_lines; ++k) {
    const double theta =
        static_cast<double>(k) * std::numbers::pi / static_cast<double>(num_lines);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    if (std::abs(c) >= std::abs(s)) {
      const double slope = s / c;  // |slope| <= 1, walk the x axis
      for (int x = 0; x < width; ++x) {
        const double v = cy + (x - cx) * slope;
        mark(x, detail::round_half_down(v));
      }
    } else {
      const double slope = c / s;  // walk the y axis
      for (int y = 0; y < height; ++y) {
        const double v = cx + (y - cy) * slope;
        mark(detail::round_half_down(v), y);
      }
    }
  }
  mark(cx, cy);  // DC is always selected

  // Shift so the centered origin becomes bin (0,0).
  std::vector<std::uint8_t> shifted(centered.size(), 0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int r = ((y - cy) % height + height) % height;
      const int col = ((x - cx) % width + width) % width;
      shifted[static_cast<std::size_t>(r) * width + col] =
          centered[static_cast<std::size_t>(y) * width + x];
    }
  }
  return SamplingMask(width, height, std::move(shifted));
}

struct RadialFractionResult {
  SamplingMask mask;
  int num_lines;            // 0 when the full-mask saturation path was taken
  double achieved_fraction;
};

/// Smallest line count whose fraction reaches target_fraction - tol.
/// target 1.0 saturates to the full mask; targets below the single-line
/// fraction are unreachable and rejected.
inline RadialFractionResult radial_mask_for_fraction(int width, int height,
                                                     double target_fraction,
                                                     double tol) {
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw std::invalid_argument("radial_mask_for_fraction: target_fraction must be in (0,1]");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("radial_mask_for_fraction: tol must be positive");
  }
  if (target_fraction == 1.0) {
    SamplingMask full = SamplingMask::full(width, height);
    return {std::move(full), 0, 1.0};
  }
  const double single = mask_fraction(radial_mask(width, height, 1));
  if (target_fraction < single) {
    throw std::invalid_argument(
        "radial_mask_for_fraction: target fraction " +
        std::to_string(target_fraction) +
        " is below the minimum achievable radial fraction " +
        std::to_string(single) + " (one line) for " + std::to_string(width) +
        "x" + std::to_string(height));
  }
  const double goal = target_fraction - tol;
  auto frac = [&](int n) { return mask_fraction(radial_mask(width, height, n)); };

  int hi = 1;
  const int cap = 64 * (width + height);
  while (frac(hi) < goal) {
    if (hi >= cap) {
      throw std::runtime_error(
          "radial_mask_for_fraction: could not reach fraction " +
          std::to_string(target_fraction) + " within " + std::to_string(cap) +
          " lines (achieved " + std::to_string(frac(hi)) + ")");
    }
    hi = std::min(hi * 2, cap);
  }
  int lo = hi > 1 ? hi / 2 : 1;
  while (lo < hi) {  // smallest n with frac(n) >= goal
    const int mid = lo + (hi - lo) / 2;
    if (frac(mid) >= goal)
      hi = mid;
    else
      lo = mid + 1;
  }
  SamplingMask mask = radial_mask(width, height, lo);
  const double achieved = mask_fraction(mask);
  return {std::move(mask), lo, achieved};
}

/// Independent Bernoulli draws with probability proportional to
/// (1+r)^(-decay), r the centered radial distance normalized to [0,1],
/// rescaled (with clipping at 1) until the expected fraction matches
/// target_fraction to 1e-6. Deterministic given the seed.
inline SamplingMask variable_density_mask(int width, int height,
                                          double target_fraction, double decay,
                                          std::uint64_t seed) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("variable_density_mask: dimensions must be positive");
  }
  if (!(target_fraction > 0.0 && target_fraction <= 1.0)) {
    throw std::invalid_argument("variable_density_mask: target_fraction must be in (0,1]");
  }
  if (!(decay > 0.0)) {
    throw std::invalid_argument("variable_density_mask: decay must be positive");
  }
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (target_fraction == 1.0) {
    return SamplingMask::full(width, height);
  }

  const int cx = width / 2;
  const int cy = height / 2;
  const double r_max = std::hypot(std::max(cx, width - 1 - cx),
                                  std::max(cy, height - 1 - cy));
  std::vector<double> profile(n);
  for (int row = 0; row < height; ++row) {
    for (int col = 0; col < width; ++col) {
      const double dr = detail::signed_offset(row, cy, height);
      const double dc = detail::signed_offset(col, cx, width);
      const double r = r_max > 0.0 ? std::hypot(dr, dc) / r_max : 0.0;
      profile[static_cast<std::size_t>(row) * width + col] =
          std::pow(1.0 + r, -decay);
    }
  }
  auto expected = [&](double scale) {
    double sum = 0.0;
    for (double p : profile) sum += std::min(scale * p, 1.0);
    return sum / static_cast<double>(n);
  };
  double hi = 1.0;
  while (expected(hi) < target_fraction) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double e = expected(mid);
    if (std::abs(e - target_fraction) <= 1e-6) {
      lo = hi = mid;
      break;
    }
    (e < target_fraction ? lo : hi) = mid;
  }
  const double scale = 0.5 * (lo + hi);

  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> selected(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u =
        static_cast<double>(rng() >> 11) * 0x1.0p-53;  // uniform in [0,1)
    selected[i] = u < std::min(scale * profile[i], 1.0) ? 1 : 0;
  }
  selected[0] = 1;  // DC forced
  return SamplingMask(width, height, std::move(selected));
}

struct MaskBuildResult {
  SamplingMask mask;
  double achieved_fraction;
  int num_lines;  // radial only; 0 otherwise
};

/// Build a mask from a declarative spec (the CLI/bench entry point).
inline MaskBuildResult build_mask(const MaskSpec& spec) {
  switch (spec.kind) {
    case MaskKind::full: {
      SamplingMask m = SamplingMask::full(spec.width, spec.height);
      return {std::move(m), 1.0, 0};
    }
    case MaskKind::radial: {
      if (spec.num_lines > 0) {
        SamplingMask m = radial_mask(spec.width, spec.height, spec.num_lines);
        const double f = mask_fraction(m);
        return {std::move(m), f, spec.num_lines};
      }
      RadialFractionResult r = radial_mask_for_fraction(
          spec.width, spec.height, spec.target_fraction, spec.tol);
      return {std::move(r.mask), r.achieved_fraction, r.num_lines};
    }
    case MaskKind::variable_density: {
      SamplingMask m = variable_density_mask(
          spec.width, spec.height, spec.target_fraction, spec.decay, spec.seed);
      const double f = mask_fraction(m);
      return {std::move(m), f, 0};
    }
  }
  throw std::invalid_argument("build_mask: unknown mask kind");
}

}  // namespace csrecon
