#pragma once

// Reconstruction quality metrics: relative error (percent) and PSNR (dB)
// against a reference image. Peak is fixed at 1.0 for normalized
// intensities; identical images report +infinity dB, never a cap.

#include <cmath>
#include <limits>
#include <stdexcept>

#include "csrecon/grid.hpp"

namespace csrecon {

/// 100 * ||test - reference|| / ||reference||. The reference must be nonzero.
inline double relative_error(const Image& reference, const Image& test) {
  if (!reference.same_shape(test)) {
    throw std::invalid_argument("relative_error: dimension mismatch");
  }
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = test[i] - reference[i];
    diff += d * d;
    ref += reference[i] * reference[i];
  }
  if (ref == 0.0) {
    throw std::invalid_argument("relative_error: reference image is all-zero");
  }
  return 100.0 * std::sqrt(diff) / std::sqrt(ref);
}

/// 20*log10(peak / RMSE); +infinity when the images are identical.
inline double psnr(const Image& reference, const Image& test, double peak = 1.0) {
  if (!reference.same_shape(test)) {
    throw std::invalid_argument("psnr: dimension mismatch");
  }
  if (!(peak > 0.0)) {
    throw std::invalid_argument("psnr: peak must be positive");
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = test[i] - reference[i];
    diff += d * d;
  }
  if (diff == 0.0) return std::numeric_limits<double>::infinity();
  const double rmse = std::sqrt(diff / static_cast<double>(reference.size()));
  return 20.0 * std::log10(peak / rmse);
}

struct QualityReport {
  double relative_error_pct = 0.0;
  double psnr_db = std::numeric_limits<double>::infinity();
  double peak = 1.0;
};

inline QualityReport quality(const Image& reference, const Image& test,
                             double peak = 1.0) {
  return {relative_error(reference, test), psnr(reference, test, peak), peak};
}

}  // namespace csrecon
