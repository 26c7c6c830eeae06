#pragma once

// Core 2D grid value types shared by every module: real images, complex
// spectra, sampling masks and measured k-space data, plus the elementary
// norms and inner products defined on them.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace csrecon {

/// Dense row-major width x height grid of T. Index (0,0) is the top-left
/// cell; for spectra it is the DC bin.
template <typename T>
class Grid {
public:
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        values_(check_dims(width, height), fill) {}

  static Grid from_values(int width, int height, std::vector<T> values) {
    Grid g(width, height);
    if (values.size() != g.size()) {
      throw std::invalid_argument("Grid: values length " +
                                  std::to_string(values.size()) +
                                  " does not match " + std::to_string(width) +
                                  "x" + std::to_string(height));
    }
    g.values_ = std::move(values);
    return g;
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  T& at(int row, int col) { return values_[index(row, col)]; }
  const T& at(int row, int col) const { return values_[index(row, col)]; }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }
  template <typename U>
  bool same_shape(const Grid<U>& other) const {
    return width_ == other.width() && height_ == other.height();
  }

  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.values_ == b.values_;
  }

private:
  static std::size_t check_dims(int width, int height) {
    if (width <= 0 || height <= 0) {
      throw std::invalid_argument("Grid: dimensions must be positive, got " +
                                  std::to_string(width) + "x" +
                                  std::to_string(height));
    }
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  int width_;
  int height_;
  std::vector<T> values_;
};

/// Real-valued pixel grid; intensities nominally in [0,1].
using Image = Grid<double>;

/// Complex-valued k-space grid; bin (0,0) is the zero-frequency (DC) bin.
using SpectrumGrid = Grid<std::complex<double>>;

inline bool all_finite(const Image& g) {
  for (double v : g)
    if (!std::isfinite(v)) return false;
  return true;
}

inline bool all_finite(const SpectrumGrid& g) {
  for (const auto& v : g)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

/// Boolean grid selecting acquired k-space bins; the number of selected
/// bins is cached at construction and kept consistent by immutability.
class SamplingMask {
public:
  SamplingMask(int width, int height, std::vector<std::uint8_t> selected)
      : grid_(Grid<std::uint8_t>::from_values(width, height,
                                              std::move(selected))),
        count_(0) {
    for (auto& v : grid_.values()) {
      v = v ? 1 : 0;
      count_ += v;
    }
    if (count_ == 0) {
      throw std::invalid_argument("SamplingMask: at least one bin must be selected");
    }
  }

  static SamplingMask full(int width, int height) {
    std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    return SamplingMask(width, height, std::vector<std::uint8_t>(n, 1));
  }

  int width() const { return grid_.width(); }
  int height() const { return grid_.height(); }
  std::size_t size() const { return grid_.size(); }
  std::size_t count() const { return count_; }

  bool selected(int row, int col) const { return grid_.at(row, col) != 0; }
  bool selected(std::size_t i) const { return grid_[i] != 0; }

  std::span<const std::uint8_t> values() const { return grid_.values(); }

  friend bool operator==(const SamplingMask& a, const SamplingMask& b) {
    return a.grid_ == b.grid_;
  }

private:
  Grid<std::uint8_t> grid_;
  std::size_t count_;
};

/// Sampled k-space data: a full-size spectrum holding measured values at
/// selected bins and exact zeros elsewhere, paired with its mask.
class Measurements {
public:
  Measurements(SamplingMask mask, SpectrumGrid data)
      : mask_(std::move(mask)), data_(std::move(data)) {
    if (mask_.width() != data_.width() || mask_.height() != data_.height()) {
      throw std::invalid_argument("Measurements: mask and data dimensions disagree");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
      if (!mask_.selected(i) && data_[i] != std::complex<double>(0.0, 0.0)) {
        throw std::invalid_argument(
            "Measurements: nonzero value at unsampled bin " + std::to_string(i));
      }
    }
  }

  const SamplingMask& mask() const { return mask_; }
  const SpectrumGrid& data() const { return data_; }
  int width() const { return data_.width(); }
  int height() const { return data_.height(); }

private:
  SamplingMask mask_;
  SpectrumGrid data_;
};

inline double l1_norm(const Image& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

inline double l2_norm(const Image& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double l2_norm(const SpectrumGrid& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

/// Sum of a_i * conj(b_i). Dimensions must agree.
inline std::complex<double> inner_product(const SpectrumGrid& a,
                                          const SpectrumGrid& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  std::complex<double> s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * std::conj(b[i]);
  return s;
}

inline Image clamp01(Image x) {
  for (double& v : x.values()) v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  return x;
}

}  // namespace csrecon
