#pragma once

// Unitary 2D DFT and the partial-Fourier measurement operator: forward maps
// an image to its masked spectrum, adjoint maps measurements back to image
// space. Both directions carry the 1/sqrt(width*height) scale, which makes
// the composition adjoint(apply(.)) an orthogonal projector in image space.

#include <complex>
#include <stdexcept>
#include <utility>

#include "csrecon/fft.hpp"
#include "csrecon/grid.hpp"

namespace csrecon {

/// Per-run FFT tally. Each 2D transform (forward or inverse) counts as one.
struct FftCounter {
  long long count = 0;
};

namespace detail {

// Transform rows then columns in place with the given per-length plans,
// then apply the unitary scale.
inline void dft2_inplace(SpectrumGrid& g, int sign) {
  const int w = g.width();
  const int h = g.height();
  const Dft1d row_plan(static_cast<std::size_t>(w), sign);
  const Dft1d col_plan(static_cast<std::size_t>(h), sign);

  for (int r = 0; r < h; ++r) {
    row_plan.run(g.values().subspan(g.index(r, 0), static_cast<std::size_t>(w)));
  }
  std::vector<std::complex<double>> col(static_cast<std::size_t>(h));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) col[static_cast<std::size_t>(r)] = g.at(r, c);
    col_plan.run(col);
    for (int r = 0; r < h; ++r) g.at(r, c) = col[static_cast<std::size_t>(r)];
  }
  const double scale =
      1.0 / std::sqrt(static_cast<double>(w) * static_cast<double>(h));
  for (auto& v : g.values()) v *= scale;
}

}  // namespace detail

/// Unitary 2D DFT of a complex grid. Parseval holds: ||F x|| = ||x||.
inline SpectrumGrid dft2_forward(const SpectrumGrid& x, FftCounter* fft = nullptr) {
  SpectrumGrid out = x;
  detail::dft2_inplace(out, -1);
  if (fft) ++fft->count;
  return out;
}

inline SpectrumGrid dft2_forward(const Image& x, FftCounter* fft = nullptr) {
  SpectrumGrid out(x.width(), x.height());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = {x[i], 0.0};
  detail::dft2_inplace(out, -1);
  if (fft) ++fft->count;
  return out;
}

/// Unitary inverse 2D DFT; exact inverse of dft2_forward up to round-off.
inline SpectrumGrid dft2_inverse(const SpectrumGrid& s, FftCounter* fft = nullptr) {
  SpectrumGrid out = s;
  detail::dft2_inplace(out, +1);
  if (fft) ++fft->count;
  return out;
}

/// Masked Fourier sampling operator K = M o F with unitary normalization;
/// K^H K has eigenvalues in {0,1} (1 exactly on the selected bins).
class PartialFourierOp {
public:
  explicit PartialFourierOp(SamplingMask mask) : mask_(std::move(mask)) {}

  const SamplingMask& mask() const { return mask_; }

  /// y = mask o F x. Zeros at unselected bins. Counts as one FFT.
  Measurements apply(const Image& x, FftCounter* fft = nullptr) const {
    if (x.width() != mask_.width() || x.height() != mask_.height()) {
      throw std::invalid_argument("PartialFourierOp::apply: image dimensions do not match mask");
    }
    SpectrumGrid s = dft2_forward(x, fft);
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!mask_.selected(i)) s[i] = {0.0, 0.0};
    }
    return Measurements(mask_, std::move(s));
  }

  /// Real part of F^H y. Counts as one FFT. The unknown image is real;
  /// the complex-valued adjoint stays available via adjoint_complex.
  Image adjoint(const Measurements& y, FftCounter* fft = nullptr) const {
    SpectrumGrid g = adjoint_complex(y, fft);
    Image out(g.width(), g.height());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = g[i].real();
    return out;
  }

  SpectrumGrid adjoint_complex(const Measurements& y, FftCounter* fft = nullptr) const {
    if (!(y.mask() == mask_)) {
      throw std::invalid_argument("PartialFourierOp::adjoint: measurement mask does not match operator mask");
    }
    return dft2_inverse(y.data(), fft);
  }

private:
  SamplingMask mask_;
};

}  // namespace csrecon
