#pragma once

// Self-contained 1D complex DFT kernels: iterative radix-2 for power-of-two
// lengths and Bluestein's chirp-z reduction for everything else. Kernels are
// unscaled; callers apply whatever normalization they need.

#include <cmath>
#include <complex>
#include <cstddef>
#include <memory>
#include <numbers>
#include <span>
#include <vector>

namespace csrecon::detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Radix-2 decimation-in-time with precomputed roots. sign -1: e^{-2pi i kn/n}.
class Pow2Fft {
public:
  explicit Pow2Fft(std::size_t n) : n_(n), rev_(n), roots_(n / 2) {
    // bit-reversal permutation
    std::size_t log2n = 0;
    while ((std::size_t{1} << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < log2n; ++b)
        if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n - 1 - b);
      rev_[i] = r;
    }
    const double step = -2.0 * std::numbers::pi / static_cast<double>(n);
    for (std::size_t j = 0; j < n / 2; ++j)
      roots_[j] = std::polar(1.0, step * static_cast<double>(j));
  }

  // sign -1: forward kernel; sign +1: conjugate (inverse) kernel, unscaled.
  void run(std::span<std::complex<double>> a, int sign) const {
    for (std::size_t i = 0; i < n_; ++i)
      if (rev_[i] > i) std::swap(a[i], a[rev_[i]]);
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len >> 1;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          std::complex<double> w = roots_[j * stride];
          if (sign > 0) w = std::conj(w);
          const std::complex<double> u = a[start + j];
          const std::complex<double> t = w * a[start + j + half];
          a[start + j] = u + t;
          a[start + j + half] = u - t;
        }
      }
    }
  }

private:
  std::size_t n_;
  std::vector<std::size_t> rev_;
  std::vector<std::complex<double>> roots_;
};

// One reusable 1D transform of fixed length and direction.
class Dft1d {
public:
  Dft1d(std::size_t n, int sign) : n_(n), sign_(sign) {
    if (is_pow2(n_)) {
      fft_ = std::make_unique<Pow2Fft>(n_);
      return;
    }
    // Bluestein: X(k) = c(k) * (a conv b)(k) with a(m) = x(m) c(m),
    // c(m) = e^{sign i pi m^2 / n}, b(m) = conj(c(|m|)). The linear
    // convolution is embedded in a circular one of power-of-two length.
    conv_len_ = next_pow2(2 * n_ - 1);
    fft_ = std::make_unique<Pow2Fft>(conv_len_);
    chirp_.resize(n_);
    const long long period = 2 * static_cast<long long>(n_);
    for (std::size_t m = 0; m < n_; ++m) {
      const long long sq = (static_cast<long long>(m) * static_cast<long long>(m)) % period;
      const double angle = sign * std::numbers::pi * static_cast<double>(sq) /
                           static_cast<double>(n_);
      chirp_[m] = std::polar(1.0, angle);
    }
    kernel_fft_.assign(conv_len_, {0.0, 0.0});
    kernel_fft_[0] = std::conj(chirp_[0]);
    for (std::size_t m = 1; m < n_; ++m) {
      kernel_fft_[m] = std::conj(chirp_[m]);
      kernel_fft_[conv_len_ - m] = std::conj(chirp_[m]);
    }
    fft_->run(kernel_fft_, -1);
  }

  void run(std::span<std::complex<double>> a) const {
    if (conv_len_ == 0) {
      fft_->run(a, sign_);
      return;
    }
    std::vector<std::complex<double>> buf(conv_len_, {0.0, 0.0});
    for (std::size_t m = 0; m < n_; ++m) buf[m] = a[m] * chirp_[m];
    fft_->run(buf, -1);
    for (std::size_t m = 0; m < conv_len_; ++m) buf[m] *= kernel_fft_[m];
    fft_->run(buf, +1);
    const double scale = 1.0 / static_cast<double>(conv_len_);
    for (std::size_t k = 0; k < n_; ++k) a[k] = buf[k] * scale * chirp_[k];
  }

  std::size_t length() const { return n_; }

private:
  std::size_t n_;
  int sign_;
  std::size_t conv_len_ = 0;  // 0 means plain radix-2 path
  std::unique_ptr<Pow2Fft> fft_;
  std::vector<std::complex<double>> chirp_;
  std::vector<std::complex<double>> kernel_fft_;
};

}  // namespace csrecon::detail
