#pragma once

// File formats: binary PGM images (8-bit grayscale), the CSMASK sampling
// mask format, and the CSKS measurements container (little-endian, bit-exact
// round trips). Also the report-number formatting rule: six significant
// digits, infinities as "inf".

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "csrecon/errors.hpp"
#include "csrecon/grid.hpp"

namespace csrecon {

/// Six significant digits; +-infinity as "inf"/"-inf".
inline std::string format_sig6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

/// Normalize 8-bit samples to [0,1] intensities.
inline Image image_from_bytes(int width, int height,
                              const std::vector<std::uint8_t>& bytes) {
  Image img = Image(width, height);
  if (bytes.size() != img.size()) {
    throw std::invalid_argument("image_from_bytes: sample count mismatch");
  }
  for (std::size_t i = 0; i < img.size(); ++i) img[i] = bytes[i] / 255.0;
  return img;
}

/// Denormalize to 8 bits: clamp to [0,1], scale by 255, round half up.
inline std::vector<std::uint8_t> bytes_from_image(const Image& img) {
  std::vector<std::uint8_t> out(img.size());
  for (std::size_t i = 0; i < img.size(); ++i) {
    double v = img[i];
    v = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    out[i] = static_cast<std::uint8_t>(std::floor(v * 255.0 + 0.5));
  }
  return out;
}

namespace detail {

inline void put_u32le(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
  out.push_back(static_cast<char>((v >> 16) & 0xff));
  out.push_back(static_cast<char>((v >> 24) & 0xff));
}

inline void put_f64le(std::string& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
}

class ByteReader {
public:
  ByteReader(const std::string& data, const std::string& what)
      : data_(data), what_(what) {}

  std::uint8_t u8() {
    need(1);
    return static_cast<std::uint8_t>(data_[pos_++]);
  }
  std::uint32_t u32le() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b)
      v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * b);
    return v;
  }
  double f64le() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b)
      v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(data_[pos_++])) << (8 * b);
    return std::bit_cast<double>(v);
  }
  bool at_end() const { return pos_ == data_.size(); }

private:
  void need(std::size_t n) {
    if (pos_ + n > data_.size()) throw FormatError(what_ + ": truncated file");
  }
  const std::string& data_;
  std::string what_;
  std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw FormatError("short write to " + path);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// PGM (binary P5, maxval 255)

inline Image read_pgm(const std::string& path) {
  const std::string data = detail::read_file(path);
  std::istringstream in(data);
  std::string magic;
  in >> magic;
  if (magic == "P6" || magic == "P3") {
    throw FormatError(path + ": color PNM input is rejected, expected 8-bit grayscale P5");
  }
  if (magic != "P5") {
    throw FormatError(path + ": not a binary PGM (P5) file");
  }
  auto next_token = [&]() {
    std::string tok;
    while (in >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in, rest);
        continue;
      }
      return tok;
    }
    throw FormatError(path + ": truncated PGM header");
  };
  const int width = std::stoi(next_token());
  const int height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (width <= 0 || height <= 0) throw FormatError(path + ": bad PGM dimensions");
  if (maxval != 255) throw FormatError(path + ": only 8-bit PGM (maxval 255) is supported");
  in.get();  // single whitespace after maxval
  const std::size_t offset = static_cast<std::size_t>(in.tellg());
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (data.size() - offset < count) throw FormatError(path + ": truncated PGM pixel data");
  std::vector<std::uint8_t> bytes(count);
  std::memcpy(bytes.data(), data.data() + offset, count);
  return image_from_bytes(width, height, bytes);
}

inline void write_pgm(const std::string& path, const Image& img) {
  std::string out = "P5\n" + std::to_string(img.width()) + " " +
                    std::to_string(img.height()) + "\n255\n";
  for (std::uint8_t b : bytes_from_image(img)) out.push_back(static_cast<char>(b));
  detail::write_file(path, out);
}

// ---------------------------------------------------------------------------
// Mask file: "CSMASK <width> <height>\n" then width*height bytes, 0 or 1,
// row-major.

inline void write_mask_file(const std::string& path, const SamplingMask& mask) {
  std::string out = "CSMASK " + std::to_string(mask.width()) + " " +
                    std::to_string(mask.height()) + "\n";
  for (std::uint8_t b : mask.values()) out.push_back(static_cast<char>(b));
  detail::write_file(path, out);
}

inline SamplingMask read_mask_file(const std::string& path) {
  const std::string data = detail::read_file(path);
  const auto nl = data.find('\n');
  if (nl == std::string::npos) throw FormatError(path + ": missing CSMASK header");
  std::istringstream header(data.substr(0, nl));
  std::string magic;
  int width = 0;
  int height = 0;
  header >> magic >> width >> height;
  if (magic != "CSMASK" || width <= 0 || height <= 0 || header.fail()) {
    throw FormatError(path + ": malformed CSMASK header");
  }
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (data.size() - nl - 1 != count) {
    throw FormatError(path + ": CSMASK payload size mismatch");
  }
  std::vector<std::uint8_t> sel(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto b = static_cast<std::uint8_t>(data[nl + 1 + i]);
    if (b > 1) throw FormatError(path + ": CSMASK bytes must be 0 or 1");
    sel[i] = b;
  }
  return SamplingMask(width, height, std::move(sel));
}

// ---------------------------------------------------------------------------
// Measurements file: magic "CSKS", width and height as u32 LE, the mask
// block (headerless CSMASK payload), then width*height complex values as
// interleaved IEEE-754 f64 LE (re, im), row-major, zeros at unselected bins.

inline void write_measurements_file(const std::string& path, const Measurements& m) {
  std::string out = "CSKS";
  detail::put_u32le(out, static_cast<std::uint32_t>(m.width()));
  detail::put_u32le(out, static_cast<std::uint32_t>(m.height()));
  for (std::uint8_t b : m.mask().values()) out.push_back(static_cast<char>(b));
  for (const auto& v : m.data()) {
    detail::put_f64le(out, v.real());
    detail::put_f64le(out, v.imag());
  }
  detail::write_file(path, out);
}

inline Measurements read_measurements_file(const std::string& path) {
  const std::string data = detail::read_file(path);
  if (data.size() < 4 || data.compare(0, 4, "CSKS") != 0) {
    throw FormatError(path + ": not a CSKS measurements file");
  }
  detail::ByteReader in(data.substr(4), path);
  const auto width = static_cast<int>(in.u32le());
  const auto height = static_cast<int>(in.u32le());
  if (width <= 0 || height <= 0) throw FormatError(path + ": bad CSKS dimensions");
  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<std::uint8_t> sel(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint8_t b = in.u8();
    if (b > 1) throw FormatError(path + ": CSKS mask bytes must be 0 or 1");
    sel[i] = b;
  }
  SpectrumGrid grid(width, height);
  for (std::size_t i = 0; i < count; ++i) {
    const double re = in.f64le();
    const double im = in.f64le();
    grid[i] = {re, im};
  }
  if (!in.at_end()) throw FormatError(path + ": trailing bytes in CSKS file");
  try {
    return Measurements(SamplingMask(width, height, std::move(sel)), std::move(grid));
  } catch (const std::invalid_argument& e) {
    throw FormatError(path + ": " + e.what());
  }
}

}  // namespace csrecon
