#pragma once

// 8-bit grayscale PNG ingestion and emission via libpng. Color, palette and
// deep inputs are rejected rather than converted.

#include <cstdio>
#include <string>
#include <vector>

#include <png.h>

#include "csrecon/errors.hpp"
#include "csrecon/grid.hpp"
#include "csrecon/io.hpp"

namespace csrecon {

namespace detail {

struct PngRead {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngRead() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWrite {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWrite() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

}  // namespace detail

inline Image read_png_gray8(const std::string& path) {
  detail::PngRead ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw FormatError("cannot open " + path);
  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info) throw FormatError(path + ": libpng init failed");

  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw FormatError(path + ": corrupt or unreadable PNG");
  }
  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);
  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const int color = png_get_color_type(ctx.png, ctx.info);
  const int depth = png_get_bit_depth(ctx.png, ctx.info);
  if (color != PNG_COLOR_TYPE_GRAY) {
    throw FormatError(path + ": color PNG input is rejected, expected 8-bit grayscale");
  }
  if (depth != 8) {
    throw FormatError(path + ": only 8-bit grayscale PNG is supported");
  }
  if (width == 0 || height == 0) throw FormatError(path + ": empty PNG");

  pixels.resize(static_cast<std::size_t>(width) * height);
  rows.resize(height);
  for (png_uint_32 r = 0; r < height; ++r) {
    rows[r] = pixels.data() + static_cast<std::size_t>(r) * width;
  }
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);
  return image_from_bytes(static_cast<int>(width), static_cast<int>(height), pixels);
}

inline void write_png_gray8(const std::string& path, const Image& img) {
  detail::PngWrite ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw FormatError("cannot open " + path + " for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info) throw FormatError(path + ": libpng init failed");

  std::vector<std::uint8_t> bytes = bytes_from_image(img);
  std::vector<png_bytep> rows(img.height());
  for (int r = 0; r < img.height(); ++r) {
    rows[static_cast<std::size_t>(r)] =
        bytes.data() + static_cast<std::size_t>(r) * img.width();
  }
  if (setjmp(png_jmpbuf(ctx.png))) {
    throw FormatError(path + ": PNG write failed");
  }
  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(img.width()),
               static_cast<png_uint_32>(img.height()), 8, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
}

}  // namespace csrecon
