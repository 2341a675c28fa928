// Copyright 2026 The Inkforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <png.h>

#include <cstdio>
#include <csetjmp>
#include <filesystem>
#include <string>
#include <vector>

#include "inkforge/error.hpp"
#include "inkforge/raster.hpp"

// PNG is the single raster format of the toolkit: 8-bit grayscale or 8-bit
// RGB, non-interlaced on write. Reads accept palette/16-bit/alpha variants
// and normalize them to 8-bit gray or RGB. Ground-truth masks serialize as
// grayscale with ink = 0 and background = 255, and loads reject anything
// that is not exactly two-valued.

namespace inkforge {
namespace detail {

// Keeps any one image comfortably below address-space surprises.
inline constexpr std::uint32_t kMaxImageDim = 1u << 16;
inline constexpr std::uint64_t kMaxImagePixels = 1ull << 28;

struct FileCloser {
  std::FILE* fp = nullptr;
  ~FileCloser() {
    if (fp) std::fclose(fp);
  }
};

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReadGuard() { png_destroy_read_struct(&png, &info, nullptr); }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriteGuard() { png_destroy_write_struct(&png, &info); }
};

}  // namespace detail

inline RasterImage load_image(const std::filesystem::path& path) {
  std::FILE* fp = std::fopen(path.string().c_str(), "rb");
  if (!fp) {
    fail(ErrorKind::MissingFile, "cannot open " + path.string());
  }
  detail::FileCloser closer{fp};

  png_byte sig[8] = {};
  if (std::fread(sig, 1, 8, fp) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    fail(ErrorKind::Format, path.string() + " is not a PNG file");
  }

  detail::PngReadGuard guard;
  guard.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                     nullptr);
  if (guard.png) guard.info = png_create_info_struct(guard.png);
  if (!guard.png || !guard.info) {
    fail(ErrorKind::Io, "libpng allocation failed");
  }

  // Declared ahead of setjmp; a longjmp lands back here and the throw below
  // unwinds through them normally.
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  RasterImage out;

  if (setjmp(png_jmpbuf(guard.png))) {
    fail(ErrorKind::Format, path.string() + ": invalid PNG data");
  }

  png_init_io(guard.png, fp);
  png_set_sig_bytes(guard.png, 8);
  png_read_info(guard.png, guard.info);

  const png_uint_32 w = png_get_image_width(guard.png, guard.info);
  const png_uint_32 h = png_get_image_height(guard.png, guard.info);
  if (w < 1 || h < 1 || w > detail::kMaxImageDim || h > detail::kMaxImageDim ||
      static_cast<std::uint64_t>(w) * h > detail::kMaxImagePixels) {
    fail(ErrorKind::Dimension,
         path.string() + ": unsupported image dimensions");
  }

  const int color_type = png_get_color_type(guard.png, guard.info);
  const int bit_depth = png_get_bit_depth(guard.png, guard.info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(guard.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) {
    png_set_expand_gray_1_2_4_to_8(guard.png);
  }
  if (png_get_valid(guard.png, guard.info, PNG_INFO_tRNS)) {
    png_set_tRNS_to_alpha(guard.png);
  }
  if (bit_depth == 16) png_set_strip_16(guard.png);
  if (color_type & PNG_COLOR_MASK_ALPHA ||
      png_get_valid(guard.png, guard.info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(guard.png);
  }
  png_read_update_info(guard.png, guard.info);

  const int channels = png_get_channels(guard.png, guard.info);
  if ((channels != 1 && channels != 3) ||
      png_get_bit_depth(guard.png, guard.info) != 8) {
    fail(ErrorKind::Format,
         path.string() + ": expected 8-bit grayscale or RGB");
  }

  const std::size_t stride = static_cast<std::size_t>(w) * channels;
  pixels.resize(stride * h);
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(guard.png, rows.data());
  png_read_end(guard.png, nullptr);

  out = RasterImage::make(static_cast<int>(w), static_cast<int>(h), channels);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = dequantize8(pixels[i]);
  }
  return out;
}

inline void save_image(const std::filesystem::path& path,
                       const RasterImage& img) {
  std::FILE* fp = std::fopen(path.string().c_str(), "wb");
  if (!fp) {
    fail(ErrorKind::Io, "cannot write " + path.string());
  }
  detail::FileCloser closer{fp};

  detail::PngWriteGuard guard;
  guard.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                      nullptr);
  if (guard.png) guard.info = png_create_info_struct(guard.png);
  if (!guard.png || !guard.info) {
    fail(ErrorKind::Io, "libpng allocation failed");
  }

  std::vector<png_byte> pixels(img.data.size());
  std::vector<png_bytep> rows(img.height);

  if (setjmp(png_jmpbuf(guard.png))) {
    fail(ErrorKind::Io, "failed writing " + path.string());
  }

  png_init_io(guard.png, fp);
  png_set_IHDR(guard.png, guard.info, img.width, img.height, 8,
               img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);

  for (std::size_t i = 0; i < img.data.size(); ++i) {
    pixels[i] = quantize8(img.data[i]);
  }
  const std::size_t stride = static_cast<std::size_t>(img.width) * img.channels;
  for (int y = 0; y < img.height; ++y) {
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * stride;
  }

  png_write_info(guard.png, guard.info);
  png_write_image(guard.png, rows.data());
  png_write_end(guard.png, nullptr);
}

inline BinaryMask load_mask(const std::filesystem::path& path) {
  const RasterImage img = load_image(path);
  if (img.channels != 1) {
    fail(ErrorKind::Format, path.string() + ": mask must be single-channel");
  }
  BinaryMask mask = BinaryMask::make(img.width, img.height);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    if (img.data[i] == 0.0) {
      mask.data[i] = 1;  // ink
    } else if (img.data[i] == 1.0) {
      mask.data[i] = 0;
    } else {
      fail(ErrorKind::Format,
           path.string() + ": mask pixels must be exactly 0 or 255");
    }
  }
  return mask;
}

inline void save_mask(const std::filesystem::path& path,
                      const BinaryMask& mask) {
  RasterImage img = RasterImage::make(mask.width, mask.height, 1);
  for (std::size_t i = 0; i < mask.data.size(); ++i) {
    img.data[i] = mask.data[i] ? 0.0 : 1.0;
  }
  save_image(path, img);
}

}  // namespace inkforge
