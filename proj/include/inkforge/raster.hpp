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

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "inkforge/error.hpp"

namespace inkforge {

/// Row-major raster of normalized intensities in [0,1], interleaved channels.
/// All math runs on these doubles; quantization to 8-bit happens only at
/// serialization time. Values are immutable by convention once an image has
/// been built, which makes them safe to share across worker threads.
struct RasterImage {
  int width = 0;
  int height = 0;
  int channels = 1;
  std::vector<double> data;

  static RasterImage make(int width, int height, int channels,
                          double fill = 0.0) {
    if (width < 1 || height < 1) {
      fail(ErrorKind::InvalidArgument, "RasterImage: width/height must be >= 1");
    }
    if (channels != 1 && channels != 3) {
      fail(ErrorKind::InvalidArgument, "RasterImage: channels must be 1 or 3");
    }
    RasterImage img;
    img.width = width;
    img.height = height;
    img.channels = channels;
    img.data.assign(static_cast<std::size_t>(width) * height * channels, fill);
    return img;
  }

  std::size_t index(int x, int y, int c = 0) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }

  double at(int x, int y, int c = 0) const { return data[index(x, y, c)]; }
  double& at(int x, int y, int c = 0) { return data[index(x, y, c)]; }

  std::size_t pixel_count() const {
    return static_cast<std::size_t>(width) * height;
  }

  /// One channel as a flat plane, row-major.
  std::vector<double> plane(int c) const {
    std::vector<double> out(pixel_count());
    for (std::size_t p = 0; p < out.size(); ++p) {
      out[p] = data[p * channels + c];
    }
    return out;
  }

  void set_plane(int c, const std::vector<double>& values) {
    if (values.size() != pixel_count()) {
      fail(ErrorKind::InvalidArgument, "set_plane: size mismatch");
    }
    for (std::size_t p = 0; p < values.size(); ++p) {
      data[p * channels + c] = values[p];
    }
  }
};

/// Per-pixel ink labels: true = foreground ink. Serialized with ink as 0
/// (black) and background as 255, the convention of the public binarization
/// corpora this toolkit interoperates with.
struct BinaryMask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;  // 0 or 1

  static BinaryMask make(int width, int height, bool fill = false) {
    if (width < 1 || height < 1) {
      fail(ErrorKind::InvalidArgument, "BinaryMask: width/height must be >= 1");
    }
    BinaryMask m;
    m.width = width;
    m.height = height;
    m.data.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
    return m;
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }

  bool at(int x, int y) const { return data[index(x, y)] != 0; }
  void set(int x, int y, bool v) { data[index(x, y)] = v ? 1 : 0; }

  std::size_t foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : data) n += v;
    return n;
  }

  bool operator==(const BinaryMask& other) const {
    return width == other.width && height == other.height &&
           data == other.data;
  }
};

/// Quantize a normalized intensity to 8 bits, rounding half away from zero.
inline std::uint8_t quantize8(double v) {
  if (!(v > 0.0)) return 0;
  if (v >= 1.0) return 255;
  return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

inline double dequantize8(std::uint8_t b) { return b / 255.0; }

/// One of the eight dihedral (D4) symmetries of a square raster: a quarter-turn
/// rotation applied first, then an optional horizontal mirror.
struct Transform {
  int quarter_turns = 0;  // clockwise, 0..3
  bool hflip = false;

  bool operator==(const Transform&) const = default;

  int rotation_degrees() const { return quarter_turns * 90; }

  static Transform from_degrees(int degrees, bool hflip) {
    if (degrees != 0 && degrees != 90 && degrees != 180 && degrees != 270) {
      fail(ErrorKind::InvalidArgument,
           "Transform: rotation must be one of 0/90/180/270");
    }
    return Transform{degrees / 90, hflip};
  }
};

/// Fixed enumeration of all eight transforms; index 0 is the identity.
inline Transform transform_from_index(int index) {
  if (index < 0 || index > 7) {
    fail(ErrorKind::InvalidArgument, "transform_from_index: index must be 0..7");
  }
  return Transform{index % 4, index >= 4};
}

/// Group inverse. Every rotate-then-mirror element is an involution, so only
/// pure rotations need their turn count negated.
inline Transform inverse(const Transform& t) {
  if (t.hflip) return t;
  return Transform{(4 - t.quarter_turns) % 4, false};
}

namespace detail {

// Rotates one quarter turn clockwise: dst(x, y) = src(y, src_h - 1 - x).
template <typename Grid>
Grid rotate90(const Grid& src, int channels) {
  Grid dst = src;
  dst.width = src.height;
  dst.height = src.width;
  for (int y = 0; y < dst.height; ++y) {
    for (int x = 0; x < dst.width; ++x) {
      for (int c = 0; c < channels; ++c) {
        dst.data[(static_cast<std::size_t>(y) * dst.width + x) * channels + c] =
            src.data[(static_cast<std::size_t>(src.height - 1 - x) * src.width +
                      y) *
                         channels +
                     c];
      }
    }
  }
  return dst;
}

template <typename Grid>
Grid hflip(const Grid& src, int channels) {
  Grid dst = src;
  for (int y = 0; y < src.height; ++y) {
    for (int x = 0; x < src.width; ++x) {
      for (int c = 0; c < channels; ++c) {
        dst.data[(static_cast<std::size_t>(y) * src.width + x) * channels + c] =
            src.data[(static_cast<std::size_t>(y) * src.width +
                      (src.width - 1 - x)) *
                         channels +
                     c];
      }
    }
  }
  return dst;
}

template <typename Grid>
Grid apply_dihedral(const Grid& src, const Transform& t, int channels) {
  Grid out = src;
  for (int k = 0; k < t.quarter_turns; ++k) out = rotate90(out, channels);
  if (t.hflip) out = hflip(out, channels);
  return out;
}

}  // namespace detail

inline RasterImage apply_transform(const RasterImage& img, const Transform& t) {
  return detail::apply_dihedral(img, t, img.channels);
}

inline BinaryMask apply_transform(const BinaryMask& mask, const Transform& t) {
  return detail::apply_dihedral(mask, t, 1);
}

/// Rec. 601 luma; single-channel input is returned unchanged. The blue
/// weight is the exact complement of the other two so that the weights sum
/// to exactly 1 and white maps to white without rounding debris.
inline RasterImage to_grayscale(const RasterImage& img) {
  if (img.channels == 1) return img;
  constexpr double kLumaR = 0.299;
  constexpr double kLumaG = 0.587;
  constexpr double kLumaB = 1.0 - (kLumaR + kLumaG);
  RasterImage out = RasterImage::make(img.width, img.height, 1);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    const double* px = &img.data[p * 3];
    out.data[p] = (kLumaR * px[0] + kLumaG * px[1]) + kLumaB * px[2];
  }
  return out;
}

/// Replicates a gray plane into three channels; 3-channel input is returned
/// unchanged.
inline RasterImage to_rgb(const RasterImage& img) {
  if (img.channels == 3) return img;
  RasterImage out = RasterImage::make(img.width, img.height, 3);
  for (std::size_t p = 0; p < img.pixel_count(); ++p) {
    out.data[p * 3] = out.data[p * 3 + 1] = out.data[p * 3 + 2] = img.data[p];
  }
  return out;
}

}  // namespace inkforge
