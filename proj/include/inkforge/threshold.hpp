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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "inkforge/error.hpp"
#include "inkforge/raster.hpp"

namespace inkforge {

struct AdaptiveParams {
  enum class Method { Mean, Gaussian };

  int window = 31;
  double offset = 0.06;
  Method method = Method::Mean;

  void validate() const {
    if (window < 3 || window % 2 == 0) {
      fail(ErrorKind::InvalidArgument,
           "AdaptiveParams: window must be odd and >= 3");
    }
    if (!(offset >= -1.0 && offset <= 1.0)) {
      fail(ErrorKind::InvalidArgument,
           "AdaptiveParams: offset must lie in [-1, 1]");
    }
  }
};

struct OtsuResult {
  int threshold = 0;  // 8-bit level; foreground = level <= threshold
  BinaryMask mask;
};

/// Global Otsu threshold over the 256-bin histogram of the 8-bit quantized
/// intensities. Among thresholds tying on between-class variance the smallest
/// level wins; a constant image degenerates to threshold 0 with an
/// all-background mask.
///
/// The between-class variance is compared through the exact integer form
/// (s0*c1 - s1*c0)^2 / (c0*c1): counts and level sums are integers, so two
/// thresholds with equal true variance produce identical scores and the
/// argmax is platform-independent.
inline OtsuResult otsu(const RasterImage& img) {
  if (img.channels != 1) {
    fail(ErrorKind::InvalidArgument, "otsu: image must be single-channel");
  }

  std::array<std::uint64_t, 256> hist{};
  std::vector<std::uint8_t> levels(img.pixel_count());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = quantize8(img.data[i]);
    ++hist[levels[i]];
  }

  const std::uint64_t total = levels.size();
  std::uint64_t total_sum = 0;
  for (int l = 0; l < 256; ++l) total_sum += hist[l] * l;

  long double best_score = 0.0L;
  int best_threshold = 0;
  std::uint64_t c0 = 0, s0 = 0;
  for (int t = 0; t < 256; ++t) {
    c0 += hist[t];
    s0 += hist[t] * t;
    const std::uint64_t c1 = total - c0;
    if (c0 == 0 || c1 == 0) continue;
    const std::uint64_t s1 = total_sum - s0;
    const __int128 d = static_cast<__int128>(s0) * c1 -
                       static_cast<__int128>(s1) * c0;
    const long double score = static_cast<long double>(d) *
                              static_cast<long double>(d) /
                              (static_cast<long double>(c0) *
                               static_cast<long double>(c1));
    if (score > best_score) {
      best_score = score;
      best_threshold = t;
    }
  }

  OtsuResult result;
  result.mask = BinaryMask::make(img.width, img.height);
  if (best_score == 0.0L) {
    // Constant image: no split separates anything; report all background.
    result.threshold = 0;
    return result;
  }
  result.threshold = best_threshold;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    result.mask.data[i] = levels[i] <= best_threshold ? 1 : 0;
  }
  return result;
}

namespace detail {

// Edge-replicated copy with a margin of r pixels on every side.
inline std::vector<double> pad_replicate(const RasterImage& img, int r,
                                         int& pw, int& ph) {
  pw = img.width + 2 * r;
  ph = img.height + 2 * r;
  std::vector<double> out(static_cast<std::size_t>(pw) * ph);
  for (int y = 0; y < ph; ++y) {
    const int sy = std::clamp(y - r, 0, img.height - 1);
    for (int x = 0; x < pw; ++x) {
      const int sx = std::clamp(x - r, 0, img.width - 1);
      out[static_cast<std::size_t>(y) * pw + x] = img.at(sx, sy);
    }
  }
  return out;
}

inline std::vector<double> box_means(const RasterImage& img, int window) {
  const int r = window / 2;
  int pw = 0, ph = 0;
  const std::vector<double> padded = pad_replicate(img, r, pw, ph);

  // Summed-area table with a zero top row / left column.
  std::vector<double> sat(static_cast<std::size_t>(pw + 1) * (ph + 1), 0.0);
  for (int y = 0; y < ph; ++y) {
    double rowsum = 0.0;
    for (int x = 0; x < pw; ++x) {
      rowsum += padded[static_cast<std::size_t>(y) * pw + x];
      sat[static_cast<std::size_t>(y + 1) * (pw + 1) + (x + 1)] =
          sat[static_cast<std::size_t>(y) * (pw + 1) + (x + 1)] + rowsum;
    }
  }

  const double inv_area = 1.0 / (static_cast<double>(window) * window);
  std::vector<double> means(img.pixel_count());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const int x0 = x, y0 = y;  // padded window corner = (x, y)
      const int x1 = x + window, y1 = y + window;
      const double sum =
          sat[static_cast<std::size_t>(y1) * (pw + 1) + x1] -
          sat[static_cast<std::size_t>(y0) * (pw + 1) + x1] -
          sat[static_cast<std::size_t>(y1) * (pw + 1) + x0] +
          sat[static_cast<std::size_t>(y0) * (pw + 1) + x0];
      means[img.index(x, y)] = sum * inv_area;
    }
  }
  return means;
}

inline std::vector<double> gaussian_kernel(int window) {
  const int r = window / 2;
  const double sigma = window / 6.0;
  std::vector<double> k(window);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += k[i + r];
  }
  for (double& v : k) v /= sum;
  return k;
}

inline std::vector<double> gaussian_means(const RasterImage& img, int window) {
  const int r = window / 2;
  int pw = 0, ph = 0;
  const std::vector<double> padded = pad_replicate(img, r, pw, ph);
  const std::vector<double> kernel = gaussian_kernel(window);

  // Separable pass: horizontal over the padded rows, vertical into place.
  std::vector<double> horiz(static_cast<std::size_t>(img.width) * ph);
  for (int y = 0; y < ph; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int i = 0; i < window; ++i) {
        acc += kernel[i] * padded[static_cast<std::size_t>(y) * pw + x + i];
      }
      horiz[static_cast<std::size_t>(y) * img.width + x] = acc;
    }
  }
  std::vector<double> means(img.pixel_count());
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int i = 0; i < window; ++i) {
        acc += kernel[i] * horiz[static_cast<std::size_t>(y + i) * img.width + x];
      }
      means[img.index(x, y)] = acc;
    }
  }
  return means;
}

}  // namespace detail

/// Local weighted means used by adaptive_threshold, exposed for callers that
/// want the threshold surface itself.
inline std::vector<double> local_means(const RasterImage& img,
                                       const AdaptiveParams& params) {
  params.validate();
  if (img.channels != 1) {
    fail(ErrorKind::InvalidArgument, "local_means: image must be single-channel");
  }
  if (params.window > 2 * std::min(img.width, img.height) + 1) {
    fail(ErrorKind::InvalidArgument,
         "local_means: window exceeds 2*min(width,height)+1");
  }
  return params.method == AdaptiveParams::Method::Mean
             ? detail::box_means(img, params.window)
             : detail::gaussian_means(img, params.window);
}

/// Foreground = intensity strictly below the local weighted mean minus the
/// offset. Borders see edge-replicated neighborhoods.
inline BinaryMask adaptive_threshold(const RasterImage& img,
                                     const AdaptiveParams& params) {
  const std::vector<double> means = local_means(img, params);
  BinaryMask mask = BinaryMask::make(img.width, img.height);
  for (std::size_t i = 0; i < means.size(); ++i) {
    mask.data[i] = img.data[i] < means[i] - params.offset ? 1 : 0;
  }
  return mask;
}

/// Clears foreground pixels that have no foreground 8-neighbor. Raw adaptive
/// thresholding of real scans leaves single-pixel salt that would otherwise
/// end up in ground truths.
inline BinaryMask despeckle(const BinaryMask& mask) {
  BinaryMask out = mask;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      bool has_neighbor = false;
      for (int dy = -1; dy <= 1 && !has_neighbor; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) {
            continue;
          }
          if (mask.at(nx, ny)) {
            has_neighbor = true;
            break;
          }
        }
      }
      if (!has_neighbor) out.set(x, y, false);
    }
  }
  return out;
}

/// Ground-truth extraction for clean-background document scans: grayscale,
/// adaptive threshold, isolated-pixel despeckle.
inline BinaryMask extract_ground_truth(const RasterImage& doc,
                                       const AdaptiveParams& params = {}) {
  return despeckle(adaptive_threshold(to_grayscale(doc), params));
}

}  // namespace inkforge
