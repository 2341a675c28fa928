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

// Brute-force reference implementations used to pin down the fast paths.
// Everything here recomputes results from first principles: direct pixel
// partitions, naive window sums, dense linear algebra, double loops. None of
// it shares shortcuts with the library code it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "inkforge/metrics.hpp"
#include "inkforge/poisson.hpp"
#include "inkforge/raster.hpp"
#include "inkforge/threshold.hpp"

namespace inkforge::test {

// Exhaustive-search Otsu: for every candidate threshold, partition the
// pixels directly and score the split.
inline OtsuResult otsu_bruteforce(const RasterImage& img) {
  std::vector<int> levels(img.pixel_count());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    levels[i] = quantize8(img.data[i]);
  }
  long double best_score = 0.0L;
  int best_threshold = 0;
  for (int t = 0; t < 256; ++t) {
    std::uint64_t c0 = 0, s0 = 0, c1 = 0, s1 = 0;
    for (int level : levels) {
      if (level <= t) {
        ++c0;
        s0 += level;
      } else {
        ++c1;
        s1 += level;
      }
    }
    if (c0 == 0 || c1 == 0) continue;
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
  if (best_score == 0.0L) return result;
  result.threshold = best_threshold;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    result.mask.data[i] = levels[i] <= best_threshold ? 1 : 0;
  }
  return result;
}

// Naive O(W*H*window^2) sliding-window weighted mean with edge replication.
inline BinaryMask adaptive_bruteforce(const RasterImage& img,
                                      const AdaptiveParams& params) {
  const int r = params.window / 2;
  const double sigma = params.window / 6.0;
  BinaryMask mask = BinaryMask::make(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double weight_sum = 0.0, value_sum = 0.0;
      for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int sx = std::clamp(x + dx, 0, img.width - 1);
          const int sy = std::clamp(y + dy, 0, img.height - 1);
          const double weight =
              params.method == AdaptiveParams::Method::Mean
                  ? 1.0
                  : std::exp(-(static_cast<double>(dx) * dx + dy * dy) /
                             (2.0 * sigma * sigma));
          weight_sum += weight;
          value_sum += weight * img.at(sx, sy);
        }
      }
      const double mean = value_sum / weight_sum;
      mask.set(x, y, img.at(x, y) < mean - params.offset);
    }
  }
  return mask;
}

// Dense direct solve of the clone system: assemble the |Omega| x |Omega|
// matrix and run Gaussian elimination with partial pivoting. Applies the
// same final [0,1] clamp the solver contract states.
inline std::vector<double> dense_solve(const CloneRegion& region,
                                       const GuidanceField& guidance,
                                       const std::vector<double>& plane) {
  const int w = region.mask.width;
  const int h = region.mask.height;
  std::vector<int> cell(static_cast<std::size_t>(w) * h, -1);
  std::vector<int> cells;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (region.mask.at(x, y)) {
        cell[static_cast<std::size_t>(y) * w + x] = static_cast<int>(cells.size());
        cells.push_back(y * w + x);
      }
    }
  }
  const std::size_t n = cells.size();
  std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  for (std::size_t i = 0; i < n; ++i) {
    const int x = cells[i] % w;
    const int y = cells[i] / w;
    a[i][i] = 4.0;
    double rhs = 0.0;
    for (int dir = 0; dir < 4; ++dir) {
      const int qx = x + dx[dir];
      const int qy = y + dy[dir];
      const int qi = cell[static_cast<std::size_t>(qy) * w + qx];
      if (qi >= 0) {
        a[i][qi] -= 1.0;
      } else {
        rhs += plane[static_cast<std::size_t>(qy) * w + qx];
      }
      rhs += guidance.at(x, y, dir);
    }
    a[i][n] = rhs;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t row = col + 1; row < n; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      const double factor = a[row][col] / a[col][col];
      if (factor == 0.0) continue;
      for (std::size_t k = col; k <= n; ++k) a[row][k] -= factor * a[col][k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = a[i][n];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  std::vector<double> out = plane;
  for (std::size_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(cells[i])] = std::clamp(x[i], 0.0, 1.0);
  }
  return out;
}

// True residual of a returned solution against the stated system.
inline double relative_residual(const CloneRegion& region,
                                const GuidanceField& guidance,
                                const std::vector<double>& plane,
                                const std::vector<double>& solution) {
  const int w = region.mask.width;
  const int h = region.mask.height;
  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  double rnorm2 = 0.0, bnorm2 = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!region.mask.at(x, y)) continue;
      double lhs = 4.0 * solution[static_cast<std::size_t>(y) * w + x];
      double b = 0.0;
      for (int dir = 0; dir < 4; ++dir) {
        const int qx = x + dx[dir];
        const int qy = y + dy[dir];
        if (region.mask.at(qx, qy)) {
          lhs -= solution[static_cast<std::size_t>(qy) * w + qx];
        } else {
          b += plane[static_cast<std::size_t>(qy) * w + qx];
        }
        b += guidance.at(x, y, dir);
      }
      rnorm2 += (b - lhs) * (b - lhs);
      bnorm2 += b * b;
    }
  }
  return std::sqrt(rnorm2) / (bnorm2 > 0 ? std::sqrt(bnorm2) : 1.0);
}

inline ConfusionCounts confusion_bruteforce(const BinaryMask& pred,
                                            const BinaryMask& gt) {
  ConfusionCounts c;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      const bool p = pred.at(x, y);
      const bool g = gt.at(x, y);
      if (p && g) ++c.tp;
      if (p && !g) ++c.fp;
      if (!p && g) ++c.fn;
      if (!p && !g) ++c.tn;
    }
  }
  return c;
}

inline double f_bruteforce(const BinaryMask& pred, const BinaryMask& gt) {
  const ConfusionCounts c = confusion_bruteforce(pred, gt);
  const double p = c.tp + c.fp > 0 ? double(c.tp) / (c.tp + c.fp) : 0.0;
  const double r = c.tp + c.fn > 0 ? double(c.tp) / (c.tp + c.fn) : 0.0;
  return p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

// Pseudo-F double loop; takes the ground-truth skeleton as an input so the
// metric arithmetic is checked independently of how the skeleton was made.
inline double pf_bruteforce(const BinaryMask& pred, const BinaryMask& gt,
                            const BinaryMask& gt_skeleton) {
  std::uint64_t skel = 0, hit = 0;
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      if (gt_skeleton.at(x, y)) {
        ++skel;
        if (pred.at(x, y)) ++hit;
      }
    }
  }
  const double pr = skel > 0 ? double(hit) / skel : 0.0;
  const ConfusionCounts c = confusion_bruteforce(pred, gt);
  const double p = c.tp + c.fp > 0 ? double(c.tp) / (c.tp + c.fp) : 0.0;
  return p + pr > 0 ? 2.0 * p * pr / (p + pr) : 0.0;
}

inline double psnr_bruteforce(const BinaryMask& pred, const BinaryMask& gt) {
  double sq = 0.0;
  for (int y = 0; y < pred.height; ++y) {
    for (int x = 0; x < pred.width; ++x) {
      const double d = (pred.at(x, y) ? 1.0 : 0.0) - (gt.at(x, y) ? 1.0 : 0.0);
      sq += d * d;
    }
  }
  const double mse = sq / (pred.width * pred.height);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

inline double bce_bruteforce(const ProbabilityMap& prob, const BinaryMask& gt) {
  double total = 0.0;
  for (int y = 0; y < gt.height; ++y) {
    for (int x = 0; x < gt.width; ++x) {
      double p = prob.p[static_cast<std::size_t>(y) * gt.width + x];
      p = std::min(std::max(p, kBceClamp), 1.0 - kBceClamp);
      const double target = gt.at(x, y) ? 1.0 : 0.0;
      total += -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
    }
  }
  return total / (gt.width * gt.height);
}

inline int component_count(const BinaryMask& mask) {
  BinaryMask seen = BinaryMask::make(mask.width, mask.height);
  int components = 0;
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y) || seen.at(x, y)) continue;
      ++components;
      stack.push_back({x, y});
      seen.set(x, y, true);
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = cx + dx, ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) {
              continue;
            }
            if (mask.at(nx, ny) && !seen.at(nx, ny)) {
              seen.set(nx, ny, true);
              stack.push_back({nx, ny});
            }
          }
        }
      }
    }
  }
  return components;
}

}  // namespace inkforge::test
