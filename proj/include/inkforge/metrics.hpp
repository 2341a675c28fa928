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
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "inkforge/error.hpp"
#include "inkforge/raster.hpp"

namespace inkforge {

/// Pixel tallies with foreground (ink) as the positive class.
struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::uint64_t tn = 0;

  std::uint64_t total() const { return tp + fp + fn + tn; }
};

inline ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    fail(ErrorKind::InvalidArgument, "confusion: mask dimensions differ");
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if (pred.data[i]) {
      gt.data[i] ? ++c.tp : ++c.fp;
    } else {
      gt.data[i] ? ++c.fn : ++c.tn;
    }
  }
  return c;
}

/// Harmonic mean of precision and recall; every 0/0 evaluates to 0.
inline double f_score(const ConfusionCounts& c) {
  const double precision =
      c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  const double recall =
      c.tp + c.fn > 0 ? static_cast<double>(c.tp) / (c.tp + c.fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

/// Zhang-Suen thinning to a fixpoint. The result is contained in the input
/// foreground and reduces strokes to one-pixel centerlines.
inline BinaryMask skeletonize(const BinaryMask& mask) {
  BinaryMask img = mask;
  const int w = img.width;
  const int h = img.height;
  const auto fg = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0;
    return img.data[static_cast<std::size_t>(y) * w + x] ? 1 : 0;
  };

  std::vector<std::size_t> deletions;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int phase = 0; phase < 2; ++phase) {
      deletions.clear();
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          if (!fg(x, y)) continue;
          // P2..P9 clockwise from north.
          const int n[8] = {fg(x, y - 1),     fg(x + 1, y - 1), fg(x + 1, y),
                            fg(x + 1, y + 1), fg(x, y + 1),     fg(x - 1, y + 1),
                            fg(x - 1, y),     fg(x - 1, y - 1)};
          int count = 0;
          int transitions = 0;
          for (int i = 0; i < 8; ++i) {
            count += n[i];
            if (n[i] == 0 && n[(i + 1) % 8] == 1) ++transitions;
          }
          if (count < 2 || count > 6 || transitions != 1) continue;
          if (phase == 0) {
            if (n[0] * n[2] * n[4] != 0 || n[2] * n[4] * n[6] != 0) continue;
          } else {
            if (n[0] * n[2] * n[6] != 0 || n[0] * n[4] * n[6] != 0) continue;
          }
          deletions.push_back(static_cast<std::size_t>(y) * w + x);
        }
      }
      if (!deletions.empty()) {
        changed = true;
        for (std::size_t i : deletions) img.data[i] = 0;
      }
    }
  }
  return img;
}

/// Pseudo F-measure: recall against the skeletonized ground truth, precision
/// against the full ground truth. This is the skeleton-recall variant; the
/// distance-weighted formulation used by some contest tooling is heavier and
/// intentionally not implemented, so reports label the variant.
inline double pf_score(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    fail(ErrorKind::InvalidArgument, "pf_score: mask dimensions differ");
  }
  const BinaryMask skeleton = skeletonize(gt);
  std::uint64_t skeleton_total = 0;
  std::uint64_t skeleton_hit = 0;
  for (std::size_t i = 0; i < gt.data.size(); ++i) {
    if (skeleton.data[i]) {
      ++skeleton_total;
      if (pred.data[i]) ++skeleton_hit;
    }
  }
  const double pseudo_recall =
      skeleton_total > 0 ? static_cast<double>(skeleton_hit) / skeleton_total
                         : 0.0;
  const ConfusionCounts c = confusion(pred, gt);
  const double precision =
      c.tp + c.fp > 0 ? static_cast<double>(c.tp) / (c.tp + c.fp) : 0.0;
  if (precision + pseudo_recall == 0.0) return 0.0;
  return 2.0 * precision * pseudo_recall / (precision + pseudo_recall);
}

/// PSNR of two masks viewed as {0,1} images with peak 1: the MSE is the
/// differing-pixel fraction. Identical masks report +infinity; corpus means
/// exclude those entries rather than capping them.
inline double psnr(const BinaryMask& pred, const BinaryMask& gt) {
  if (pred.width != gt.width || pred.height != gt.height) {
    fail(ErrorKind::InvalidArgument, "psnr: mask dimensions differ");
  }
  std::uint64_t differing = 0;
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    if ((pred.data[i] != 0) != (gt.data[i] != 0)) ++differing;
  }
  if (differing == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(pred.data.size()) /
                           static_cast<double>(differing));
}

/// Externally produced per-pixel foreground probabilities; this toolkit never
/// computes them, only scores them.
struct ProbabilityMap {
  int width = 0;
  int height = 0;
  std::vector<double> p;

  void validate() const {
    if (p.size() != static_cast<std::size_t>(width) * height) {
      fail(ErrorKind::InvalidArgument, "ProbabilityMap: size mismatch");
    }
    for (double v : p) {
      if (!(v >= 0.0 && v <= 1.0)) {
        fail(ErrorKind::InvalidArgument,
             "ProbabilityMap: values must lie in [0, 1]");
      }
    }
  }
};

inline constexpr double kBceClamp = 1e-7;

/// Mean binary cross-entropy in nats per pixel, with probabilities clamped to
/// [1e-7, 1-1e-7] since the loss is undefined at exactly 0 or 1.
inline double bce(const ProbabilityMap& prob, const BinaryMask& gt) {
  if (prob.width != gt.width || prob.height != gt.height) {
    fail(ErrorKind::InvalidArgument, "bce: dimensions differ");
  }
  prob.validate();
  double total = 0.0;
  for (std::size_t i = 0; i < prob.p.size(); ++i) {
    const double p = std::clamp(prob.p[i], kBceClamp, 1.0 - kBceClamp);
    total += gt.data[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(prob.p.size());
}

struct MetricReport {
  double f_score = 0.0;
  double pf_score = 0.0;
  double psnr = 0.0;  // may be +infinity
  std::optional<double> bce;
};

inline MetricReport score_masks(const BinaryMask& pred, const BinaryMask& gt) {
  MetricReport report;
  report.f_score = f_score(confusion(pred, gt));
  report.pf_score = pf_score(pred, gt);
  report.psnr = psnr(pred, gt);
  return report;
}

}  // namespace inkforge
