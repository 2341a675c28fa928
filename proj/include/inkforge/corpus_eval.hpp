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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "inkforge/error.hpp"
#include "inkforge/metrics.hpp"
#include "inkforge/png_io.hpp"

// Directory-against-directory scoring. Prediction files may be binary masks
// or 8-bit probability maps; in both cases dark means ink, so the foreground
// probability of a pixel with intensity v is 1 - v and the binarized
// prediction takes pixels with 8-bit level <= 127. Ground truths must be
// strict {0,255} masks.

namespace inkforge {

struct CorpusEntry {
  std::string stem;
  MetricReport report;
};

struct CorpusReport {
  std::vector<CorpusEntry> entries;  // stem-sorted
  double mean_f_score = 0.0;
  double mean_pf_score = 0.0;
  double mean_psnr = 0.0;  // over finite entries only
  std::size_t psnr_excluded = 0;
  double mean_bce = 0.0;
  std::vector<std::string> unmatched_pred;  // stems without a ground truth
  std::vector<std::string> unmatched_gt;    // stems without a prediction
};

namespace detail {

inline std::vector<std::string> png_stems(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    fail(ErrorKind::MissingFile, dir.string() + " is not a directory");
  }
  std::vector<std::string> stems;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") {
      stems.push_back(entry.path().stem().string());
    }
  }
  std::sort(stems.begin(), stems.end());
  return stems;
}

inline CorpusEntry score_pair(const std::string& stem,
                              const std::filesystem::path& pred_path,
                              const std::filesystem::path& gt_path) {
  const RasterImage pred_img = to_grayscale(load_image(pred_path));
  const BinaryMask gt = load_mask(gt_path);
  if (pred_img.width != gt.width || pred_img.height != gt.height) {
    fail(ErrorKind::InvalidArgument,
         stem + ": prediction and ground truth dimensions differ");
  }

  BinaryMask pred_mask = BinaryMask::make(pred_img.width, pred_img.height);
  ProbabilityMap prob{pred_img.width, pred_img.height,
                      std::vector<double>(pred_img.data.size())};
  for (std::size_t i = 0; i < pred_img.data.size(); ++i) {
    pred_mask.data[i] = quantize8(pred_img.data[i]) <= 127 ? 1 : 0;
    prob.p[i] = 1.0 - pred_img.data[i];
  }

  CorpusEntry entry;
  entry.stem = stem;
  entry.report = score_masks(pred_mask, gt);
  entry.report.bce = bce(prob, gt);
  return entry;
}

}  // namespace detail

/// Scores every matching stem between the two directories. Iteration and
/// aggregation are stem-sorted regardless of worker count, so reports are
/// reproducible. An empty intersection is an error; one-sided stems are
/// listed in the report.
inline CorpusReport evaluate_corpus(const std::filesystem::path& pred_dir,
                                    const std::filesystem::path& gt_dir,
                                    int jobs = 1) {
  const std::vector<std::string> pred_stems = detail::png_stems(pred_dir);
  const std::vector<std::string> gt_stems = detail::png_stems(gt_dir);

  CorpusReport report;
  std::vector<std::string> matched;
  std::set_intersection(pred_stems.begin(), pred_stems.end(), gt_stems.begin(),
                        gt_stems.end(), std::back_inserter(matched));
  std::set_difference(pred_stems.begin(), pred_stems.end(), gt_stems.begin(),
                      gt_stems.end(), std::back_inserter(report.unmatched_pred));
  std::set_difference(gt_stems.begin(), gt_stems.end(), pred_stems.begin(),
                      pred_stems.end(), std::back_inserter(report.unmatched_gt));

  if (matched.empty()) {
    std::string message = "evaluate_corpus: no common stems between " +
                          pred_dir.string() + " and " + gt_dir.string();
    if (!pred_stems.empty() || !gt_stems.empty()) {
      message += " (predictions: " + std::to_string(pred_stems.size()) +
                 ", ground truths: " + std::to_string(gt_stems.size()) + ")";
    }
    fail(ErrorKind::InvalidArgument, message);
  }

  report.entries.resize(matched.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::string first_error;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= matched.size() || failed.load()) return;
      try {
        report.entries[i] =
            detail::score_pair(matched[i], pred_dir / (matched[i] + ".png"),
                               gt_dir / (matched[i] + ".png"));
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true)) first_error = e.what();
      }
    }
  };

  const int workers = std::max(1, jobs);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failed.load()) {
    fail(ErrorKind::Io, first_error);
  }

  double f_sum = 0.0, pf_sum = 0.0, psnr_sum = 0.0, bce_sum = 0.0;
  std::size_t finite_psnr = 0;
  for (const CorpusEntry& entry : report.entries) {
    f_sum += entry.report.f_score;
    pf_sum += entry.report.pf_score;
    if (std::isinf(entry.report.psnr)) {
      ++report.psnr_excluded;
    } else {
      psnr_sum += entry.report.psnr;
      ++finite_psnr;
    }
    bce_sum += entry.report.bce.value_or(0.0);
  }
  const double n = static_cast<double>(report.entries.size());
  report.mean_f_score = f_sum / n;
  report.mean_pf_score = pf_sum / n;
  report.mean_psnr = finite_psnr > 0 ? psnr_sum / finite_psnr : 0.0;
  report.mean_bce = bce_sum / n;
  return report;
}

/// Aligned text table, one row per metric.
inline std::string format_report_table(const CorpusReport& report) {
  std::ostringstream out;
  out << "# binarization evaluation report\n";
  out << "# pseudo F-measure recall is computed against the skeletonized "
         "ground truth (skeleton-recall variant)\n";
  out << "# images scored: " << report.entries.size() << "\n";
  if (!report.unmatched_pred.empty() || !report.unmatched_gt.empty()) {
    out << "# unmatched predictions: " << report.unmatched_pred.size()
        << ", unmatched ground truths: " << report.unmatched_gt.size() << "\n";
  }
  char line[128];
  std::snprintf(line, sizeof(line), "%-10s %12s\n", "metric", "mean");
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %12.6f\n", "F-score",
                report.mean_f_score);
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %12.6f\n", "PF-score",
                report.mean_pf_score);
  out << line;
  if (report.psnr_excluded > 0) {
    std::snprintf(line, sizeof(line), "%-10s %12.6f  (%zu identical pair%s excluded)\n",
                  "PSNR", report.mean_psnr, report.psnr_excluded,
                  report.psnr_excluded == 1 ? "" : "s");
  } else {
    std::snprintf(line, sizeof(line), "%-10s %12.6f\n", "PSNR",
                  report.mean_psnr);
  }
  out << line;
  std::snprintf(line, sizeof(line), "%-10s %12.6f\n", "BCE", report.mean_bce);
  out << line;
  return out.str();
}

/// Per-image records as JSON Lines; infinite PSNR serializes as null.
inline void write_report_jsonl(const std::filesystem::path& path,
                               const CorpusReport& report) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorKind::Io, "cannot write " + path.string());
  }
  for (const CorpusEntry& entry : report.entries) {
    nlohmann::ordered_json j;
    j["stem"] = entry.stem;
    j["f_score"] = entry.report.f_score;
    j["pf_score"] = entry.report.pf_score;
    if (std::isinf(entry.report.psnr)) {
      j["psnr"] = nullptr;
    } else {
      j["psnr"] = entry.report.psnr;
    }
    if (entry.report.bce) j["bce"] = *entry.report.bce;
    out << j.dump() << "\n";
  }
  if (!out) {
    fail(ErrorKind::Io, "failed writing " + path.string());
  }
}

}  // namespace inkforge
