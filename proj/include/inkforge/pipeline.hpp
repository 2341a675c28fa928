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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "inkforge/catalog.hpp"
#include "inkforge/error.hpp"
#include "inkforge/manifest.hpp"
#include "inkforge/metrics.hpp"
#include "inkforge/png_io.hpp"
#include "inkforge/poisson.hpp"
#include "inkforge/raster.hpp"
#include "inkforge/rng.hpp"
#include "inkforge/threshold.hpp"

// The generation pipeline: plan a manifest pairing every content patch with
// k sampled backgrounds, then render each sample by seamless-cloning the
// content onto its background. Everything downstream of (catalog, k, seed)
// is deterministic; per-sample seeds are split from the global seed so the
// worker schedule has no observable effect.

namespace inkforge {

struct GenerationConfig {
  std::filesystem::path contents_path;
  std::filesystem::path backgrounds_path;
  std::filesystem::path output_root;
  int per_content = 100;  // backgrounds sampled per content
  std::uint64_t global_seed = 0;
  int jobs = 1;
  CloneMode mode = CloneMode::Mixed;
  bool resume = false;
  // Called after every finished sample with (done, total); may be empty.
  std::function<void(std::uint64_t, std::uint64_t)> on_progress;
};

/// Deterministic manifest: for each content, k distinct backgrounds drawn
/// without replacement by a Fisher-Yates shuffle over a per-content
/// SplitMix64 stream seeded with mix64(global_seed, fnv1a64(content_id)).
/// Record seeds are mix64(global_seed, sample_id) and also pick the sample's
/// dihedral transform. Records are ordered by (content index, draw index).
inline std::vector<ManifestRecord> plan(const AssetCatalog& catalog, int k,
                                        std::uint64_t global_seed) {
  if (k < 1) {
    fail(ErrorKind::InvalidArgument, "plan: per-content count must be >= 1");
  }
  if (static_cast<std::size_t>(k) > catalog.backgrounds.size()) {
    fail(ErrorKind::InvalidArgument,
         "plan: per-content count " + std::to_string(k) +
             " exceeds the " + std::to_string(catalog.backgrounds.size()) +
             " catalogued backgrounds");
  }
  {
    std::unordered_set<std::string> ids;
    for (const ContentAsset& c : catalog.contents) {
      if (!ids.insert(c.id).second) {
        fail(ErrorKind::InvalidArgument, "plan: duplicate content id " + c.id);
      }
    }
    ids.clear();
    for (const BackgroundAsset& b : catalog.backgrounds) {
      if (!ids.insert(b.id).second) {
        fail(ErrorKind::InvalidArgument,
             "plan: duplicate background id " + b.id);
      }
    }
  }

  std::vector<ManifestRecord> records;
  records.reserve(catalog.contents.size() * static_cast<std::size_t>(k));
  const std::uint32_t n_bg =
      static_cast<std::uint32_t>(catalog.backgrounds.size());
  for (const ContentAsset& content : catalog.contents) {
    SplitMix64 stream(mix64(global_seed, fnv1a64(content.id)));
    const std::vector<std::uint32_t> picks = sample_without_replacement(
        n_bg, static_cast<std::uint32_t>(k), stream);
    for (std::uint32_t pick : picks) {
      ManifestRecord r;
      r.sample_id = records.size();
      r.content_id = content.id;
      r.background_id = catalog.backgrounds[pick].id;
      r.seed = mix64(global_seed, r.sample_id);
      r.transform = transform_from_index(static_cast<int>(r.seed % 8));
      r.out_input = "inputs/" + std::to_string(r.sample_id) + ".png";
      r.out_gt = "gts/" + std::to_string(r.sample_id) + ".png";
      records.push_back(std::move(r));
    }
  }
  return records;
}

/// Id lookups resolved once so workers stay read-only.
struct CatalogIndex {
  std::unordered_map<std::string, const ContentAsset*> contents;
  std::unordered_map<std::string, const BackgroundAsset*> backgrounds;

  explicit CatalogIndex(const AssetCatalog& catalog) {
    for (const ContentAsset& c : catalog.contents) contents[c.id] = &c;
    for (const BackgroundAsset& b : catalog.backgrounds) backgrounds[b.id] = &b;
  }
};

namespace detail {

inline std::filesystem::path atomic_suffix(const std::filesystem::path& path) {
  static std::atomic<std::uint64_t> counter{0};
  return path.string() + ".tmp" +
         std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
}

template <typename Value, typename Saver>
void save_atomic(const std::filesystem::path& path, const Value& value,
                 Saver&& saver) {
  const std::filesystem::path tmp = atomic_suffix(path);
  saver(tmp, value);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    fail(ErrorKind::Io, "cannot move " + path.string() + " into place");
  }
}

}  // namespace detail

inline void save_image_atomic(const std::filesystem::path& path,
                              const RasterImage& img) {
  detail::save_atomic(path, img, [](const std::filesystem::path& p,
                                    const RasterImage& v) { save_image(p, v); });
}

inline void save_mask_atomic(const std::filesystem::path& path,
                             const BinaryMask& mask) {
  detail::save_atomic(path, mask, [](const std::filesystem::path& p,
                                     const BinaryMask& v) { save_mask(p, v); });
}

/// Renders one manifest record: the transformed content patch is cloned onto
/// its background and written with the transformed ground truth, both via
/// temp-file renames. Gray/color mismatches are reconciled by replicating the
/// gray plane.
inline void generate_one(const ManifestRecord& record,
                         const CatalogIndex& index,
                         const std::filesystem::path& output_root,
                         CloneMode mode) {
  const auto content_it = index.contents.find(record.content_id);
  const auto background_it = index.backgrounds.find(record.background_id);
  if (content_it == index.contents.end() ||
      background_it == index.backgrounds.end()) {
    fail(ErrorKind::InvalidArgument,
         "sample " + std::to_string(record.sample_id) +
             ": unknown catalog id");
  }

  RasterImage content = load_image(content_it->second->patch_path);
  BinaryMask gt = load_mask(content_it->second->gt_path);
  RasterImage background = load_image(background_it->second->path);

  if (content.width != gt.width || content.height != gt.height) {
    fail(ErrorKind::InvalidArgument,
         "sample " + std::to_string(record.sample_id) +
             ": content and ground truth dimensions differ");
  }

  content = apply_transform(content, record.transform);
  gt = apply_transform(gt, record.transform);

  if (content.width != background.width ||
      content.height != background.height) {
    fail(ErrorKind::InvalidArgument,
         "sample " + std::to_string(record.sample_id) +
             ": content and background dimensions differ");
  }
  if (content.channels != background.channels) {
    content = to_rgb(content);
    background = to_rgb(background);
  }

  CloneRegion region = interior_region(background.width, background.height);
  CloneRequest req{std::move(content), std::move(background),
                   std::move(region), mode};
  const RasterImage composite = seamless_clone(req);

  save_image_atomic(output_root / record.out_input, composite);
  save_mask_atomic(output_root / record.out_gt, gt);
}

/// Background synthesis: the degradation patch is cloned onto the page-style
/// patch in mixed mode, so page texture and degradation both survive.
inline RasterImage compose_background(const RasterImage& page_style,
                                      const RasterImage& degradation,
                                      CloneMode mode = CloneMode::Mixed) {
  if (page_style.width != degradation.width ||
      page_style.height != degradation.height) {
    fail(ErrorKind::InvalidArgument,
         "compose_background: patch dimensions differ");
  }
  RasterImage source = degradation;
  RasterImage target = page_style;
  if (source.channels != target.channels) {
    source = to_rgb(source);
    target = to_rgb(target);
  }
  CloneRegion region = interior_region(page_style.width, page_style.height);
  CloneRequest req{std::move(source), std::move(target), std::move(region),
                   mode};
  return seamless_clone(req);
}

struct RunSummary {
  std::uint64_t generated = 0;
  std::uint64_t skipped = 0;  // resume: outputs already present
  std::uint64_t failed = 0;
  double wall_seconds = 0.0;
  std::vector<std::pair<std::uint64_t, std::string>> failures;
};

/// Executes a plan: writes the manifest, then renders every record with up
/// to `jobs` workers. Per-sample failures are tallied, not fatal; a manifest
/// write failure is. The resulting tree depends only on (catalog, k, seed).
inline RunSummary run(const GenerationConfig& config,
                      const AssetCatalog& catalog) {
  const auto started = std::chrono::steady_clock::now();
  validate_assets_exist(catalog);
  const std::vector<ManifestRecord> records =
      plan(catalog, config.per_content, config.global_seed);

  std::filesystem::create_directories(config.output_root / "inputs");
  std::filesystem::create_directories(config.output_root / "gts");
  write_manifest(config.output_root / "manifest.jsonl", records);

  const CatalogIndex index(catalog);
  std::atomic<std::size_t> next{0};
  std::atomic<std::uint64_t> done{0};
  RunSummary summary;
  std::mutex failures_mutex;

  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= records.size()) return;
      const ManifestRecord& record = records[i];
      try {
        if (config.resume &&
            std::filesystem::exists(config.output_root / record.out_input) &&
            std::filesystem::exists(config.output_root / record.out_gt)) {
          std::lock_guard<std::mutex> lock(failures_mutex);
          ++summary.skipped;
        } else {
          generate_one(record, index, config.output_root, config.mode);
          std::lock_guard<std::mutex> lock(failures_mutex);
          ++summary.generated;
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(failures_mutex);
        ++summary.failed;
        summary.failures.emplace_back(record.sample_id, e.what());
      }
      const std::uint64_t finished =
          done.fetch_add(1, std::memory_order_relaxed) + 1;
      if (config.on_progress) config.on_progress(finished, records.size());
    }
  };

  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  std::sort(summary.failures.begin(), summary.failures.end());
  summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return summary;
}

/// Loads the catalogs named by the config, then runs.
inline RunSummary run(const GenerationConfig& config) {
  AssetCatalog catalog;
  catalog.contents = load_contents(config.contents_path);
  catalog.backgrounds = load_backgrounds(config.backgrounds_path);
  return run(config, catalog);
}

struct TagCounts {
  std::map<std::string, std::uint64_t> page_styles;
  std::map<std::string, std::uint64_t> degradations;
};

/// Per-tag sample counts for a manifest. Page-style counts sum to the
/// manifest length; degradation counts may exceed it since backgrounds can
/// carry several effects.
inline TagCounts stats(const std::vector<ManifestRecord>& records,
                       const std::vector<BackgroundAsset>& backgrounds) {
  std::unordered_map<std::string, const BackgroundAsset*> by_id;
  for (const BackgroundAsset& b : backgrounds) by_id[b.id] = &b;
  TagCounts counts;
  for (const ManifestRecord& r : records) {
    const auto it = by_id.find(r.background_id);
    if (it == by_id.end()) {
      fail(ErrorKind::InvalidArgument,
           "stats: unknown background id '" + r.background_id + "'");
    }
    ++counts.page_styles[it->second->page_style];
    for (const std::string& tag : it->second->degradations) {
      ++counts.degradations[tag];
    }
  }
  return counts;
}

}  // namespace inkforge
