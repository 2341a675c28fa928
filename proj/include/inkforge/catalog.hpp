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
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "inkforge/error.hpp"

// Asset catalogs are JSON Lines files, one asset per line. Paths inside a
// catalog are resolved relative to the catalog file's directory, so asset
// bundles stay relocatable.

namespace inkforge {

/// Page-style vocabulary for background assets.
inline constexpr std::array<std::string_view, 6> kPageStyles = {
    "plain",
    "uniform_ruled_lines",
    "nonuniform_ruled_lines",
    "grid_lines",
    "staff_notation_lines",
    "partially_blank",
};

/// Degradation-effect vocabulary for background assets.
inline constexpr std::array<std::string_view, 9> kDegradationEffects = {
    "shadow_gradients",
    "oily_patches",
    "ink_bleed_through",
    "crumpled_pages",
    "nonuniform_illumination",
    "noisy_background",
    "liquid_stains",
    "poor_contrast",
    "punched_stapled_torn",
};

inline bool is_page_style(std::string_view tag) {
  return std::find(kPageStyles.begin(), kPageStyles.end(), tag) !=
         kPageStyles.end();
}

inline bool is_degradation_effect(std::string_view tag) {
  return std::find(kDegradationEffects.begin(), kDegradationEffects.end(),
                   tag) != kDegradationEffects.end();
}

struct ContentAsset {
  std::string id;
  std::filesystem::path patch_path;
  std::filesystem::path gt_path;
};

struct BackgroundAsset {
  std::string id;
  std::filesystem::path path;
  std::string page_style;
  std::vector<std::string> degradations;
};

struct PageAsset {
  std::string id;
  std::filesystem::path path;
  std::string page_style;
};

struct DegradationAsset {
  std::string id;
  std::filesystem::path path;
  std::vector<std::string> degradations;
};

struct AssetCatalog {
  std::vector<ContentAsset> contents;
  std::vector<BackgroundAsset> backgrounds;
};

namespace detail {

inline void for_each_jsonl_record(
    const std::filesystem::path& path,
    const std::function<void(const nlohmann::json&)>& fn) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::MissingFile, "cannot open " + path.string());
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded() || !record.is_object()) {
      fail(ErrorKind::Format, path.string() + ":" + std::to_string(line_no) +
                                  ": invalid JSON record");
    }
    fn(record);
  }
}

inline std::string require_string(const nlohmann::json& record,
                                  const char* key,
                                  const std::filesystem::path& path) {
  if (!record.contains(key) || !record[key].is_string()) {
    fail(ErrorKind::Format,
         path.string() + ": record missing string field '" + key + "'");
  }
  return record[key].get<std::string>();
}

inline std::filesystem::path resolve(const std::filesystem::path& base,
                                     const std::string& p) {
  std::filesystem::path candidate(p);
  return candidate.is_absolute() ? candidate : base / candidate;
}

inline void check_unique_ids(const std::vector<std::string>& ids,
                             const std::filesystem::path& path) {
  std::unordered_set<std::string> seen;
  for (const std::string& id : ids) {
    if (!seen.insert(id).second) {
      fail(ErrorKind::InvalidArgument,
           path.string() + ": duplicate id '" + id + "'");
    }
  }
}

inline std::vector<std::string> read_degradations(
    const nlohmann::json& record, const std::filesystem::path& path) {
  if (!record.contains("degradations") || !record["degradations"].is_array()) {
    fail(ErrorKind::Format,
         path.string() + ": record missing array field 'degradations'");
  }
  std::vector<std::string> tags;
  for (const auto& tag : record["degradations"]) {
    if (!tag.is_string()) {
      fail(ErrorKind::Format, path.string() + ": degradation tags must be strings");
    }
    tags.push_back(tag.get<std::string>());
    if (!is_degradation_effect(tags.back())) {
      fail(ErrorKind::InvalidArgument,
           path.string() + ": unknown degradation tag '" + tags.back() + "'");
    }
  }
  return tags;
}

}  // namespace detail

inline std::vector<ContentAsset> load_contents(
    const std::filesystem::path& path) {
  const std::filesystem::path base = path.parent_path();
  std::vector<ContentAsset> contents;
  std::vector<std::string> ids;
  detail::for_each_jsonl_record(path, [&](const nlohmann::json& record) {
    ContentAsset asset;
    asset.id = detail::require_string(record, "content_id", path);
    asset.patch_path =
        detail::resolve(base, detail::require_string(record, "patch_path", path));
    asset.gt_path =
        detail::resolve(base, detail::require_string(record, "gt_path", path));
    ids.push_back(asset.id);
    contents.push_back(std::move(asset));
  });
  detail::check_unique_ids(ids, path);
  return contents;
}

inline std::vector<BackgroundAsset> load_backgrounds(
    const std::filesystem::path& path) {
  const std::filesystem::path base = path.parent_path();
  std::vector<BackgroundAsset> backgrounds;
  std::vector<std::string> ids;
  detail::for_each_jsonl_record(path, [&](const nlohmann::json& record) {
    BackgroundAsset asset;
    asset.id = detail::require_string(record, "background_id", path);
    asset.path =
        detail::resolve(base, detail::require_string(record, "path", path));
    asset.page_style = detail::require_string(record, "page_style", path);
    if (!is_page_style(asset.page_style)) {
      fail(ErrorKind::InvalidArgument,
           path.string() + ": unknown page style '" + asset.page_style + "'");
    }
    asset.degradations = detail::read_degradations(record, path);
    ids.push_back(asset.id);
    backgrounds.push_back(std::move(asset));
  });
  detail::check_unique_ids(ids, path);
  return backgrounds;
}

inline std::vector<PageAsset> load_pages(const std::filesystem::path& path) {
  const std::filesystem::path base = path.parent_path();
  std::vector<PageAsset> pages;
  std::vector<std::string> ids;
  detail::for_each_jsonl_record(path, [&](const nlohmann::json& record) {
    PageAsset asset;
    asset.id = detail::require_string(record, "page_id", path);
    asset.path =
        detail::resolve(base, detail::require_string(record, "path", path));
    asset.page_style = detail::require_string(record, "page_style", path);
    if (!is_page_style(asset.page_style)) {
      fail(ErrorKind::InvalidArgument,
           path.string() + ": unknown page style '" + asset.page_style + "'");
    }
    ids.push_back(asset.id);
    pages.push_back(std::move(asset));
  });
  detail::check_unique_ids(ids, path);
  return pages;
}

inline std::vector<DegradationAsset> load_degradations(
    const std::filesystem::path& path) {
  const std::filesystem::path base = path.parent_path();
  std::vector<DegradationAsset> assets;
  std::vector<std::string> ids;
  detail::for_each_jsonl_record(path, [&](const nlohmann::json& record) {
    DegradationAsset asset;
    asset.id = detail::require_string(record, "degradation_id", path);
    asset.path =
        detail::resolve(base, detail::require_string(record, "path", path));
    asset.degradations = detail::read_degradations(record, path);
    ids.push_back(asset.id);
    assets.push_back(std::move(asset));
  });
  detail::check_unique_ids(ids, path);
  return assets;
}

inline void save_backgrounds(const std::filesystem::path& path,
                             const std::vector<BackgroundAsset>& backgrounds) {
  std::ofstream out(path);
  if (!out) {
    fail(ErrorKind::Io, "cannot write " + path.string());
  }
  const std::filesystem::path base = path.parent_path();
  for (const BackgroundAsset& asset : backgrounds) {
    nlohmann::ordered_json record;
    record["background_id"] = asset.id;
    record["path"] = asset.path.lexically_proximate(base).generic_string();
    record["page_style"] = asset.page_style;
    record["degradations"] = asset.degradations;
    out << record.dump() << "\n";
  }
  if (!out) {
    fail(ErrorKind::Io, "failed writing " + path.string());
  }
}

/// Every asset path must exist before generation starts; planning itself
/// never touches the filesystem.
inline void validate_assets_exist(const AssetCatalog& catalog) {
  for (const ContentAsset& c : catalog.contents) {
    if (!std::filesystem::exists(c.patch_path)) {
      fail(ErrorKind::MissingFile, "content asset missing: " + c.patch_path.string());
    }
    if (!std::filesystem::exists(c.gt_path)) {
      fail(ErrorKind::MissingFile, "ground truth missing: " + c.gt_path.string());
    }
  }
  for (const BackgroundAsset& b : catalog.backgrounds) {
    if (!std::filesystem::exists(b.path)) {
      fail(ErrorKind::MissingFile, "background asset missing: " + b.path.string());
    }
  }
}

}  // namespace inkforge
