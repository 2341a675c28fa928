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

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "inkforge/error.hpp"
#include "inkforge/raster.hpp"

namespace inkforge {

/// One planned dataset sample. Output paths are relative to the dataset
/// root (the directory holding manifest.jsonl). The seed serializes as a
/// decimal string because 64-bit values do not survive JSON numbers.
struct ManifestRecord {
  std::uint64_t sample_id = 0;
  std::string content_id;
  std::string background_id;
  Transform transform;
  std::uint64_t seed = 0;
  std::string out_input;
  std::string out_gt;
};

namespace detail {

inline nlohmann::ordered_json manifest_record_to_json(
    const ManifestRecord& r) {
  nlohmann::ordered_json j;
  j["sample_id"] = r.sample_id;
  j["content_id"] = r.content_id;
  j["background_id"] = r.background_id;
  j["rotation"] = r.transform.rotation_degrees();
  j["hflip"] = r.transform.hflip;
  j["seed"] = std::to_string(r.seed);
  j["out_input"] = r.out_input;
  j["out_gt"] = r.out_gt;
  return j;
}

inline std::uint64_t parse_seed(const std::string& text,
                                const std::filesystem::path& path) {
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    fail(ErrorKind::Format, path.string() + ": bad seed '" + text + "'");
  }
  return value;
}

}  // namespace detail

/// Atomic write: the manifest appears complete or not at all.
inline void write_manifest(const std::filesystem::path& path,
                           const std::vector<ManifestRecord>& records) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) {
      fail(ErrorKind::Io, "cannot write " + tmp.string());
    }
    for (const ManifestRecord& r : records) {
      out << detail::manifest_record_to_json(r).dump() << "\n";
    }
    out.flush();
    if (!out) {
      fail(ErrorKind::Io, "failed writing " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    fail(ErrorKind::Io, "cannot move manifest into place: " + ec.message());
  }
}

inline std::vector<ManifestRecord> read_manifest(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    fail(ErrorKind::MissingFile, "cannot open " + path.string());
  }
  std::vector<ManifestRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      fail(ErrorKind::Format, path.string() + ":" + std::to_string(line_no) +
                                  ": invalid JSON record");
    }
    try {
      ManifestRecord r;
      r.sample_id = j.at("sample_id").get<std::uint64_t>();
      r.content_id = j.at("content_id").get<std::string>();
      r.background_id = j.at("background_id").get<std::string>();
      r.transform = Transform::from_degrees(j.at("rotation").get<int>(),
                                            j.at("hflip").get<bool>());
      r.seed = detail::parse_seed(j.at("seed").get<std::string>(), path);
      r.out_input = j.at("out_input").get<std::string>();
      r.out_gt = j.at("out_gt").get<std::string>();
      records.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Format, path.string() + ":" + std::to_string(line_no) +
                                  ": " + e.what());
    }
  }
  return records;
}

}  // namespace inkforge
