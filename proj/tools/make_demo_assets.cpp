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

// Builds the bundled demo asset set: procedurally drawn handwriting-like
// content patches with extracted ground truths, page-style patches for every
// page-style tag, degradation patches for every degradation tag, and
// seamlessly composed backgrounds. Everything derives from one fixed seed,
// so the committed assets can be regenerated bit-identically.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "inkforge/inkforge.hpp"

namespace fs = std::filesystem;
using namespace inkforge;

namespace {

constexpr int kPatchSize = 128;
constexpr std::uint64_t kAssetSeed = 0x1f0c5eedull;

double uniform(SplitMix64& rng) {
  return static_cast<double>(rng.next() >> 11) * 0x1.0p-53;
}

double range(SplitMix64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform(rng);
}

double gaussian(SplitMix64& rng) {
  const double u1 = 1.0 - uniform(rng);
  const double u2 = uniform(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

void stamp_disk(RasterImage& img, double cx, double cy, double radius,
                double ink) {
  const int x0 = std::max(0, static_cast<int>(cx - radius - 1));
  const int x1 = std::min(img.width - 1, static_cast<int>(cx + radius + 1));
  const int y0 = std::max(0, static_cast<int>(cy - radius - 1));
  const int y1 = std::min(img.height - 1, static_cast<int>(cy + radius + 1));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (dx * dx + dy * dy > radius * radius) continue;
      for (int c = 0; c < img.channels; ++c) {
        img.at(x, y, c) = std::min(img.at(x, y, c), ink);
      }
    }
  }
}

// A meandering pen stroke confined to the margin box; the margin keeps ink
// off the one-pixel clone boundary.
void draw_stroke(RasterImage& img, SplitMix64& rng, double margin) {
  double x = range(rng, margin, img.width - margin);
  double y = range(rng, margin, img.height - margin);
  double angle = range(rng, 0.0, 6.283185307179586);
  const double radius = range(rng, 0.8, 1.7);
  const double ink = range(rng, 0.08, 0.32);
  const int steps = 40 + static_cast<int>(range(rng, 0.0, 80.0));
  for (int s = 0; s < steps; ++s) {
    angle += range(rng, -0.55, 0.55);
    x += 0.8 * std::cos(angle);
    y += 0.8 * std::sin(angle);
    if (x < margin || x > img.width - margin) {
      x = std::clamp(x, margin, static_cast<double>(img.width) - margin);
      angle = 3.141592653589793 - angle;
    }
    if (y < margin || y > img.height - margin) {
      y = std::clamp(y, margin, static_cast<double>(img.height) - margin);
      angle = -angle;
    }
    stamp_disk(img, x, y, radius, ink);
  }
}

RasterImage paper_base(int width, int height, int channels, SplitMix64& rng,
                       double r, double g, double b) {
  RasterImage img = RasterImage::make(width, height, channels);
  const double tone[3] = {r, g, b};
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double grain = range(rng, -0.015, 0.015);
      for (int c = 0; c < channels; ++c) {
        img.at(x, y, c) = std::clamp(tone[c] + grain, 0.0, 1.0);
      }
    }
  }
  return img;
}

RasterImage draw_content(SplitMix64& rng, int strokes) {
  RasterImage img = paper_base(kPatchSize, kPatchSize, 1, rng, 0.975, 0.975, 0.975);
  for (int s = 0; s < strokes; ++s) draw_stroke(img, rng, 6.0);
  return img;
}

void blend_hline(RasterImage& img, int y, const double color[3], double alpha) {
  if (y < 0 || y >= img.height) return;
  for (int x = 0; x < img.width; ++x) {
    for (int c = 0; c < 3; ++c) {
      img.at(x, y, c) = img.at(x, y, c) * (1.0 - alpha) + color[c] * alpha;
    }
  }
}

void blend_vline(RasterImage& img, int x, const double color[3], double alpha) {
  if (x < 0 || x >= img.width) return;
  for (int y = 0; y < img.height; ++y) {
    for (int c = 0; c < 3; ++c) {
      img.at(x, y, c) = img.at(x, y, c) * (1.0 - alpha) + color[c] * alpha;
    }
  }
}

RasterImage draw_page(const std::string& style, SplitMix64& rng) {
  RasterImage img = paper_base(kPatchSize, kPatchSize, 3, rng, 0.94, 0.92, 0.87);
  const double rule[3] = {0.56, 0.63, 0.82};
  if (style == "uniform_ruled_lines") {
    for (int y = 10; y < img.height; y += 14) blend_hline(img, y, rule, 0.65);
  } else if (style == "nonuniform_ruled_lines") {
    int y = 8;
    while (y < img.height) {
      blend_hline(img, y, rule, 0.65);
      y += 9 + static_cast<int>(range(rng, 0.0, 12.0));
    }
  } else if (style == "grid_lines") {
    for (int y = 10; y < img.height; y += 14) blend_hline(img, y, rule, 0.55);
    for (int x = 10; x < img.width; x += 14) blend_vline(img, x, rule, 0.55);
  } else if (style == "staff_notation_lines") {
    const double staff[3] = {0.35, 0.33, 0.32};
    for (int base = 14; base + 12 < img.height; base += 30) {
      for (int k = 0; k < 5; ++k) blend_hline(img, base + 3 * k, staff, 0.7);
    }
  } else if (style == "partially_blank") {
    for (int y = 10; y < img.height / 2; y += 14) blend_hline(img, y, rule, 0.65);
  }
  // "plain" keeps the bare paper.
  return img;
}

RasterImage draw_degradation(const std::string& effect, SplitMix64& rng) {
  RasterImage img = paper_base(kPatchSize, kPatchSize, 3, rng, 0.93, 0.91, 0.86);
  const int w = img.width, h = img.height;
  if (effect == "shadow_gradients") {
    // Off-center shadow bowl with curvature; a flat global ramp would be
    // harmonic and vanish under the seamless blend.
    const double cx = 0.25 * w, cy = 0.3 * h, span = 0.35 * w;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        const double f = 1.0 - 0.55 * std::exp(-d2 / (2.0 * span * span));
        for (int c = 0; c < 3; ++c) img.at(x, y, c) *= f;
      }
    }
  } else if (effect == "oily_patches") {
    for (int blob = 0; blob < 3; ++blob) {
      const double cx = range(rng, 20, w - 20), cy = range(rng, 20, h - 20);
      const double radius = range(rng, 12, 22);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
          const double atten = 0.28 * std::exp(-d2 / (2 * radius * radius));
          img.at(x, y, 0) *= 1.0 - atten;
          img.at(x, y, 1) *= 1.0 - atten;
          img.at(x, y, 2) *= 1.0 - 0.6 * atten;  // oily patches skew yellow
        }
      }
    }
  } else if (effect == "ink_bleed_through") {
    RasterImage ghost = RasterImage::make(w, h, 1, 1.0);
    SplitMix64 ghost_rng(rng.next());
    for (int s = 0; s < 5; ++s) draw_stroke(ghost, ghost_rng, 4.0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        // Mirrored faint show-through of the reverse side.
        const double g = ghost.at(w - 1 - x, y);
        const double f = 1.0 - 0.3 * (1.0 - g);
        for (int c = 0; c < 3; ++c) img.at(x, y, c) *= f;
      }
    }
  } else if (effect == "crumpled_pages") {
    for (int crease = 0; crease < 5; ++crease) {
      const double px = range(rng, 0, w), py = range(rng, 0, h);
      const double theta = range(rng, 0, 3.141592653589793);
      const double nx = std::cos(theta), ny = std::sin(theta);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double d = (x - px) * nx + (y - py) * ny;
          const double f = 1.0 + (d > 0 ? 0.06 : -0.12) * std::exp(-std::abs(d) / 3.0);
          for (int c = 0; c < 3; ++c) {
            img.at(x, y, c) = std::clamp(img.at(x, y, c) * f, 0.0, 1.0);
          }
        }
      }
    }
  } else if (effect == "nonuniform_illumination") {
    const double phase_x = range(rng, 0, 6.28), phase_y = range(rng, 0, 6.28);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double sx = std::sin(6.283185307179586 * x / w + phase_x);
        const double sy = std::sin(6.283185307179586 * y / h + phase_y);
        const double f = 0.72 + 0.28 * (0.5 + 0.5 * sx * sy);
        for (int c = 0; c < 3; ++c) img.at(x, y, c) *= f;
      }
    }
  } else if (effect == "noisy_background") {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double noise = 0.06 * gaussian(rng);
        for (int c = 0; c < 3; ++c) {
          img.at(x, y, c) = std::clamp(img.at(x, y, c) + noise, 0.0, 1.0);
        }
      }
    }
  } else if (effect == "liquid_stains") {
    for (int stain = 0; stain < 2; ++stain) {
      const double cx = range(rng, 25, w - 25), cy = range(rng, 25, h - 25);
      const double radius = range(rng, 16, 26);
      for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
          const double d = std::sqrt((x - cx) * (x - cx) + (y - cy) * (y - cy));
          double f = 1.0;
          if (d < radius - 2.0) {
            f = 0.93;  // slightly darker soaked interior
          } else if (d < radius + 1.5) {
            f = 0.68;  // dark drying ring
          }
          img.at(x, y, 0) *= f;
          img.at(x, y, 1) *= f * 0.98;
          img.at(x, y, 2) *= f * 0.92;
        }
      }
    }
  } else if (effect == "poor_contrast") {
    for (double& v : img.data) v = std::clamp(0.52 + (v - 0.9) * 0.3, 0.0, 1.0);
  } else if (effect == "punched_stapled_torn") {
    for (int hole = 0; hole < 3; ++hole) {
      stamp_disk(img, 12.0, h * (hole + 1) / 4.0, 4.5, 0.12);
    }
    for (int y = 0; y < 22; ++y) {
      for (int x = w - 22 + y; x < w; ++x) {
        const double f = 0.45 + 0.4 * (x - (w - 22 + y)) / 22.0;
        for (int c = 0; c < 3; ++c) img.at(x, y, c) *= f;
      }
    }
  }
  return img;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate the bundled demo asset set"};
  std::string out_dir = "assets/demo";
  int content_count = 20;
  int background_count = 12;
  app.add_option("-o,--out", out_dir, "Output directory");
  app.add_option("--contents", content_count, "Content patches to draw");
  app.add_option("--backgrounds", background_count, "Backgrounds to compose");
  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path root(out_dir);
    fs::create_directories(root / "contents");
    fs::create_directories(root / "gts");
    fs::create_directories(root / "pages");
    fs::create_directories(root / "degradations");
    fs::create_directories(root / "backgrounds");

    // Content patches and their extracted ground truths.
    std::ofstream contents_jsonl(root / "contents.jsonl");
    for (int i = 0; i < content_count; ++i) {
      SplitMix64 rng(mix64(kAssetSeed, 1000 + i));
      const RasterImage content = draw_content(rng, 5 + i % 4);
      const BinaryMask gt = extract_ground_truth(content);
      char id[32];
      std::snprintf(id, sizeof(id), "content_%02d", i);
      save_image(root / "contents" / (std::string(id) + ".png"), content);
      save_mask(root / "gts" / (std::string(id) + ".png"), gt);
      nlohmann::ordered_json record;
      record["content_id"] = id;
      record["patch_path"] = std::string("contents/") + id + ".png";
      record["gt_path"] = std::string("gts/") + id + ".png";
      contents_jsonl << record.dump() << "\n";
    }

    // One page patch per page style.
    std::vector<PageAsset> pages;
    std::ofstream pages_jsonl(root / "pages.jsonl");
    for (std::size_t i = 0; i < kPageStyles.size(); ++i) {
      const std::string style(kPageStyles[i]);
      SplitMix64 rng(mix64(kAssetSeed, 2000 + i));
      const RasterImage page = draw_page(style, rng);
      const std::string name = "page_" + style;
      save_image(root / "pages" / (name + ".png"), page);
      pages.push_back({name, root / "pages" / (name + ".png"), style});
      nlohmann::ordered_json record;
      record["page_id"] = name;
      record["path"] = "pages/" + name + ".png";
      record["page_style"] = style;
      pages_jsonl << record.dump() << "\n";
    }

    // One degradation patch per effect.
    std::vector<DegradationAsset> degradations;
    std::ofstream degradations_jsonl(root / "degradations.jsonl");
    for (std::size_t i = 0; i < kDegradationEffects.size(); ++i) {
      const std::string effect(kDegradationEffects[i]);
      SplitMix64 rng(mix64(kAssetSeed, 3000 + i));
      const RasterImage patch = draw_degradation(effect, rng);
      const std::string name = "deg_" + effect;
      save_image(root / "degradations" / (name + ".png"), patch);
      degradations.push_back(
          {name, root / "degradations" / (name + ".png"), {effect}});
      nlohmann::ordered_json record;
      record["degradation_id"] = name;
      record["path"] = "degradations/" + name + ".png";
      record["degradations"] = {effect};
      degradations_jsonl << record.dump() << "\n";
    }

    // Composed backgrounds cycling through both catalogs so a dozen outputs
    // already cover every page style and degradation.
    std::vector<BackgroundAsset> backgrounds;
    for (int i = 0; i < background_count; ++i) {
      const PageAsset& page = pages[i % pages.size()];
      const DegradationAsset& degradation =
          degradations[i % degradations.size()];
      const RasterImage composed = compose_background(
          load_image(page.path), load_image(degradation.path));
      char name[32];
      std::snprintf(name, sizeof(name), "bg_%02d", i);
      save_image(root / "backgrounds" / (std::string(name) + ".png"), composed);
      BackgroundAsset asset;
      asset.id = name;
      asset.path = root / "backgrounds" / (std::string(name) + ".png");
      asset.page_style = page.page_style;
      asset.degradations = degradation.degradations;
      backgrounds.push_back(std::move(asset));
    }
    save_backgrounds(root / "backgrounds.jsonl", backgrounds);

    // A small full-length document for the gt/patch walkthrough.
    {
      SplitMix64 rng(mix64(kAssetSeed, 4000));
      RasterImage doc = RasterImage::make(256, 384, 1);
      for (int y = 0; y < doc.height; ++y) {
        for (int x = 0; x < doc.width; ++x) {
          doc.at(x, y) = std::clamp(0.975 + range(rng, -0.015, 0.015), 0.0, 1.0);
        }
      }
      for (int s = 0; s < 26; ++s) draw_stroke(doc, rng, 6.0);
      save_image(root / "demo_doc.png", doc);
    }

    std::fprintf(stderr, "demo assets written to %s\n", out_dir.c_str());
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "make_demo_assets: %s\n", e.what());
    return 1;
  }
}
