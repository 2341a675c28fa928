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

#include <fnmatch.h>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "inkforge/inkforge.hpp"

// Single binary exposing the pipeline stages as subcommands:
//   gt | patch | background | generate | clone | eval | stats
// Exit codes: 0 success, 1 validation or fatal error, 2 partial failure
// (some items of a batch failed). Progress and diagnostics go to stderr;
// machine-readable output goes to files or stdout only.

namespace fs = std::filesystem;
using namespace inkforge;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

bool g_verbose = false;

void log_line(const std::string& message) {
  std::fprintf(stderr, "inkforge: %s\n", message.c_str());
}

// Expands wildcard patterns in the filename component; anything without
// wildcards must name an existing file.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& args) {
  std::vector<fs::path> files;
  for (const std::string& arg : args) {
    if (arg.find_first_of("*?[") == std::string::npos) {
      if (!fs::is_regular_file(arg)) {
        fail(ErrorKind::MissingFile, "input not found: " + arg);
      }
      files.emplace_back(arg);
      continue;
    }
    const fs::path pattern(arg);
    const fs::path dir =
        pattern.parent_path().empty() ? fs::path(".") : pattern.parent_path();
    const std::string name_pattern = pattern.filename().string();
    if (!fs::is_directory(dir)) {
      fail(ErrorKind::MissingFile, "no such directory: " + dir.string());
    }
    std::vector<fs::path> matches;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      const std::string name = entry.path().filename().string();
      if (fnmatch(name_pattern.c_str(), name.c_str(), 0) == 0) {
        matches.push_back(entry.path());
      }
    }
    std::sort(matches.begin(), matches.end());
    if (matches.empty()) {
      fail(ErrorKind::MissingFile, "no files match " + arg);
    }
    files.insert(files.end(), matches.begin(), matches.end());
  }
  return files;
}

struct GtOptions {
  std::vector<std::string> inputs;
  std::string out_dir;
  AdaptiveParams params;
  bool no_despeckle = false;
};

int run_gt(const GtOptions& opt) {
  opt.params.validate();
  const std::vector<fs::path> files = expand_inputs(opt.inputs);
  fs::create_directories(opt.out_dir);
  std::size_t failed = 0;
  for (const fs::path& file : files) {
    try {
      const RasterImage doc = load_image(file);
      BinaryMask mask = adaptive_threshold(to_grayscale(doc), opt.params);
      if (!opt.no_despeckle) mask = despeckle(mask);
      save_mask(fs::path(opt.out_dir) / (file.stem().string() + ".png"), mask);
      if (g_verbose) log_line("gt: " + file.string());
    } catch (const std::exception& e) {
      ++failed;
      log_line(std::string("gt failed: ") + e.what());
    }
  }
  log_line("gt: " + std::to_string(files.size() - failed) + "/" +
           std::to_string(files.size()) + " masks written to " + opt.out_dir);
  return failed == 0 ? kExitOk : kExitPartial;
}

struct PatchOptions {
  std::vector<std::string> inputs;
  std::string out_dir;
  PatchSpec spec;
  bool augment = false;
};

int run_patch(const PatchOptions& opt) {
  opt.spec.validate();
  const std::vector<fs::path> files = expand_inputs(opt.inputs);
  fs::create_directories(opt.out_dir);
  std::size_t failed = 0;
  std::size_t written = 0;
  for (const fs::path& file : files) {
    try {
      const RasterImage img = load_image(file);
      const CropResult result = crop_patches(img, opt.spec);
      if (result.undersized) {
        log_line("warning: " + file.string() + " is smaller than " +
                 std::to_string(opt.spec.size) + "x" +
                 std::to_string(opt.spec.size) + "; no patches");
        continue;
      }
      for (const auto& [offset, patch] : result.patches) {
        const int variants = opt.augment ? 8 : 1;
        for (int t = 0; t < variants; ++t) {
          const RasterImage out =
              t == 0 ? patch : apply_transform(patch, transform_from_index(t));
          char name[128];
          std::snprintf(name, sizeof(name), "%s_x%d_y%d_t%d.png",
                        file.stem().string().c_str(), offset.x, offset.y, t);
          save_image(fs::path(opt.out_dir) / name, out);
          ++written;
        }
      }
    } catch (const std::exception& e) {
      ++failed;
      log_line(std::string("patch failed: ") + e.what());
    }
  }
  log_line("patch: " + std::to_string(written) + " patches written to " +
           opt.out_dir);
  return failed == 0 ? kExitOk : kExitPartial;
}

struct BackgroundOptions {
  std::string pages_path;
  std::string degradations_path;
  int count = 0;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string mode = "mixed";
};

int run_background(const BackgroundOptions& opt) {
  if (opt.count < 1) {
    fail(ErrorKind::InvalidArgument, "background: --count must be >= 1");
  }
  const std::vector<PageAsset> pages = load_pages(opt.pages_path);
  const std::vector<DegradationAsset> degradations =
      load_degradations(opt.degradations_path);
  if (pages.empty() || degradations.empty()) {
    fail(ErrorKind::InvalidArgument,
         "background: pages and degradations catalogs must be non-empty");
  }
  const CloneMode mode =
      opt.mode == "source" ? CloneMode::SourceOnly : CloneMode::Mixed;

  fs::create_directories(opt.out_dir);
  std::vector<BackgroundAsset> catalog;
  std::size_t failed = 0;
  for (int i = 0; i < opt.count; ++i) {
    // Seeded per index: extending --count later leaves earlier outputs alone.
    SplitMix64 stream(mix64(opt.seed, static_cast<std::uint64_t>(i)));
    const PageAsset& page = pages[stream.next_below(pages.size())];
    const DegradationAsset& degradation =
        degradations[stream.next_below(degradations.size())];
    char name[64];
    std::snprintf(name, sizeof(name), "bg_%05d", i);
    try {
      const RasterImage composed = compose_background(
          load_image(page.path), load_image(degradation.path), mode);
      const fs::path out_path = fs::path(opt.out_dir) / (std::string(name) + ".png");
      save_image_atomic(out_path, composed);
      BackgroundAsset asset;
      asset.id = name;
      asset.path = out_path;
      asset.page_style = page.page_style;
      asset.degradations = degradation.degradations;
      catalog.push_back(std::move(asset));
      if (g_verbose) log_line(std::string("background: ") + name);
    } catch (const std::exception& e) {
      ++failed;
      log_line(std::string("background failed (") + name + "): " + e.what());
    }
  }
  save_backgrounds(fs::path(opt.out_dir) / "backgrounds.jsonl", catalog);
  log_line("background: " + std::to_string(catalog.size()) + "/" +
           std::to_string(opt.count) + " backgrounds written to " +
           opt.out_dir);
  return failed == 0 ? kExitOk : kExitPartial;
}

struct GenerateOptions {
  GenerationConfig config;
  std::string mode = "mixed";
};

int run_generate(GenerateOptions& opt) {
  opt.config.mode =
      opt.mode == "source" ? CloneMode::SourceOnly : CloneMode::Mixed;
  std::atomic<std::uint64_t> last_logged{0};
  opt.config.on_progress = [&](std::uint64_t done, std::uint64_t total) {
    const std::uint64_t step = g_verbose ? 1 : std::max<std::uint64_t>(total / 20, 1);
    if (done % step == 0 || done == total) {
      std::uint64_t expected = last_logged.load();
      if (done > expected && last_logged.compare_exchange_strong(expected, done)) {
        log_line("generate: " + std::to_string(done) + "/" +
                 std::to_string(total));
      }
    }
  };

  const RunSummary summary = run(opt.config);
  for (const auto& [sample_id, message] : summary.failures) {
    log_line("sample " + std::to_string(sample_id) + " failed: " + message);
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "generate: %llu generated, %llu skipped, %llu failed in %.1fs",
                static_cast<unsigned long long>(summary.generated),
                static_cast<unsigned long long>(summary.skipped),
                static_cast<unsigned long long>(summary.failed),
                summary.wall_seconds);
  log_line(buf);
  return summary.failed == 0 ? kExitOk : kExitPartial;
}

struct CloneOptions {
  std::string source_path;
  std::string target_path;
  std::string mode = "mixed";
  std::string out_path;
};

int run_clone(const CloneOptions& opt) {
  RasterImage source = load_image(opt.source_path);
  RasterImage target = load_image(opt.target_path);
  if (source.channels != target.channels) {
    source = to_rgb(source);
    target = to_rgb(target);
  }
  if (source.width != target.width || source.height != target.height) {
    fail(ErrorKind::InvalidArgument,
         "clone: source and target dimensions differ");
  }
  CloneRegion region = interior_region(target.width, target.height);
  CloneRequest req{std::move(source), std::move(target), std::move(region),
                   opt.mode == "source" ? CloneMode::SourceOnly
                                        : CloneMode::Mixed};
  save_image(opt.out_path, seamless_clone(req));
  log_line("clone: wrote " + opt.out_path);
  return kExitOk;
}

struct EvalOptions {
  std::string pred_dir;
  std::string gt_dir;
  std::string out_path;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
};

int run_eval(const EvalOptions& opt) {
  const CorpusReport report =
      evaluate_corpus(opt.pred_dir, opt.gt_dir, opt.jobs);
  for (const std::string& stem : report.unmatched_pred) {
    log_line("warning: prediction without ground truth: " + stem);
  }
  for (const std::string& stem : report.unmatched_gt) {
    log_line("warning: ground truth without prediction: " + stem);
  }
  const std::string table = format_report_table(report);
  std::fputs(table.c_str(), stdout);

  std::ofstream out(opt.out_path);
  if (!out) {
    fail(ErrorKind::Io, "cannot write " + opt.out_path);
  }
  out << table;
  out.close();
  fs::path jsonl(opt.out_path);
  jsonl.replace_extension(".jsonl");
  write_report_jsonl(jsonl, report);
  log_line("eval: report written to " + opt.out_path + " and " +
           jsonl.string());
  return kExitOk;
}

struct StatsOptions {
  std::string manifest_path;
  std::string backgrounds_path;
};

int run_stats(const StatsOptions& opt) {
  const std::vector<ManifestRecord> records = read_manifest(opt.manifest_path);
  const std::vector<BackgroundAsset> backgrounds =
      load_backgrounds(opt.backgrounds_path);
  const TagCounts counts = stats(records, backgrounds);
  std::printf("%-26s %10s\n", "page_style", "samples");
  for (const auto& [tag, count] : counts.page_styles) {
    std::printf("%-26s %10llu\n", tag.c_str(),
                static_cast<unsigned long long>(count));
  }
  std::printf("\n%-26s %10s\n", "degradation", "samples");
  for (const auto& [tag, count] : counts.degradations) {
    std::printf("%-26s %10llu\n", tag.c_str(),
                static_cast<unsigned long long>(count));
  }
  std::printf("\ntotal samples %llu\n",
              static_cast<unsigned long long>(records.size()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthetic handwritten-document binarization datasets: "
               "ground-truth extraction, seamless-clone composition, and "
               "DIBCO-style evaluation"};
  app.require_subcommand(1);
  app.add_flag("-v,--verbose", g_verbose, "Per-item progress on stderr");

  GtOptions gt_opt;
  CLI::App* gt_cmd = app.add_subcommand(
      "gt", "Extract ground-truth masks from clean document scans");
  gt_cmd->add_option("inputs", gt_opt.inputs, "Input images (globs allowed)")
      ->required();
  gt_cmd->add_option("-o,--out", gt_opt.out_dir, "Output directory")
      ->envname("INKFORGE_OUTPUT_ROOT")
      ->required();
  gt_cmd->add_option("--window", gt_opt.params.window,
                     "Adaptive window side (odd, >= 3)");
  gt_cmd->add_option("--offset", gt_opt.params.offset,
                     "Offset subtracted from the local mean");
  std::string gt_method = "mean";
  gt_cmd->add_option("--method", gt_method, "Local statistic")
      ->check(CLI::IsMember({"mean", "gaussian"}));
  gt_cmd->add_flag("--no-despeckle", gt_opt.no_despeckle,
                   "Keep isolated foreground pixels");

  PatchOptions patch_opt;
  CLI::App* patch_cmd = app.add_subcommand(
      "patch", "Crop images into fixed-size patches, optionally augmented");
  patch_cmd->add_option("inputs", patch_opt.inputs, "Input images (globs allowed)")
      ->required();
  patch_cmd->add_option("-o,--out", patch_opt.out_dir, "Output directory")
      ->envname("INKFORGE_OUTPUT_ROOT")
      ->required();
  patch_cmd->add_option("--size", patch_opt.spec.size, "Patch side in pixels");
  patch_cmd->add_option("--stride", patch_opt.spec.stride, "Anchor stride");
  patch_cmd->add_flag("--augment", patch_opt.augment,
                      "Write all 8 dihedral variants per patch");

  BackgroundOptions bg_opt;
  CLI::App* bg_cmd = app.add_subcommand(
      "background", "Compose photorealistic backgrounds from page styles and "
                    "degradation patches");
  bg_cmd->add_option("--pages", bg_opt.pages_path, "Page-style catalog (JSONL)")
      ->required();
  bg_cmd->add_option("--degradations", bg_opt.degradations_path,
                     "Degradation catalog (JSONL)")
      ->required();
  bg_cmd->add_option("--count", bg_opt.count, "Backgrounds to compose")
      ->required();
  bg_cmd->add_option("--seed", bg_opt.seed, "Pairing seed");
  bg_cmd->add_option("-o,--out", bg_opt.out_dir, "Output directory")
      ->envname("INKFORGE_OUTPUT_ROOT")
      ->required();
  bg_cmd->add_option("--mode", bg_opt.mode, "Clone mode")
      ->check(CLI::IsMember({"mixed", "source"}));

  GenerateOptions gen_opt;
  CLI::App* gen_cmd = app.add_subcommand(
      "generate", "Render the dataset: every content over k sampled backgrounds");
  gen_cmd->add_option("--contents", gen_opt.config.contents_path,
                      "Content catalog (JSONL)")
      ->required();
  gen_cmd->add_option("--backgrounds", gen_opt.config.backgrounds_path,
                      "Background catalog (JSONL)")
      ->required();
  gen_cmd->add_option("-k,--per-content", gen_opt.config.per_content,
                      "Backgrounds sampled per content");
  gen_cmd->add_option("--seed", gen_opt.config.global_seed, "Global seed");
  gen_cmd->add_option("-o,--out", gen_opt.config.output_root, "Dataset root")
      ->envname("INKFORGE_OUTPUT_ROOT")
      ->required();
  gen_cmd->add_option("-j,--jobs", gen_opt.config.jobs, "Worker threads")
      ->default_val(static_cast<int>(std::thread::hardware_concurrency()));
  gen_cmd->add_flag("--resume", gen_opt.config.resume,
                    "Regenerate only missing samples");
  gen_cmd->add_option("--mode", gen_opt.mode, "Clone mode")
      ->check(CLI::IsMember({"mixed", "source"}));

  CloneOptions clone_opt;
  CLI::App* clone_cmd = app.add_subcommand(
      "clone", "Seamless-clone one image onto another (debugging aid)");
  clone_cmd->add_option("--source", clone_opt.source_path, "Source image")
      ->required();
  clone_cmd->add_option("--target", clone_opt.target_path, "Target image")
      ->required();
  clone_cmd->add_option("--mode", clone_opt.mode, "Clone mode")
      ->check(CLI::IsMember({"mixed", "source"}));
  clone_cmd->add_option("-o,--out", clone_opt.out_path, "Output image")
      ->required();

  EvalOptions eval_opt;
  CLI::App* eval_cmd = app.add_subcommand(
      "eval", "Score binarization outputs against ground truths");
  eval_cmd->add_option("--pred", eval_opt.pred_dir, "Prediction directory")
      ->required();
  eval_cmd->add_option("--gt", eval_opt.gt_dir, "Ground-truth directory")
      ->required();
  eval_cmd->add_option("-o,--out", eval_opt.out_path,
                       "Report path (a .jsonl sibling is written too)")
      ->required();
  eval_cmd->add_option("-j,--jobs", eval_opt.jobs, "Worker threads");

  StatsOptions stats_opt;
  CLI::App* stats_cmd = app.add_subcommand(
      "stats", "Per-tag sample counts for a generated manifest");
  stats_cmd->add_option("--manifest", stats_opt.manifest_path, "manifest.jsonl")
      ->required();
  stats_cmd->add_option("--backgrounds", stats_opt.backgrounds_path,
                        "Background catalog (JSONL)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (*gt_cmd) {
      gt_opt.params.method = gt_method == "gaussian"
                                 ? AdaptiveParams::Method::Gaussian
                                 : AdaptiveParams::Method::Mean;
      return run_gt(gt_opt);
    }
    if (*patch_cmd) return run_patch(patch_opt);
    if (*bg_cmd) return run_background(bg_opt);
    if (*gen_cmd) return run_generate(gen_opt);
    if (*clone_cmd) return run_clone(clone_opt);
    if (*eval_cmd) return run_eval(eval_opt);
    if (*stats_cmd) return run_stats(stats_opt);
  } catch (const Error& e) {
    log_line(std::string("error: ") + e.what());
    return kExitError;
  } catch (const std::exception& e) {
    log_line(std::string("unexpected error: ") + e.what());
    return kExitError;
  }
  return kExitError;
}
