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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "inkforge/corpus_eval.hpp"
#include "inkforge/metrics.hpp"
#include "inkforge/png_io.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using Catch::Approx;
using namespace inkforge;
using inkforge::test::TempDir;
using inkforge::test::bce_bruteforce;
using inkforge::test::component_count;
using inkforge::test::confusion_bruteforce;
using inkforge::test::f_bruteforce;
using inkforge::test::pf_bruteforce;
using inkforge::test::psnr_bruteforce;
using inkforge::test::random_mask;

namespace {

BinaryMask mask_with_counts(int tp, int fp, int fn, int total, bool pred) {
  // Lays tp, then fp, then fn cells out row-major over a 10x(total/10) grid.
  const int width = 10;
  const int height = total / 10;
  BinaryMask mask = BinaryMask::make(width, height);
  for (int i = 0; i < tp; ++i) mask.data[i] = 1;
  for (int i = tp; i < tp + fp; ++i) mask.data[i] = pred ? 1 : 0;
  for (int i = tp + fp; i < tp + fp + fn; ++i) mask.data[i] = pred ? 0 : 1;
  return mask;
}

}  // namespace

TEST_CASE("confusion") {
  SECTION("perfect prediction") {
    const BinaryMask gt = mask_with_counts(10, 0, 0, 100, false);
    const ConfusionCounts c = confusion(gt, gt);
    REQUIRE(c.tp == 10);
    REQUIRE(c.tn == 90);
    REQUIRE(c.fp == 0);
    REQUIRE(c.fn == 0);
  }
  SECTION("all-background prediction has no positives") {
    const BinaryMask gt = mask_with_counts(10, 0, 0, 100, false);
    const BinaryMask pred = BinaryMask::make(10, 10);
    const ConfusionCounts c = confusion(pred, gt);
    REQUIRE(c.tp == 0);
    REQUIRE(c.fp == 0);
    REQUIRE(c.fn == 10);
  }
  SECTION("argument swap exchanges fp and fn") {
    std::mt19937_64 rng(301);
    const BinaryMask a = random_mask(rng, 4, 4);
    const BinaryMask b = random_mask(rng, 4, 4);
    const ConfusionCounts ab = confusion(a, b);
    const ConfusionCounts ba = confusion(b, a);
    REQUIRE(ab.tp == ba.tp);
    REQUIRE(ab.tn == ba.tn);
    REQUIRE(ab.fp == ba.fn);
    REQUIRE(ab.fn == ba.fp);
  }
  SECTION("dimension mismatch") {
    REQUIRE_THROWS_AS(
        confusion(BinaryMask::make(2, 2), BinaryMask::make(3, 2)), Error);
  }
}

TEST_CASE("f_score") {
  SECTION("perfect nonempty prediction scores 1") {
    REQUIRE(f_score({10, 0, 0, 90}) == 1.0);
  }
  SECTION("balanced errors") {
    REQUIRE(f_score({1, 1, 1, 0}) == 0.5);
  }
  SECTION("no true positives scores 0") {
    REQUIRE(f_score({0, 3, 4, 0}) == 0.0);
    REQUIRE(f_score({0, 0, 0, 16}) == 0.0);
  }
}

TEST_CASE("skeletonize") {
  SECTION("empty mask stays empty") {
    REQUIRE(skeletonize(BinaryMask::make(5, 5)).foreground_count() == 0);
  }
  SECTION("single pixel survives") {
    BinaryMask mask = BinaryMask::make(5, 5);
    mask.set(2, 2, true);
    REQUIRE(skeletonize(mask) == mask);
  }
  SECTION("3x10 bar thins to the hand-traced centerline") {
    // 14x7 canvas, bar covering x in [2,12), y in [2,5). The independent
    // two-subiteration trace reduces it to the 7-pixel midline y=3,
    // x in [3,10) (endpoints erode by one on each side).
    BinaryMask bar = BinaryMask::make(14, 7);
    for (int y = 2; y < 5; ++y) {
      for (int x = 2; x < 12; ++x) bar.set(x, y, true);
    }
    BinaryMask expected = BinaryMask::make(14, 7);
    for (int x = 3; x < 10; ++x) expected.set(x, 3, true);
    const BinaryMask thin = skeletonize(bar);
    REQUIRE(thin == expected);
    REQUIRE(component_count(thin) == component_count(bar));
  }
  SECTION("containment and idempotence on random masks") {
    std::mt19937_64 rng(302);
    for (int trial = 0; trial < 40; ++trial) {
      const BinaryMask mask = random_mask(rng, 16, 16, 0.45);
      const BinaryMask thin = skeletonize(mask);
      for (std::size_t i = 0; i < mask.data.size(); ++i) {
        if (thin.data[i]) REQUIRE(mask.data[i]);
      }
      REQUIRE(skeletonize(thin) == thin);
    }
  }
}

TEST_CASE("pf_score") {
  SECTION("perfect prediction scores 1") {
    BinaryMask gt = BinaryMask::make(14, 7);
    for (int y = 2; y < 5; ++y) {
      for (int x = 2; x < 12; ++x) gt.set(x, y, true);
    }
    REQUIRE(pf_score(gt, gt) == 1.0);
  }
  SECTION("predicting exactly the skeleton of a thicker truth scores 1") {
    BinaryMask gt = BinaryMask::make(14, 7);
    for (int y = 2; y < 5; ++y) {
      for (int x = 2; x < 12; ++x) gt.set(x, y, true);
    }
    const BinaryMask pred = skeletonize(gt);
    REQUIRE(pred.foreground_count() < gt.foreground_count());
    REQUIRE(pf_score(pred, gt) == 1.0);
  }
  SECTION("half the skeleton with clean precision gives 2/3") {
    // An already-thin line is its own skeleton.
    BinaryMask gt = BinaryMask::make(12, 5);
    for (int x = 2; x < 10; ++x) gt.set(x, 2, true);
    REQUIRE(skeletonize(gt) == gt);
    BinaryMask pred = BinaryMask::make(12, 5);
    for (int x = 2; x < 6; ++x) pred.set(x, 2, true);
    REQUIRE(pf_score(pred, gt) == Approx(2.0 / 3.0).margin(1e-12));
  }
}

TEST_CASE("psnr") {
  SECTION("one differing pixel in 100 gives 20 dB") {
    const BinaryMask gt = BinaryMask::make(10, 10);
    BinaryMask pred = BinaryMask::make(10, 10);
    pred.set(3, 3, true);
    REQUIRE(psnr(pred, gt) == Approx(20.0).margin(1e-9));
  }
  SECTION("identical masks are infinite") {
    const BinaryMask mask = mask_with_counts(7, 0, 0, 100, false);
    REQUIRE(std::isinf(psnr(mask, mask)));
  }
  SECTION("completely different masks give 0 dB") {
    const BinaryMask fg = BinaryMask::make(10, 10, true);
    const BinaryMask bg = BinaryMask::make(10, 10, false);
    REQUIRE(psnr(fg, bg) == Approx(0.0).margin(1e-12));
  }
  SECTION("symmetric in its arguments") {
    std::mt19937_64 rng(303);
    const BinaryMask a = random_mask(rng, 8, 8);
    const BinaryMask b = random_mask(rng, 8, 8);
    REQUIRE(psnr(a, b) == psnr(b, a));
  }
}

TEST_CASE("bce") {
  SECTION("uniform half gives ln 2") {
    const BinaryMask gt = mask_with_counts(37, 0, 0, 100, false);
    ProbabilityMap prob{10, 10, std::vector<double>(100, 0.5)};
    REQUIRE(bce(prob, gt) == Approx(std::log(2.0)).margin(1e-12));
  }
  SECTION("perfect probabilities sit at the clamp floor") {
    const BinaryMask gt = mask_with_counts(42, 0, 0, 100, false);
    ProbabilityMap prob{10, 10, std::vector<double>(100)};
    for (std::size_t i = 0; i < 100; ++i) prob.p[i] = gt.data[i] ? 1.0 : 0.0;
    REQUIRE(bce(prob, gt) < 1e-6);
    REQUIRE(bce(prob, gt) > 0.0);
  }
  SECTION("two-pixel case evaluates the formula directly") {
    BinaryMask gt = BinaryMask::make(2, 1);
    gt.set(0, 0, true);
    ProbabilityMap prob{2, 1, {0.9, 0.2}};
    const double expected = -(std::log(0.9) + std::log(1.0 - 0.2)) / 2.0;
    REQUIRE(bce(prob, gt) == Approx(expected).margin(1e-12));
  }
  SECTION("probabilities outside [0,1] are rejected") {
    BinaryMask gt = BinaryMask::make(2, 1);
    ProbabilityMap prob{2, 1, {0.5, 1.5}};
    REQUIRE_THROWS_AS(bce(prob, gt), Error);
  }
}

TEST_CASE("metric oracle equivalence on random masks") {
  std::mt19937_64 rng(304);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const BinaryMask pred = random_mask(rng, 8, 8, 0.4);
    const BinaryMask gt = random_mask(rng, 8, 8, 0.4);

    const ConfusionCounts fast = confusion(pred, gt);
    const ConfusionCounts brute = confusion_bruteforce(pred, gt);
    REQUIRE(fast.tp == brute.tp);
    REQUIRE(fast.fp == brute.fp);
    REQUIRE(fast.fn == brute.fn);
    REQUIRE(fast.tn == brute.tn);
    REQUIRE(fast.total() == 64);

    REQUIRE(f_score(fast) == f_bruteforce(pred, gt));
    REQUIRE(pf_score(pred, gt) == pf_bruteforce(pred, gt, skeletonize(gt)));

    const double fast_psnr = psnr(pred, gt);
    const double brute_psnr = psnr_bruteforce(pred, gt);
    if (std::isinf(brute_psnr)) {
      REQUIRE(std::isinf(fast_psnr));
    } else {
      REQUIRE(fast_psnr == Approx(brute_psnr).margin(1e-9));
    }

    ProbabilityMap prob{8, 8, std::vector<double>(64)};
    for (double& p : prob.p) p = unit(rng);
    REQUIRE(bce(prob, gt) == Approx(bce_bruteforce(prob, gt)).margin(1e-9));

    REQUIRE(f_score(fast) >= 0.0);
    REQUIRE(f_score(fast) <= 1.0);
    REQUIRE(pf_score(pred, gt) >= 0.0);
    REQUIRE(pf_score(pred, gt) <= 1.0);
    REQUIRE(fast_psnr >= 0.0);
    REQUIRE(bce(prob, gt) >= 0.0);
  }
}

TEST_CASE("perfect prediction fixpoint") {
  std::mt19937_64 rng(305);
  const BinaryMask mask = random_mask(rng, 9, 9, 0.3);
  REQUIRE(f_score(confusion(mask, mask)) == 1.0);
  REQUIRE(pf_score(mask, mask) == 1.0);
  REQUIRE(std::isinf(psnr(mask, mask)));
}

TEST_CASE("evaluate_corpus") {
  SECTION("single identical pair") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path / "pred");
    std::filesystem::create_directories(tmp.path / "gt");
    const BinaryMask mask = mask_with_counts(12, 0, 0, 100, false);
    save_mask(tmp.path / "pred" / "a.png", mask);
    save_mask(tmp.path / "gt" / "a.png", mask);
    const CorpusReport report =
        evaluate_corpus(tmp.path / "pred", tmp.path / "gt");
    REQUIRE(report.entries.size() == 1);
    REQUIRE(report.mean_f_score == 1.0);
    REQUIRE(report.mean_pf_score == 1.0);
    REQUIRE(report.psnr_excluded == 1);
    REQUIRE(report.mean_psnr == 0.0);
  }
  SECTION("two pairs average their scores") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path / "pred");
    std::filesystem::create_directories(tmp.path / "gt");
    // F = 0.4: tp=2, fp=3, fn=3; F = 0.6: tp=3, fp=2, fn=2.
    save_mask(tmp.path / "pred" / "a.png", mask_with_counts(2, 3, 3, 100, true));
    save_mask(tmp.path / "gt" / "a.png", mask_with_counts(2, 3, 3, 100, false));
    save_mask(tmp.path / "pred" / "b.png", mask_with_counts(3, 2, 2, 100, true));
    save_mask(tmp.path / "gt" / "b.png", mask_with_counts(3, 2, 2, 100, false));
    const CorpusReport report =
        evaluate_corpus(tmp.path / "pred", tmp.path / "gt");
    REQUIRE(report.entries.size() == 2);
    REQUIRE(report.entries[0].stem == "a");
    REQUIRE(report.entries[0].report.f_score == Approx(0.4).margin(1e-12));
    REQUIRE(report.entries[1].report.f_score == Approx(0.6).margin(1e-12));
    REQUIRE(report.mean_f_score == Approx(0.5).margin(1e-12));
  }
  SECTION("disjoint stems fail naming both sides") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path / "pred");
    std::filesystem::create_directories(tmp.path / "gt");
    const BinaryMask mask = BinaryMask::make(4, 4);
    save_mask(tmp.path / "pred" / "a.png", mask);
    save_mask(tmp.path / "gt" / "b.png", mask);
    try {
      evaluate_corpus(tmp.path / "pred", tmp.path / "gt");
      FAIL("expected an error");
    } catch (const Error& e) {
      const std::string message = e.what();
      REQUIRE(message.find("pred") != std::string::npos);
      REQUIRE(message.find("gt") != std::string::npos);
    }
  }
  SECTION("one-sided stems are listed but scoring proceeds") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path / "pred");
    std::filesystem::create_directories(tmp.path / "gt");
    const BinaryMask mask = mask_with_counts(5, 0, 0, 100, false);
    save_mask(tmp.path / "pred" / "a.png", mask);
    save_mask(tmp.path / "gt" / "a.png", mask);
    save_mask(tmp.path / "pred" / "extra.png", mask);
    save_mask(tmp.path / "gt" / "orphan.png", mask);
    const CorpusReport report =
        evaluate_corpus(tmp.path / "pred", tmp.path / "gt");
    REQUIRE(report.entries.size() == 1);
    REQUIRE(report.unmatched_pred == std::vector<std::string>{"extra"});
    REQUIRE(report.unmatched_gt == std::vector<std::string>{"orphan"});
  }
  SECTION("worker count does not change the report") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path / "pred");
    std::filesystem::create_directories(tmp.path / "gt");
    std::mt19937_64 rng(306);
    for (int i = 0; i < 6; ++i) {
      const std::string name = "img" + std::to_string(i) + ".png";
      save_mask(tmp.path / "pred" / name, random_mask(rng, 10, 10));
      save_mask(tmp.path / "gt" / name, random_mask(rng, 10, 10));
    }
    const CorpusReport seq = evaluate_corpus(tmp.path / "pred", tmp.path / "gt", 1);
    const CorpusReport par = evaluate_corpus(tmp.path / "pred", tmp.path / "gt", 4);
    REQUIRE(seq.entries.size() == par.entries.size());
    REQUIRE(seq.mean_f_score == par.mean_f_score);
    REQUIRE(seq.mean_pf_score == par.mean_pf_score);
    REQUIRE(seq.mean_psnr == par.mean_psnr);
    REQUIRE(seq.mean_bce == par.mean_bce);
    for (std::size_t i = 0; i < seq.entries.size(); ++i) {
      REQUIRE(seq.entries[i].stem == par.entries[i].stem);
      REQUIRE(seq.entries[i].report.f_score == par.entries[i].report.f_score);
    }
  }
  SECTION("report formats") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path / "pred");
    std::filesystem::create_directories(tmp.path / "gt");
    const BinaryMask mask = mask_with_counts(12, 0, 0, 100, false);
    save_mask(tmp.path / "pred" / "a.png", mask);
    save_mask(tmp.path / "gt" / "a.png", mask);
    const CorpusReport report =
        evaluate_corpus(tmp.path / "pred", tmp.path / "gt");
    const std::string table = format_report_table(report);
    REQUIRE(table.find("F-score") != std::string::npos);
    REQUIRE(table.find("PF-score") != std::string::npos);
    REQUIRE(table.find("PSNR") != std::string::npos);
    REQUIRE(table.find("skeleton") != std::string::npos);
    write_report_jsonl(tmp.path / "report.jsonl", report);
    std::ifstream in(tmp.path / "report.jsonl");
    std::string line;
    REQUIRE(std::getline(in, line));
    const auto j = nlohmann::json::parse(line);
    REQUIRE(j.at("stem") == "a");
    REQUIRE(j.at("f_score") == 1.0);
    REQUIRE(j.at("psnr").is_null());
  }
}
