// Copyright 2026 The iconforge Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance suite: one [PASS]/[FAIL] line per criterion, non-zero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "contracts.hpp"
#include "e2e.hpp"
#include "gradcheck.hpp"
#include "iconforge/aggregate.hpp"
#include "iconforge/eval.hpp"
#include "iconforge/rng.hpp"
#include "iconforge/summarize.hpp"
#include "iconforge/synthgen.hpp"
#include "iconforge/tiler.hpp"
#include "iconforge/toy.hpp"
#include "oracles.hpp"

using namespace iconforge;
namespace fs = std::filesystem;

namespace {

// A criterion returns an empty string on success, otherwise the reason it failed.
using Criterion = std::function<std::string()>;

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

std::string ac1_f_measure() {
  struct Row {
    double p, r, f;
  };
  for (const Row& row : {Row{13.6, 7.1, 12.6}, Row{11.0, 6.0, 10.2}, Row{9.3, 34.2, 10.0}, Row{2.9, 5.6, 3.1},
                         Row{1.1, 1.4, 1.2}}) {
    const double got = 100.0 * eval::f_measure(row.p / 100, row.r / 100, 0.3);
    if (std::fabs(got - row.f) > 0.15) return fmt("P %.1f R %.1f gives %.3f", row.p, row.r, got);
  }
  return "";
}

BBox grid_box(Rng& rng) {
  return BBox{static_cast<double>(rng.uniform_int(0, 4)) * 5, static_cast<double>(rng.uniform_int(0, 4)) * 5,
              static_cast<double>(rng.uniform_int(1, 4)) * 5, static_cast<double>(rng.uniform_int(1, 4)) * 5};
}

std::string ac2_ap_oracle() {
  Rng rng(11);
  std::size_t orderings = 0;
  for (std::size_t nd = 1; nd <= 6; ++nd)
    for (std::size_t ng = 1; ng <= 4; ++ng)
      for (int fixture = 0; fixture < 8; ++fixture) {
        std::vector<BBox> d(nd), g(ng);
        for (auto& b : g) b = grid_box(rng);
        for (auto& b : d)
          b = rng.uniform01() < 0.5 ? g[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(ng) - 1))]
                                    : grid_box(rng);
        std::vector<int> perm(nd);
        std::iota(perm.begin(), perm.end(), 0);
        do {
          std::vector<eval::ScoredBox> sb;
          std::vector<oracle::Det> od;
          for (std::size_t i = 0; i < nd; ++i) {
            const double s = 1.0 - 0.1 * perm[i];
            sb.push_back({d[i], s});
            od.push_back({d[i], s});
          }
          for (auto rule : {eval::MatchRule::at_least, eval::MatchRule::strictly_greater}) {
            const auto hits = oracle::greedy_hits(od, g, 0.5, rule == eval::MatchRule::strictly_greater);
            const double ap = eval::average_precision(sb, g, 0.5, rule).ap;
            if (ap != oracle::brute_ap(hits, ng))
              return fmt("%g dets, %g gts: ap %.17g differs", static_cast<double>(nd), static_cast<double>(ng), ap);
          }
          ++orderings;
        } while (std::next_permutation(perm.begin(), perm.end()));
      }
  return orderings > 0 ? "" : "no orderings enumerated";
}

const toy::ToyData& corpus20() {
  static const toy::ToyData d = toy::make_toy_data(20, 2, 101);
  return d;
}

std::string ac3_contract() {
  const auto pool = synthgen::pool_for_mode(corpus20().icons, synthgen::BaselineMode::none);
  const synthgen::AugmentParams p;
  const auto samples = synthgen::generate_samples(corpus20().corpus, pool, p, 500);
  const auto v = contracts::check(samples, pool, p);
  if (v.boxes == 0) return "no boxes generated";
  if (!v.geometry_ok())
    return fmt("geometry: %g out of bounds, %g bad size, %g overlapping", static_cast<double>(v.out_of_bounds),
               static_cast<double>(v.bad_size), static_cast<double>(v.overlap));
  if (v.entropy || v.contrast)
    return fmt("%g entropy and %g contrast violations", static_cast<double>(v.entropy), static_cast<double>(v.contrast));
  if (v.opaque_icons) return fmt("%g opaque icons", static_cast<double>(v.opaque_icons));
  return "";
}

std::string ac4_ablations() {
  using synthgen::BaselineMode;
  const synthgen::AugmentParams p;
  auto run = [&](BaselineMode m) {
    const auto pool = synthgen::pool_for_mode(corpus20().icons, m);
    return contracts::check(synthgen::generate_samples(corpus20().corpus, pool, p, 120, m), pool, p);
  };
  const auto base = run(BaselineMode::none);
  if (base.textured_background == 0) return "default mode never uses a textured background";

  // random placement skips patch selection, which is the entropy and contrast test together
  const auto rl = run(BaselineMode::random_locations);
  if (!rl.geometry_ok() || rl.opaque_icons || rl.textured_background == 0)
    return "random_locations violates a contract other than placement";
  if (rl.entropy == 0) return "random_locations never lands on texture";

  const auto nt = run(BaselineMode::nontransparent_icons);
  if (!nt.geometry_ok() || nt.entropy || nt.contrast || nt.textured_background == 0)
    return "nontransparent_icons violates a contract other than transparency";
  if (nt.transparent_icons || nt.opaque_icons == 0) return "nontransparent_icons pasted transparent icons";

  const auto bb = run(BaselineMode::blank_background);
  if (!bb.geometry_ok() || bb.entropy || bb.contrast || bb.opaque_icons)
    return "blank_background violates a contract other than background";
  if (bb.textured_background) return "blank_background used a textured background";
  return "";
}

std::string ac5_tiling() {
  for (auto [w, h] : {std::pair{600, 600}, std::pair{1900, 1900}, std::pair{2800, 2800}, std::pair{1000, 3000}}) {
    const auto tiles = tiler::tile_layout(w, h);
    for (int n = 1; n <= 3; ++n) {
      std::vector<tiler::Tile> lv;
      for (const auto& t : tiles)
        if (t.level == n) lv.push_back(t);
      if (lv.size() != static_cast<std::size_t>(n * n)) return fmt("%gx%g level %g: wrong tile count", w, h, n);
      for (const auto& t : lv) {
        if (!t.region.inside(w, h, 1e-6)) return t.id + " leaves the image";
        if ((t.col == 0 && std::fabs(t.region.x) > 1e-9) || (t.row == 0 && std::fabs(t.region.y) > 1e-9) ||
            (t.col == n - 1 && std::fabs(t.region.right() - w) > 1e-6) ||
            (t.row == n - 1 && std::fabs(t.region.bottom() - h) > 1e-6))
          return t.id + " does not reach the image edge";
      }
      for (const auto& a : lv)
        for (const auto& b : lv) {
          if (a.row == b.row && b.col == a.col + 1) {
            const double ov = a.region.right() - b.region.x;
            if (ov <= 0 || std::fabs(ov - 0.1 * a.region.w) > 1.0) return a.id + " / " + b.id + " horizontal overlap";
          }
          if (a.col == b.col && b.row == a.row + 1) {
            const double ov = a.region.bottom() - b.region.y;
            if (ov <= 0 || std::fabs(ov - 0.1 * a.region.h) > 1.0) return a.id + " / " + b.id + " vertical overlap";
          }
        }
    }
  }
  return "";
}

std::string ac6_nms() {
  using aggregate::nms;
  auto same = [](const std::vector<Detection>& a, const std::vector<Detection>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].box != b[i].box || a[i].score != b[i].score) return false;
    return true;
  };
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Detection> dets;
    const auto n = rng.uniform_int(0, 12);
    for (std::int64_t i = 0; i < n; ++i)
      dets.push_back({BBox{static_cast<double>(rng.uniform_int(0, 8)) * 5, static_cast<double>(rng.uniform_int(0, 8)) * 5,
                           static_cast<double>(rng.uniform_int(1, 6)) * 5, static_cast<double>(rng.uniform_int(1, 6)) * 5},
                      static_cast<double>(rng.uniform_int(0, 4)) / 4.0, std::nullopt});
    const double t = std::vector<double>{0.0, 0.1, 0.3, 0.5, 0.9}[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    const auto kept = nms(dets, t);
    for (std::size_t i = 0; i < kept.size(); ++i)
      for (std::size_t j = i + 1; j < kept.size(); ++j)
        if (iou(kept[i].box, kept[j].box) > t) return fmt("trial %g: kept pair above threshold", trial);
    if (!same(nms(kept, t), kept)) return fmt("trial %g: not idempotent", trial);
    std::vector<Detection> expect;
    for (auto i : oracle::brute_nms(dets, t)) expect.push_back(dets[i]);
    if (!same(kept, expect)) return fmt("trial %g: differs from the reference", trial);
  }
  const Detection a{BBox{0, 0, 10, 10}, 0.9, std::nullopt}, b{BBox{5, 0, 10, 10}, 0.8, std::nullopt},
      c{BBox{10, 0, 10, 10}, 0.7, std::nullopt};
  const auto k = nms({c, b, a}, 0.3);
  if (k.size() != 2 || k[0].box != a.box || k[1].box != c.box) return "chain fixture did not keep {A, C}";
  return "";
}

std::string ac7_gradient() {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto r = gradcheck::check(gradcheck::make_fixture(seed));
    if (r.checked == 0) return "no parameters checked";
    if (r.max_rel_error >= 1e-4) return fmt("seed %g: relative error %.3g", static_cast<double>(seed), r.max_rel_error);
  }
  const auto m = gradcheck::memorize(5, 2000);
  if (!(m.final_loss < 0.01)) return fmt("single example loss %.4g after %g steps", m.final_loss, static_cast<double>(m.steps));
  return "";
}

std::string ac8_determinism() {
  const auto dir = fs::temp_directory_path() / "iconforge_acceptance_e2e";
  if (auto step = e2e::pipeline(dir); !step.empty()) return "first run failed at " + step;
  std::map<std::string, std::string> first;
  for (const auto& f : e2e::artifacts()) {
    if (!fs::exists(dir / f)) return "missing " + f;
    first[f] = e2e::slurp(dir / f);
  }
  if (auto step = e2e::pipeline(dir); !step.empty()) return "second run failed at " + step;
  for (const auto& f : e2e::artifacts())
    if (e2e::slurp(dir / f) != first[f]) return f + " differs between runs";
  fs::remove_all(dir);
  return "";
}

std::string ac9_hashtags() {
  using summarize::ClassifiedProposal;
  using summarize::TagScore;
  const std::vector<TagScore> tags{{"a", 0, 0.9}, {"b", 1, 0.8}, {"c", 2, 0.7}};
  const std::vector<double> scores{0.4, 0.9, 0.9, 0.1};
  Rng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<ClassifiedProposal> ps;
    for (int i = 0; i < 4; ++i) {
      std::vector<double> p(3);
      for (auto& v : p) v = static_cast<double>(rng.uniform_int(0, 3));
      const double s = std::accumulate(p.begin(), p.end(), 0.0) + 1.0;
      for (auto& v : p) v /= s;
      ps.push_back({"p" + std::to_string(i), BBox{0, 0, 10, 10}, scores[static_cast<std::size_t>(i)], p});
    }
    const auto h = summarize::select_hashtags(tags, ps);
    if (h.size() != 3) return "wrong number of hashtags";
    for (std::size_t t = 0; t < 3; ++t) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < 4; ++i)
        if (std::pair{ps[i].class_probs[t], ps[i].score} > std::pair{ps[best].class_probs[t], ps[best].score}) best = i;
      if (h[t].proposal != best) return fmt("trial %g tag %g: wrong proposal", trial, static_cast<double>(t));
    }
  }

  // Ten scored pairs against a 10x10 ground-truth box, plus one pair with no
  // ground truth. Hits by hand (IOU strictly above 0.5): 0, 2, 4, 5, 7, 9.
  const BBox gt{0, 0, 10, 10};
  const std::vector<BBox> top1{
      {0, 0, 10, 10},   // 1.0
      {0, 0, 5, 10},    // 0.5 exactly
      {0, 0, 10, 6},    // 0.6
      {5, 0, 10, 10},   // 1/3
      {0, 0, 10, 10},   // 1.0
      {0, 0, 10, 10},   // 1.0
      {0, 0, 10, 5},    // 0.5 exactly
      {1, 0, 10, 10},   // 9/11
      {0, 0, 20, 10},   // 0.5 exactly
      {0, 0, 10, 8}};   // 0.8
  eval::PairBoxes g;
  std::vector<eval::HashtagPrediction> preds;
  for (std::size_t i = 0; i < top1.size(); ++i) {
    const std::string id = "img" + std::to_string(i);
    g[{id, "health"}] = {gt};
    preds.push_back({id, "health", top1[i], {}});
  }
  preds.push_back({"img0", "sport", gt, {}});
  const auto r = eval::evaluate_hashtags(preds, g);
  if (r.pairs != 10 || r.excluded.size() != 1) return "pair bookkeeping is wrong";
  if (r.hits != 6 || r.top1_precision != 60.0) return fmt("top-1 precision %.4g, expected 60", r.top1_precision);
  return "";
}

std::string ac10_scale() {
  const auto data = toy::make_toy_data(100, 2, 303);
  const auto pool = synthgen::pool_for_mode(data.icons, synthgen::BaselineMode::none);
  const auto dir = fs::temp_directory_path() / "iconforge_acceptance_scale";
  fs::remove_all(dir);
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = synthgen::generate_dataset(data.corpus, pool, synthgen::AugmentParams{}, 10000, dir);
  const double minutes = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
  fs::remove_all(dir);
  std::printf("       10000 windows, %zu boxes, %.1f min on %u threads\n", s.boxes, minutes,
              default_thread_count());
  if (s.samples != 10000) return "wrong window count";
  if (minutes >= 30.0) return fmt("took %.1f minutes", minutes);
  return "";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria{
      {"AC1 F-measure reproduces the five detector rows", ac1_f_measure},
      {"AC2 average precision equals the brute-force oracle", ac2_ap_oracle},
      {"AC3 500 windows satisfy the synthetic-data contract", ac3_contract},
      {"AC4 each baseline mode breaks only its own gate", ac4_ablations},
      {"AC5 tiling covers each level with 10% overlap", ac5_tiling},
      {"AC6 NMS fuzz and chain fixture", ac6_nms},
      {"AC7 gradient check and single-example memorization", ac7_gradient},
      {"AC8 pipeline artifacts are byte-identical across runs", ac8_determinism},
      {"AC9 hashtag selection and top-1 precision", ac9_hashtags},
      {"AC10 10K windows from a 100-image corpus in under 30 minutes", ac10_scale},
  };
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    std::string why;
    try {
      why = run();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      std::printf("[PASS] %s\n", name.c_str());
    } else {
      std::printf("[FAIL] %s: %s\n", name.c_str(), why.c_str());
      ++failed;
    }
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
