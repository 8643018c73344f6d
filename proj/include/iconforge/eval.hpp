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

#pragma once

// Detection metrics: VOC-style greedy matching, precision / recall, F-beta,
// all-points interpolated AP, plus the hashtag and annotator-consistency
// protocols built on top of them.

#include <algorithm>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/jsonl.hpp"

namespace iconforge::eval {

struct EvalConfig {
  double iou_match = 0.5;
  double beta = 0.3;

  void validate() const {
    if (!(iou_match > 0.0 && iou_match <= 1.0)) throw ValidationError("iou_match must be in (0, 1]");
    if (!(beta > 0.0)) throw ValidationError("beta must be positive");
  }
};

/// Whether an IOU equal to the threshold counts as a hit.
enum class MatchRule { at_least, strictly_greater };

inline bool passes(double overlap, double thresh, MatchRule rule) {
  return rule == MatchRule::at_least ? overlap >= thresh : overlap > thresh;
}

struct ScoredBox {
  BBox box;
  double score = 1.0;
};

struct MatchResult {
  std::vector<bool> det_tp;
  std::vector<bool> gt_matched;

  std::size_t tp() const { return static_cast<std::size_t>(std::count(det_tp.begin(), det_tp.end(), true)); }
  std::size_t fp() const { return det_tp.size() - tp(); }
  std::size_t fn() const {
    return gt_matched.size() - static_cast<std::size_t>(std::count(gt_matched.begin(), gt_matched.end(), true));
  }
};

/// Greedy matching of detections (already in descending score order): each
/// takes the still-unmatched ground truth of highest IOU if it passes.
inline MatchResult match(std::span<const BBox> dets, std::span<const BBox> gts, double iou_match,
                         MatchRule rule = MatchRule::at_least) {
  MatchResult r{std::vector<bool>(dets.size(), false), std::vector<bool>(gts.size(), false)};
  for (std::size_t d = 0; d < dets.size(); ++d) {
    double best = -1.0;
    std::size_t best_g = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (r.gt_matched[g]) continue;
      const double o = iou(dets[d], gts[g]);
      if (o > best) {
        best = o;
        best_g = g;
      }
    }
    if (best_g < gts.size() && passes(best, iou_match, rule)) {
      r.det_tp[d] = true;
      r.gt_matched[best_g] = true;
    }
  }
  return r;
}

/// F-beta of fractional precision and recall; 0 when both are 0.
inline double f_measure(double prec, double rec, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * prec + rec;
  if (denom <= 0.0) return 0.0;
  return (1.0 + b2) * prec * rec / denom;
}

struct CurvePoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct ApResult {
  double ap = 0.0;
  std::vector<CurvePoint> curve;  // one point per ranked detection
};

/// All-points interpolated AP from TP flags in rank order and the number of
/// positives: precision is made non-increasing from the right and integrated
/// over recall.
inline ApResult ap_from_ranked_hits(const std::vector<bool>& hits, std::size_t n_positive) {
  ApResult res;
  if (n_positive == 0) return res;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < hits.size(); ++i) {
    if (hits[i]) ++tp;
    res.curve.push_back({static_cast<double>(tp) / n_positive, static_cast<double>(tp) / (i + 1)});
  }
  std::vector<double> mrec{0.0}, mpre{0.0};
  for (const auto& p : res.curve) {
    mrec.push_back(p.recall);
    mpre.push_back(p.precision);
  }
  mrec.push_back(1.0);
  mpre.push_back(0.0);
  for (std::size_t i = mpre.size() - 1; i > 0; --i) mpre[i - 1] = std::max(mpre[i - 1], mpre[i]);
  for (std::size_t i = 1; i < mrec.size(); ++i)
    if (mrec[i] != mrec[i - 1]) res.ap += (mrec[i] - mrec[i - 1]) * mpre[i];
  return res;
}

/// Indices ordered by descending score; ties keep input order.
inline std::vector<std::size_t> rank_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

using ImageBoxes = std::map<std::string, std::vector<BBox>>;
using ImageDetections = std::map<std::string, std::vector<ScoredBox>>;

/// Dataset-level AP: all detections ranked together, each matched greedily
/// against the ground truth of its own image.
inline ApResult average_precision(const ImageDetections& dets, const ImageBoxes& gts, double iou_match = 0.5,
                                  MatchRule rule = MatchRule::at_least) {
  struct Ref {
    const std::string* image;
    const ScoredBox* det;
  };
  std::vector<Ref> all;
  std::vector<double> scores;
  for (const auto& [img, ds] : dets) {
    for (const auto& d : ds) {
      all.push_back({&img, &d});
      scores.push_back(d.score);
    }
  }
  std::map<std::string, std::vector<bool>> used;
  std::size_t n_pos = 0;
  for (const auto& [img, gs] : gts) {
    used[img].assign(gs.size(), false);
    n_pos += gs.size();
  }
  std::vector<bool> hits;
  for (std::size_t i : rank_by_score(scores)) {
    const auto& ref = all[i];
    auto git = gts.find(*ref.image);
    bool hit = false;
    if (git != gts.end()) {
      auto& u = used[*ref.image];
      double best = -1.0;
      std::size_t best_g = u.size();
      for (std::size_t g = 0; g < u.size(); ++g) {
        if (u[g]) continue;
        const double o = iou(ref.det->box, git->second[g]);
        if (o > best) {
          best = o;
          best_g = g;
        }
      }
      if (best_g < u.size() && passes(best, iou_match, rule)) {
        u[best_g] = true;
        hit = true;
      }
    }
    hits.push_back(hit);
  }
  return ap_from_ranked_hits(hits, n_pos);
}

inline ApResult average_precision(std::span<const ScoredBox> dets, std::span<const BBox> gts,
                                  double iou_match = 0.5, MatchRule rule = MatchRule::at_least) {
  ImageDetections d{{"", std::vector<ScoredBox>(dets.begin(), dets.end())}};
  ImageBoxes g{{"", std::vector<BBox>(gts.begin(), gts.end())}};
  return average_precision(d, g, iou_match, rule);
}

struct ImageCounts {
  std::string image_id;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Percentages throughout.
struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double map = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<ImageCounts> per_image;
  std::vector<CurvePoint> curve;
  std::vector<std::string> unknown_image_ids;           // predicted, no ground truth
  std::vector<std::string> images_without_predictions;  // ground truth, nothing predicted
};

inline std::vector<BBox> ranked_boxes(const std::vector<ScoredBox>& ds) {
  std::vector<double> scores;
  for (const auto& d : ds) scores.push_back(d.score);
  std::vector<BBox> out;
  for (std::size_t i : rank_by_score(scores)) out.push_back(ds[i].box);
  return out;
}

/// Class-agnostic evaluation of final proposals against ground truth.
inline EvalReport evaluate_proposals(const ImageDetections& preds, const ImageBoxes& gts,
                                     const EvalConfig& cfg = {}) {
  cfg.validate();
  EvalReport r;
  ImageDetections known;
  for (const auto& [img, ds] : preds) {
    if (gts.count(img)) known.emplace(img, ds);
    else r.unknown_image_ids.push_back(img);
  }
  for (const auto& [img, gs] : gts) {
    auto it = known.find(img);
    const std::vector<BBox> dets = it == known.end() ? std::vector<BBox>{} : ranked_boxes(it->second);
    if (it == known.end()) r.images_without_predictions.push_back(img);
    const auto m = match(dets, gs, cfg.iou_match, MatchRule::at_least);
    r.per_image.push_back({img, m.tp(), m.fp(), m.fn()});
    r.tp += m.tp();
    r.fp += m.fp();
    r.fn += m.fn();
  }
  const double p = r.tp + r.fp ? static_cast<double>(r.tp) / (r.tp + r.fp) : 0.0;
  const double rc = r.tp + r.fn ? static_cast<double>(r.tp) / (r.tp + r.fn) : 0.0;
  r.precision = 100.0 * p;
  r.recall = 100.0 * rc;
  r.f_beta = 100.0 * f_measure(p, rc, cfg.beta);
  auto ap = average_precision(known, gts, cfg.iou_match, MatchRule::at_least);
  r.map = 100.0 * ap.ap;
  r.curve = std::move(ap.curve);
  return r;
}

struct HashtagPrediction {
  std::string image_id;
  std::string tag;
  BBox top1;
  std::vector<ScoredBox> ranked;  // optional full proposal list for mAP
};

struct HashtagReport {
  double top1_precision = 0.0;  // percent
  double map = 0.0;             // percent
  std::size_t pairs = 0;
  std::size_t hits = 0;
  std::vector<std::pair<std::string, std::string>> excluded;  // pairs with no ground truth
};

using PairBoxes = std::map<std::pair<std::string, std::string>, std::vector<BBox>>;

/// A hashtag is a hit when it overlaps some ground-truth box with IOU
/// strictly above the threshold.
inline HashtagReport evaluate_hashtags(const std::vector<HashtagPrediction>& preds, const PairBoxes& gts,
                                       double iou_thresh = 0.5) {
  HashtagReport r;
  double ap_sum = 0.0;
  for (const auto& p : preds) {
    auto it = gts.find({p.image_id, p.tag});
    if (it == gts.end() || it->second.empty()) {
      r.excluded.emplace_back(p.image_id, p.tag);
      continue;
    }
    ++r.pairs;
    const bool hit = std::any_of(it->second.begin(), it->second.end(),
                                 [&](const BBox& g) { return iou(p.top1, g) > iou_thresh; });
    if (hit) ++r.hits;
    const std::vector<ScoredBox> ranked = p.ranked.empty() ? std::vector<ScoredBox>{{p.top1, 1.0}} : p.ranked;
    ap_sum += average_precision(ranked, it->second, iou_thresh, MatchRule::strictly_greater).ap;
  }
  if (r.pairs) {
    r.top1_precision = 100.0 * static_cast<double>(r.hits) / r.pairs;
    r.map = 100.0 * ap_sum / r.pairs;
  }
  return r;
}

struct AnnotatorSets {
  std::string image_id;
  std::vector<BBox> reference;
  std::vector<std::vector<BBox>> annotators;
};

struct ConsistencyReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_beta = 0.0;
  double map = 0.0;
  std::size_t comparisons = 0;
};

/// Each extra annotator is scored against the reference set with unit
/// scores; metrics are averaged over every (image, annotator) comparison.
inline ConsistencyReport consistency(const std::vector<AnnotatorSets>& images, const EvalConfig& cfg = {}) {
  cfg.validate();
  ConsistencyReport r;
  for (const auto& img : images) {
    for (const auto& ann : img.annotators) {
      const auto m = match(ann, img.reference, cfg.iou_match, MatchRule::at_least);
      const double p = ann.empty() ? 0.0 : static_cast<double>(m.tp()) / ann.size();
      const double rc = img.reference.empty() ? 0.0 : static_cast<double>(m.tp()) / img.reference.size();
      std::vector<ScoredBox> scored;
      for (const auto& b : ann) scored.push_back({b, 1.0});
      r.precision += p;
      r.recall += rc;
      r.f_beta += f_measure(p, rc, cfg.beta);
      r.map += average_precision(scored, img.reference, cfg.iou_match, MatchRule::at_least).ap;
      ++r.comparisons;
    }
  }
  if (r.comparisons) {
    const double n = static_cast<double>(r.comparisons);
    r.precision *= 100.0 / n;
    r.recall *= 100.0 / n;
    r.f_beta *= 100.0 / n;
    r.map *= 100.0 / n;
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline json to_json(const EvalReport& r) {
  json per = json::array();
  for (const auto& c : r.per_image) per.push_back({{"image_id", c.image_id}, {"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}});
  json curve = json::array();
  for (const auto& c : r.curve) curve.push_back(json::array({c.recall, c.precision}));
  return json{{"schema_version", kSchemaVersion},
              {"mode", "proposals"},
              {"precision", r.precision},
              {"recall", r.recall},
              {"f_beta", r.f_beta},
              {"map", r.map},
              {"tp", r.tp},
              {"fp", r.fp},
              {"fn", r.fn},
              {"per_image", std::move(per)},
              {"curve", std::move(curve)},
              {"unknown_image_ids", r.unknown_image_ids},
              {"images_without_predictions", r.images_without_predictions}};
}

inline json to_json(const HashtagReport& r) {
  json excluded = json::array();
  for (const auto& [img, tag] : r.excluded) excluded.push_back({{"image_id", img}, {"tag", tag}});
  return json{{"schema_version", kSchemaVersion}, {"mode", "hashtags"}, {"top1_precision", r.top1_precision},
              {"map", r.map},                       {"pairs", r.pairs},   {"hits", r.hits},
              {"excluded", std::move(excluded)}};
}

inline json to_json(const ConsistencyReport& r) {
  return json{{"schema_version", kSchemaVersion}, {"mode", "consistency"}, {"precision", r.precision},
              {"recall", r.recall},                 {"f_beta", r.f_beta},    {"map", r.map},
              {"comparisons", r.comparisons}};
}

}  // namespace iconforge::eval
