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

#include <algorithm>
#include <numeric>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/proposals.hpp"

namespace iconforge::aggregate {

struct AggregateParams {
  double score_threshold = 0.8;
  double iou_threshold = 0.3;
  double containment_threshold = 0.9;
};

/// Keeps detections with score >= t, preserving order.
inline std::vector<Detection> threshold(const std::vector<Detection>& dets, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("threshold must be in [0, 1]");
  std::vector<Detection> out;
  std::copy_if(dets.begin(), dets.end(), std::back_inserter(out), [t](const Detection& d) { return d.score >= t; });
  return out;
}

/// Indices of `dets` ordered by score desc, then area desc, then input order.
inline std::vector<std::size_t> ranking(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
    return dets[a].box.area() > dets[b].box.area();
  });
  return order;
}

/// Greedy non-maximum suppression. Survivors come out in ranking order.
inline std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_thresh) {
  if (!(iou_thresh >= 0.0 && iou_thresh <= 1.0)) throw ValidationError("nms: iou threshold must be in [0, 1]");
  std::vector<Detection> kept;
  for (std::size_t i : ranking(dets)) {
    const auto& d = dets[i];
    const bool suppressed = std::any_of(kept.begin(), kept.end(),
                                        [&](const Detection& k) { return iou(k.box, d.box) > iou_thresh; });
    if (!suppressed) kept.push_back(d);
  }
  return kept;
}

/// Drops any box whose area is covered >= containment_thresh by a strictly
/// larger surviving box. Relative order of survivors is preserved.
inline std::vector<Detection> suppress_contained(const std::vector<Detection>& dets, double containment_thresh) {
  std::vector<std::size_t> by_area(dets.size());
  std::iota(by_area.begin(), by_area.end(), std::size_t{0});
  std::stable_sort(by_area.begin(), by_area.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].box.area() > dets[b].box.area(); });
  std::vector<bool> keep(dets.size(), false);
  std::vector<std::size_t> kept;
  for (std::size_t i : by_area) {
    const bool absorbed = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return dets[k].box.area() > dets[i].box.area() &&
             containment(dets[i].box, dets[k].box) >= containment_thresh;
    });
    if (!absorbed) {
      keep[i] = true;
      kept.push_back(i);
    }
  }
  std::vector<Detection> out;
  for (std::size_t i = 0; i < dets.size(); ++i)
    if (keep[i]) out.push_back(dets[i]);
  return out;
}

/// NMS across all scales, then containment suppression of icon parts.
inline std::vector<Detection> merge_multiscale(const std::vector<Detection>& dets, double iou_thresh = 0.3,
                                               double containment_thresh = 0.9) {
  return suppress_contained(nms(dets, iou_thresh), containment_thresh);
}

/// Full chain: threshold, NMS, containment merge.
inline std::vector<Detection> aggregate(const std::vector<Detection>& dets, const AggregateParams& p = {}) {
  return merge_multiscale(threshold(dets, p.score_threshold), p.iou_threshold, p.containment_threshold);
}

}  // namespace iconforge::aggregate
