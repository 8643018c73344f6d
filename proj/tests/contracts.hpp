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

// Re-checks the synthetic-data contract of generated samples from scratch:
// geometry, the entropy and contrast gates, overlap and transparency.

#include <map>
#include <string>
#include <vector>

#include "iconforge/synthgen.hpp"

namespace contracts {

using namespace iconforge;

struct Violations {
  std::size_t boxes = 0;
  std::size_t out_of_bounds = 0;
  std::size_t bad_size = 0;
  std::size_t entropy = 0;   // pre-composite patch entropy above threshold
  std::size_t contrast = 0;  // contrast below threshold
  std::size_t overlap = 0;   // box pairs with IOU > 0
  std::size_t transparent_icons = 0;
  std::size_t opaque_icons = 0;
  std::size_t textured_background = 0;  // samples whose background is not plain white

  bool geometry_ok() const { return out_of_bounds == 0 && bad_size == 0 && overlap == 0; }
};

inline Violations check(const std::vector<synthgen::SyntheticSample>& samples,
                        const std::vector<synthgen::IconAsset>& pool, const synthgen::AugmentParams& p) {
  std::map<std::string, const synthgen::IconAsset*> by_id;
  for (const auto& i : pool) by_id[i.id] = &i;
  Violations v;
  for (const auto& s : samples) {
    const int W = s.window.width(), H = s.window.height();
    for (std::size_t a = 0; a < s.boxes.size(); ++a) {
      const auto& b = s.boxes[a];
      ++v.boxes;
      if (b.box.x < 0 || b.box.y < 0 || b.box.right() > W || b.box.bottom() > H) ++v.out_of_bounds;
      if (b.box.w < p.icon_size_min || b.box.h < p.icon_size_min || b.box.w > p.icon_size_max ||
          b.box.h > p.icon_size_max)
        ++v.bad_size;
      const int px = static_cast<int>(b.patch.x), py = static_cast<int>(b.patch.y), side = static_cast<int>(b.patch.w);
      const auto patch = crop(s.background, px, py, side, side);
      if (patch_entropy(patch, p.entropy) > p.entropy_threshold) ++v.entropy;
      const auto& icon = *by_id.at(b.icon_id);
      const auto fitted = synthgen::fit_icon(icon.image, side);
      if (contrast_score(patch, fitted) < p.contrast_threshold) ++v.contrast;
      (has_transparency(fitted) ? v.transparent_icons : v.opaque_icons)++;
      for (std::size_t c = a + 1; c < s.boxes.size(); ++c)
        if (iou(b.box, s.boxes[c].box) > 0.0) ++v.overlap;
    }
    bool white = true;
    for (auto px : s.background.pixels()) white = white && px == 255;
    if (!white) ++v.textured_background;
  }
  return v;
}

}  // namespace contracts
