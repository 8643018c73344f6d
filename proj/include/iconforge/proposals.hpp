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

// Detector boundary: detections produced by an external network are read
// from JSONL and mapped back into image coordinates; a non-neural proposer
// stands in when no network output is available.

#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/imaging.hpp"
#include "iconforge/jsonl.hpp"
#include "iconforge/tiler.hpp"

namespace iconforge {

struct Detection {
  BBox box;
  double score = 0.0;
  std::optional<std::vector<double>> class_probs;
};

/// Throws ValidationError when the detection breaks its invariants.
/// `class_count` of 0 accepts any probability vector length.
inline void validate_detection(const Detection& d, std::size_t class_count = 0) {
  if (!std::isfinite(d.score) || d.score < 0.0 || d.score > 1.0)
    throw ValidationError("score " + std::to_string(d.score) + " outside [0, 1]");
  if (!d.box.valid()) throw ValidationError("box must have positive width and height");
  if (d.class_probs) {
    const auto& p = *d.class_probs;
    if (class_count != 0 && p.size() != class_count)
      throw ValidationError("class_probs has " + std::to_string(p.size()) + " entries, expected " +
                            std::to_string(class_count));
    double sum = 0.0;
    for (double v : p) {
      if (!std::isfinite(v) || v < 0.0) throw ValidationError("class_probs must be nonnegative");
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-6) throw ValidationError("class_probs sum to " + std::to_string(sum) + ", not 1");
  }
}

inline BBox box_from_json(const json& rec) {
  return BBox{require<double>(rec, "x"), require<double>(rec, "y"), require<double>(rec, "w"),
              require<double>(rec, "h")};
}

inline json box_to_json(const BBox& b) { return json{{"x", b.x}, {"y", b.y}, {"w", b.w}, {"h", b.h}}; }

}  // namespace iconforge

namespace iconforge::proposals {

inline constexpr std::size_t kDefaultClassCount = 391;

/// Reads per-tile detections (JSONL {tile_id, x, y, w, h, score, class_probs?})
/// and returns them in image coordinates, in file order.
inline std::vector<Detection> ingest_detections(const std::filesystem::path& file, const tiler::TileIndex& index,
                                                std::size_t class_count = 0) {
  std::vector<Detection> out;
  for_each_jsonl(file, [&](const json& rec, std::size_t) {
    const auto id = require<std::string>(rec, "tile_id");
    const auto& tile = index.find(id);
    Detection d;
    d.box = box_from_json(rec);
    d.score = require<double>(rec, "score");
    if (rec.contains("class_probs") && !rec["class_probs"].is_null())
      d.class_probs = require<std::vector<double>>(rec, "class_probs");
    validate_detection(d, class_count);
    d.box = tiler::unmap(d.box, tile);
    out.push_back(std::move(d));
  });
  return out;
}

inline json detection_record(const Detection& d, const std::string& tile_id) {
  json j{{"schema_version", kSchemaVersion}, {"tile_id", tile_id}, {"x", d.box.x}, {"y", d.box.y},
         {"w", d.box.w},                      {"h", d.box.h},       {"score", d.score}};
  if (d.class_probs) j["class_probs"] = *d.class_probs;
  return j;
}

struct BaselineParams {
  CannyParams canny;
  int dilate_iterations = 2;
  double min_side = 15.0;
  double max_side = 580.0;
};

inline std::vector<std::uint8_t> dilate3x3(const std::vector<std::uint8_t>& m, int w, int h) {
  std::vector<std::uint8_t> out(m.size(), 0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::uint8_t v = 0;
      for (int dy = -1; dy <= 1 && !v; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx >= 0 && ny >= 0 && nx < w && ny < h && m[static_cast<std::size_t>(ny) * w + nx]) {
            v = 1;
            break;
          }
        }
      }
      out[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  return out;
}

/// Edge map -> dilation -> 8-connected components -> component boxes.
/// Score is the share of all tile edge pixels that fall inside the box.
inline std::vector<Detection> baseline_propose(const RasterImage& tile, const BaselineParams& params = {}) {
  const auto edges = canny(tile, params.canny);
  const int w = edges.width, h = edges.height;
  const std::size_t total_edges = edges.count();
  if (total_edges == 0) return {};

  std::vector<std::uint8_t> mask(edges.values.size());
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = edges.values[i] > 0.0f;
  for (int it = 0; it < params.dilate_iterations; ++it) mask = dilate3x3(mask, w, h);

  std::vector<int> label(mask.size(), -1);
  std::vector<Detection> out;
  std::vector<std::size_t> stack;
  int next_label = 0;
  for (std::size_t seed = 0; seed < mask.size(); ++seed) {
    if (!mask[seed] || label[seed] >= 0) continue;
    int x0 = w, y0 = h, x1 = -1, y1 = -1;
    stack.push_back(seed);
    label[seed] = next_label;
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x);
      y1 = std::max(y1, y);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx, ny = y + dy;
          if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
          const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
          if (mask[j] && label[j] < 0) {
            label[j] = next_label;
            stack.push_back(j);
          }
        }
      }
    }
    ++next_label;
    const double bw = x1 - x0 + 1, bh = y1 - y0 + 1;
    if (bw < params.min_side || bh < params.min_side || bw > params.max_side || bh > params.max_side) continue;
    std::size_t inside = 0;
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        if (edges.at(x, y) > 0.0f) ++inside;
    Detection d;
    d.box = BBox{static_cast<double>(x0), static_cast<double>(y0), bw, bh};
    d.score = std::clamp(static_cast<double>(inside) / static_cast<double>(total_edges), 0.0, 1.0);
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace iconforge::proposals
