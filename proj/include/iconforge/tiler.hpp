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

// Multi-scale window pyramid: level n is an n x n grid of windows that jointly
// cover the image with neighbours overlapping by a fixed fraction of the
// window side. Every window is rendered at a fixed detector input size.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/image_io.hpp"
#include "iconforge/imaging.hpp"
#include "iconforge/jsonl.hpp"

namespace iconforge::tiler {

struct TilerParams {
  int levels = 3;
  double overlap = 0.1;
  int tile_size = 600;
};

struct Tile {
  std::string id;
  int level = 1;
  int row = 0;
  int col = 0;
  BBox region;           // source-image coordinates
  double scale_x = 1.0;  // tile_size / region.w
  double scale_y = 1.0;
  int tile_size = 600;
  RasterImage rendered;  // empty when only geometry was requested
};

inline std::string tile_id(int level, int row, int col) {
  return "L" + std::to_string(level) + "_" + std::to_string(row) + "_" + std::to_string(col);
}

/// Origins and side of an n-window cover of [0, extent) with the given overlap.
inline std::vector<double> axis_origins(double extent, int n, double overlap, double& side) {
  side = extent / (n - overlap * (n - 1));
  std::vector<double> origins(static_cast<std::size_t>(n));
  const double stride = (1.0 - overlap) * side;
  for (int i = 0; i < n; ++i) origins[i] = i * stride;
  origins.back() = extent - side;  // flush with the far edge
  return origins;
}

/// Tile geometry only (no rendering), level-major, row-major within a level.
inline std::vector<Tile> tile_layout(int width, int height, const TilerParams& params = {}) {
  if (width < 1 || height < 1) throw ValidationError("tile: image must be non-empty");
  if (params.levels < 1) throw ValidationError("tile: levels must be >= 1");
  if (!(params.overlap >= 0.0 && params.overlap < 1.0)) throw ValidationError("tile: overlap must be in [0, 1)");
  std::vector<Tile> tiles;
  for (int n = 1; n <= params.levels; ++n) {
    double sx = 0, sy = 0;
    const auto ox = axis_origins(width, n, params.overlap, sx);
    const auto oy = axis_origins(height, n, params.overlap, sy);
    for (int r = 0; r < n; ++r) {
      for (int c = 0; c < n; ++c) {
        Tile t;
        t.id = tile_id(n, r, c);
        t.level = n;
        t.row = r;
        t.col = c;
        t.region = BBox{ox[c], oy[r], sx, sy};
        t.tile_size = params.tile_size;
        t.scale_x = params.tile_size / sx;
        t.scale_y = params.tile_size / sy;
        tiles.push_back(std::move(t));
      }
    }
  }
  return tiles;
}

/// 1 + 4 + 9 tiles for the default three levels, each rendered at tile_size.
inline std::vector<Tile> tile(const RasterImage& image, const TilerParams& params = {}) {
  auto tiles = tile_layout(image.width(), image.height(), params);
  for (auto& t : tiles) t.rendered = resample_region(image, t.region, params.tile_size, params.tile_size);
  return tiles;
}

/// Maps a box in tile pixel coordinates back to source-image coordinates.
inline BBox unmap(const BBox& box, const Tile& t) {
  if (!box.valid() || !box.inside(t.tile_size, t.tile_size, 1e-6))
    throw ValidationError("box outside tile " + t.id);
  return BBox{t.region.x + box.x / t.scale_x, t.region.y + box.y / t.scale_y, box.w / t.scale_x,
              box.h / t.scale_y};
}

/// Inverse of unmap; used for round-trip checks.
inline BBox map_to_tile(const BBox& box, const Tile& t) {
  return BBox{(box.x - t.region.x) * t.scale_x, (box.y - t.region.y) * t.scale_y, box.w * t.scale_x,
              box.h * t.scale_y};
}

struct TileIndex {
  std::string image_id;
  std::string image_path;
  int width = 0;
  int height = 0;
  std::vector<Tile> tiles;  // geometry only
  std::map<std::string, std::string> tile_paths;

  const Tile& find(const std::string& id) const {
    for (const auto& t : tiles)
      if (t.id == id) return t;
    throw ValidationError("unknown tile id '" + id + "'");
  }
};

inline json to_json(const TileIndex& idx) {
  json tiles = json::array();
  for (const auto& t : idx.tiles) {
    json j{{"id", t.id},           {"level", t.level},     {"row", t.row},
           {"col", t.col},         {"x", t.region.x},      {"y", t.region.y},
           {"w", t.region.w},      {"h", t.region.h},      {"scale_x", t.scale_x},
           {"scale_y", t.scale_y}, {"tile_size", t.tile_size}};
    if (auto it = idx.tile_paths.find(t.id); it != idx.tile_paths.end()) j["path"] = it->second;
    tiles.push_back(std::move(j));
  }
  return json{{"schema_version", kSchemaVersion}, {"image_id", idx.image_id}, {"image_path", idx.image_path},
              {"width", idx.width},                {"height", idx.height},     {"tiles", std::move(tiles)}};
}

inline TileIndex tile_index_from_json(const json& j) {
  TileIndex idx;
  idx.image_id = require<std::string>(j, "image_id");
  idx.image_path = j.value("image_path", std::string{});
  idx.width = require<int>(j, "width");
  idx.height = require<int>(j, "height");
  for (const auto& tj : require<json>(j, "tiles")) {
    Tile t;
    t.id = require<std::string>(tj, "id");
    t.level = require<int>(tj, "level");
    t.row = require<int>(tj, "row");
    t.col = require<int>(tj, "col");
    t.region = BBox{require<double>(tj, "x"), require<double>(tj, "y"), require<double>(tj, "w"),
                    require<double>(tj, "h")};
    t.scale_x = require<double>(tj, "scale_x");
    t.scale_y = require<double>(tj, "scale_y");
    t.tile_size = tj.value("tile_size", 600);
    if (tj.contains("path")) idx.tile_paths[t.id] = tj["path"].get<std::string>();
    idx.tiles.push_back(std::move(t));
  }
  return idx;
}

inline TileIndex load_tile_index(const std::filesystem::path& path) {
  try {
    return tile_index_from_json(read_json(path));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

/// Writes one PNG per tile plus tiles.json into `out_dir`.
inline TileIndex write_tiles(const RasterImage& image, const std::string& image_id, const std::string& image_path,
                             const std::filesystem::path& out_dir, const TilerParams& params = {}) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string(), "cannot create directory: " + ec.message());
  auto tiles = tile(image, params);
  TileIndex idx{image_id, image_path, image.width(), image.height(), {}, {}};
  for (auto& t : tiles) {
    const std::string name = t.id + ".png";
    write_png(out_dir / name, t.rendered);
    idx.tile_paths[t.id] = name;
    t.rendered = RasterImage{};
    idx.tiles.push_back(std::move(t));
  }
  write_json(out_dir / "tiles.json", to_json(idx));
  return idx;
}

}  // namespace iconforge::tiler
