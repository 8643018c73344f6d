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

#include <gtest/gtest.h>

#include <filesystem>

#include "iconforge/rng.hpp"
#include "iconforge/tiler.hpp"

using namespace iconforge;
using namespace iconforge::tiler;
namespace fs = std::filesystem;

namespace {

std::vector<Tile> level(const std::vector<Tile>& tiles, int n) {
  std::vector<Tile> out;
  for (const auto& t : tiles)
    if (t.level == n) out.push_back(t);
  return out;
}

void expect_box_near(const BBox& a, const BBox& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.w, b.w, tol);
  EXPECT_NEAR(a.h, b.h, tol);
}

}  // namespace

TEST(Layout, SquareImageHasFourteenTiles) {
  const auto tiles = tile_layout(600, 600);
  ASSERT_EQ(tiles.size(), 14u);
  EXPECT_EQ(tiles[0].id, "L1_0_0");
  EXPECT_EQ(tiles[0].region, (BBox{0, 0, 600, 600}));
  EXPECT_EQ(level(tiles, 2).size(), 4u);
  EXPECT_EQ(level(tiles, 3).size(), 9u);
  EXPECT_EQ(tiles.back().id, "L3_2_2");
}

TEST(Layout, KnownOrigins) {
  double side = 0;
  const auto two = axis_origins(1900, 2, 0.1, side);
  EXPECT_NEAR(side, 1000, 1e-9);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0], 0, 1e-9);
  EXPECT_NEAR(two[1], 900, 1e-9);
  const auto three = axis_origins(2800, 3, 0.1, side);
  EXPECT_NEAR(side, 1000, 1e-9);
  EXPECT_NEAR(three[1], 900, 1e-9);
  EXPECT_NEAR(three[2], 1800, 1e-9);
}

TEST(Layout, LevelsCoverImageWithFixedOverlap) {
  for (auto [w, h] : {std::pair{600, 600}, std::pair{1900, 1900}, std::pair{2800, 2800}, std::pair{1000, 3000},
                      std::pair{37, 911}}) {
    const auto tiles = tile_layout(w, h);
    for (int n = 1; n <= 3; ++n) {
      const auto lv = level(tiles, n);
      ASSERT_EQ(lv.size(), static_cast<std::size_t>(n * n));
      // per-axis union: first tile starts at 0, last ends at the extent, no gaps
      for (const auto& t : lv) {
        EXPECT_TRUE(t.region.inside(w, h, 1e-6)) << t.id;
        EXPECT_NEAR(t.scale_x * t.region.w, 600, 1e-9);
        EXPECT_NEAR(t.scale_y * t.region.h, 600, 1e-9);
        if (t.col == 0) {
          EXPECT_NEAR(t.region.x, 0, 1e-9);
        }
        if (t.row == 0) {
          EXPECT_NEAR(t.region.y, 0, 1e-9);
        }
        if (t.col == n - 1) {
          EXPECT_NEAR(t.region.right(), w, 1e-6);
        }
        if (t.row == n - 1) {
          EXPECT_NEAR(t.region.bottom(), h, 1e-6);
        }
      }
      for (const auto& a : lv)
        for (const auto& b : lv) {
          if (a.row == b.row && b.col == a.col + 1) {
            EXPECT_NEAR(a.region.right() - b.region.x, 0.1 * a.region.w, 1.0) << a.id << " " << b.id;
            EXPECT_GT(a.region.right(), b.region.x);
          }
          if (a.col == b.col && b.row == a.row + 1) {
            EXPECT_NEAR(a.region.bottom() - b.region.y, 0.1 * a.region.h, 1.0) << a.id << " " << b.id;
            EXPECT_GT(a.region.bottom(), b.region.y);
          }
        }
    }
  }
}

TEST(Layout, RejectsBadParams) {
  EXPECT_THROW(tile_layout(0, 10), ValidationError);
  TilerParams p;
  p.levels = 0;
  EXPECT_THROW(tile_layout(10, 10, p), ValidationError);
  p = {};
  p.overlap = 1.0;
  EXPECT_THROW(tile_layout(10, 10, p), ValidationError);
}

TEST(Unmap, Examples) {
  const auto tiles = tile_layout(600, 600);
  const BBox b{10, 20, 30, 40};
  EXPECT_EQ(unmap(b, tiles[0]), b);

  const auto big = tile_layout(1900, 1900);
  const auto& t = big[1];  // L2_0_0
  EXPECT_EQ(t.id, "L2_0_0");
  expect_box_near(unmap(BBox{0, 0, 600, 600}, t), t.region, 1e-9);

  const auto huge = tile_layout(2800, 2800);
  const Tile* mid = nullptr;
  for (const auto& x : huge)
    if (x.id == "L3_1_1") mid = &x;
  ASSERT_NE(mid, nullptr);
  expect_box_near(mid->region, BBox{900, 900, 1000, 1000}, 1e-9);
  expect_box_near(unmap(BBox{300, 300, 60, 60}, *mid), BBox{1400, 1400, 100, 100}, 1e-9);
}

TEST(Unmap, RejectsBoxOutsideTile) {
  const auto t = tile_layout(600, 600)[0];
  EXPECT_THROW(unmap(BBox{590, 0, 20, 20}, t), ValidationError);
  EXPECT_THROW(unmap(BBox{0, 0, 0, 20}, t), ValidationError);
  EXPECT_THROW(unmap(BBox{-1, 0, 5, 5}, t), ValidationError);
}

TEST(Unmap, RoundTripWithinOnePixel) {
  Rng rng(4);
  for (auto [w, h] : {std::pair{600, 600}, std::pair{1600, 900}, std::pair{1000, 3000}}) {
    for (const auto& t : tile_layout(w, h)) {
      for (int i = 0; i < 50; ++i) {
        const double bw = rng.uniform(1, 300), bh = rng.uniform(1, 300);
        const BBox b{rng.uniform(0, 600 - bw), rng.uniform(0, 600 - bh), bw, bh};
        const auto img = unmap(b, t);
        EXPECT_TRUE(img.inside(w, h, 1e-6));
        expect_box_near(map_to_tile(img, t), b, 1.0);
        expect_box_near(map_to_tile(img, t), b, 1e-6);
      }
    }
  }
}

TEST(Render, TilesAreRenderedAtFixedSize) {
  RasterImage img(900, 450, 3, std::uint8_t{0});
  for (int y = 0; y < 450; ++y)
    for (int x = 450; x < 900; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = 255;
  const auto tiles = tile(img);
  ASSERT_EQ(tiles.size(), 14u);
  for (const auto& t : tiles) {
    EXPECT_EQ(t.rendered.width(), 600);
    EXPECT_EQ(t.rendered.height(), 600);
  }
  // left half black, right half white in the single level-1 tile
  EXPECT_EQ(tiles[0].rendered.at(10, 300, 0), 0);
  EXPECT_EQ(tiles[0].rendered.at(590, 300, 0), 255);
}

TEST(Index, WriteAndLoadRoundTrip) {
  const auto dir = fs::temp_directory_path() / "iconforge_tiles_test";
  fs::remove_all(dir);
  RasterImage img(800, 700, 3, std::uint8_t{128});
  const auto idx = write_tiles(img, "img1", "img1.png", dir);
  EXPECT_EQ(idx.tiles.size(), 14u);
  for (const auto& t : idx.tiles) {
    ASSERT_TRUE(fs::exists(dir / idx.tile_paths.at(t.id)));
    const auto png = read_png(dir / idx.tile_paths.at(t.id));
    EXPECT_EQ(png.width(), 600);
  }
  const auto loaded = load_tile_index(dir / "tiles.json");
  EXPECT_EQ(loaded.image_id, "img1");
  EXPECT_EQ(loaded.width, 800);
  EXPECT_EQ(loaded.height, 700);
  ASSERT_EQ(loaded.tiles.size(), idx.tiles.size());
  for (std::size_t i = 0; i < idx.tiles.size(); ++i) {
    EXPECT_EQ(loaded.tiles[i].id, idx.tiles[i].id);
    EXPECT_EQ(loaded.tiles[i].region, idx.tiles[i].region);
    EXPECT_DOUBLE_EQ(loaded.tiles[i].scale_x, idx.tiles[i].scale_x);
  }
  EXPECT_EQ(loaded.find("L2_1_0").row, 1);
  EXPECT_THROW(loaded.find("L9_0_0"), ValidationError);
  fs::remove_all(dir);
}
