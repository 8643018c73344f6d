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

#include "iconforge/proposals.hpp"
#include "iconforge/rng.hpp"

using namespace iconforge;
using namespace iconforge::proposals;
namespace fs = std::filesystem;

namespace {

RasterImage white(int w, int h) { return RasterImage(w, h, 3, std::uint8_t{255}); }

void paint(RasterImage& img, int x0, int y0, int w, int h, std::uint8_t v) {
  for (int y = y0; y < y0 + h; ++y)
    for (int x = x0; x < x0 + w; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = v;
}

class IngestTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() / "iconforge_ingest_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    index.image_id = "img";
    index.width = 1900;
    index.height = 1900;
    index.tiles = tiler::tile_layout(1900, 1900);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
  tiler::TileIndex index;
};

}  // namespace

TEST(Detection, Validation) {
  Detection d{BBox{0, 0, 5, 5}, 0.5, std::nullopt};
  EXPECT_NO_THROW(validate_detection(d));
  d.score = 1.3;
  EXPECT_THROW(validate_detection(d), ValidationError);
  d.score = -0.1;
  EXPECT_THROW(validate_detection(d), ValidationError);
  d.score = 0.5;
  d.box.w = 0;
  EXPECT_THROW(validate_detection(d), ValidationError);
  d.box.w = 5;
  d.class_probs = std::vector<double>{0.25, 0.75};
  EXPECT_NO_THROW(validate_detection(d, 2));
  EXPECT_THROW(validate_detection(d, 3), ValidationError);
  d.class_probs = std::vector<double>{0.5, 0.6};
  EXPECT_THROW(validate_detection(d), ValidationError);
}

TEST_F(IngestTest, EmptyFileGivesNothing) {
  write_text(dir / "d.jsonl", "");
  EXPECT_TRUE(ingest_detections(dir / "d.jsonl", index).empty());
}

TEST_F(IngestTest, FullTileOnLevelOneSpansImage) {
  write_jsonl(dir / "d.jsonl",
              {json{{"tile_id", "L1_0_0"}, {"x", 0}, {"y", 0}, {"w", 600}, {"h", 600}, {"score", 0.9}}});
  const auto dets = ingest_detections(dir / "d.jsonl", index);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_NEAR(dets[0].box.x, 0, 1e-9);
  EXPECT_NEAR(dets[0].box.w, 1900, 1e-9);
  EXPECT_NEAR(dets[0].box.h, 1900, 1e-9);
  EXPECT_EQ(dets[0].score, 0.9);
}

TEST_F(IngestTest, MapsEachTileAndKeepsFileOrder) {
  write_jsonl(dir / "d.jsonl",
              {json{{"tile_id", "L2_1_1"}, {"x", 300}, {"y", 300}, {"w", 60}, {"h", 60}, {"score", 0.4}},
               json{{"tile_id", "L1_0_0"}, {"x", 30}, {"y", 30}, {"w", 60}, {"h", 60}, {"score", 0.8},
                    {"class_probs", {0.5, 0.5}}}});
  const auto dets = ingest_detections(dir / "d.jsonl", index, 2);
  ASSERT_EQ(dets.size(), 2u);
  EXPECT_NEAR(dets[0].box.x, 1400, 1e-9);
  EXPECT_NEAR(dets[0].box.w, 100, 1e-9);
  EXPECT_NEAR(dets[1].box.x, 95, 1e-9);
  EXPECT_NEAR(dets[1].box.w, 190, 1e-9);
  ASSERT_TRUE(dets[1].class_probs);
  EXPECT_FALSE(dets[0].class_probs);
}

TEST_F(IngestTest, BadScoreNamesTheLine) {
  write_jsonl(dir / "d.jsonl",
              {json{{"tile_id", "L1_0_0"}, {"x", 0}, {"y", 0}, {"w", 6}, {"h", 6}, {"score", 0.5}},
               json{{"tile_id", "L1_0_0"}, {"x", 0}, {"y", 0}, {"w", 6}, {"h", 6}, {"score", 1.3}}});
  try {
    ingest_detections(dir / "d.jsonl", index);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("d.jsonl:2:"), std::string::npos) << msg;
  }
}

TEST_F(IngestTest, UnknownTileAndOutOfTileBoxAreRejected) {
  write_jsonl(dir / "a.jsonl", {json{{"tile_id", "L7_0_0"}, {"x", 0}, {"y", 0}, {"w", 6}, {"h", 6}, {"score", 0.5}}});
  EXPECT_THROW(ingest_detections(dir / "a.jsonl", index), ValidationError);
  write_jsonl(dir / "b.jsonl",
              {json{{"tile_id", "L1_0_0"}, {"x", 590}, {"y", 0}, {"w", 60}, {"h", 6}, {"score", 0.5}}});
  EXPECT_THROW(ingest_detections(dir / "b.jsonl", index), ValidationError);
  write_jsonl(dir / "c.jsonl", {json{{"tile_id", "L1_0_0"}, {"x", 0}, {"y", 0}, {"w", 6}, {"h", 6},
                                     {"score", 0.5}, {"class_probs", {0.5, 0.5}}}});
  EXPECT_THROW(ingest_detections(dir / "c.jsonl", index, 3), ValidationError);
  EXPECT_THROW(ingest_detections(dir / "missing.jsonl", index), IoError);
}

TEST_F(IngestTest, RecordRoundTrip) {
  Detection d{BBox{12, 34, 56, 78}, 0.25, std::vector<double>{1.0, 0.0}};
  write_jsonl(dir / "d.jsonl", {detection_record(d, "L1_0_0")});
  const auto back = ingest_detections(dir / "d.jsonl", index);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].score, 0.25);
  EXPECT_NEAR(back[0].box.w, 56 * 1900.0 / 600.0, 1e-9);
  EXPECT_EQ(*back[0].class_probs, *d.class_probs);
}

TEST(Baseline, BlankTileHasNoProposals) { EXPECT_TRUE(baseline_propose(white(600, 600)).empty()); }

TEST(Baseline, SingleSquare) {
  auto img = white(600, 600);
  paint(img, 200, 250, 80, 60, 0);
  const auto dets = baseline_propose(img);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_GE(iou(dets[0].box, BBox{200, 250, 80, 60}), 0.8);
  EXPECT_DOUBLE_EQ(dets[0].score, 1.0);
}

TEST(Baseline, TwoSeparatedGlyphs) {
  auto img = white(600, 600);
  paint(img, 50, 50, 60, 60, 0);
  paint(img, 400, 300, 90, 50, 20);
  const auto dets = baseline_propose(img);
  ASSERT_EQ(dets.size(), 2u);
  double total = 0;
  for (const auto& d : dets) total += d.score;
  EXPECT_NEAR(total, 1.0, 1e-9);
  for (const BBox& g : {BBox{50, 50, 60, 60}, BBox{400, 300, 90, 50}})
    EXPECT_GE(std::max(iou(dets[0].box, g), iou(dets[1].box, g)), 0.8) << g;
}

TEST(Baseline, TinyAndHugeComponentsAreDropped) {
  auto img = white(600, 600);
  paint(img, 100, 100, 3, 3, 0);
  EXPECT_TRUE(baseline_propose(img).empty());
  auto frame = white(600, 600);
  paint(frame, 0, 0, 600, 300, 0);  // edge spans the full width
  for (const auto& d : baseline_propose(frame)) EXPECT_LE(d.box.w, 580);
}

TEST(Baseline, RandomTilesStayInBoundsAndAreDeterministic) {
  Rng rng(8);
  for (int i = 0; i < 15; ++i) {
    auto img = white(200, 160);
    const int n = static_cast<int>(rng.uniform_int(0, 6));
    for (int k = 0; k < n; ++k) {
      const int w = static_cast<int>(rng.uniform_int(2, 60)), h = static_cast<int>(rng.uniform_int(2, 60));
      paint(img, static_cast<int>(rng.uniform_int(0, 200 - w)), static_cast<int>(rng.uniform_int(0, 160 - h)), w, h,
            static_cast<std::uint8_t>(rng.uniform_int(0, 120)));
    }
    const auto a = baseline_propose(img), b = baseline_propose(img);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
      EXPECT_EQ(a[j].box, b[j].box);
      EXPECT_EQ(a[j].score, b[j].score);
      EXPECT_TRUE(a[j].box.inside(200, 160));
      EXPECT_NO_THROW(validate_detection(a[j]));
    }
  }
}

TEST(Baseline, DilationGrowsByOnePixel) {
  std::vector<std::uint8_t> m(25, 0);
  m[12] = 1;
  const auto d = dilate3x3(m, 5, 5);
  int n = 0;
  for (auto v : d) n += v;
  EXPECT_EQ(n, 9);
  EXPECT_EQ(d[6], 1);
  EXPECT_EQ(d[0], 0);
}
