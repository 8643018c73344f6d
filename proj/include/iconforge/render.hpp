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

// Overlay rendering: the image is washed toward white, then boxes are stroked
// (solid or dashed) with an optional label drawn in a 5x7 bitmap font.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/imaging.hpp"

namespace iconforge::render {

struct Color {
  std::uint8_t r = 0, g = 0, b = 0;
};

inline constexpr Color kRed{220, 30, 30};
inline constexpr Color kBlue{30, 70, 230};
inline constexpr Color kGreen{40, 170, 60};

enum class Stroke { solid, dashed };

struct OverlayBox {
  BBox box;
  std::string label;
  Color color = kRed;
  Stroke stroke = Stroke::solid;
  int thickness = 2;
};

struct OverlayResult {
  RasterImage image;
  std::vector<std::string> warnings;
};

namespace detail {

// Column-major 5x7 glyphs, bit 0 = top row.
struct Glyph {
  char c;
  std::array<std::uint8_t, 5> cols;
};

inline constexpr Glyph kFont[] = {
    {'0', {0x3E, 0x51, 0x49, 0x45, 0x3E}}, {'1', {0x00, 0x42, 0x7F, 0x40, 0x00}},
    {'2', {0x42, 0x61, 0x51, 0x49, 0x46}}, {'3', {0x21, 0x41, 0x45, 0x4B, 0x31}},
    {'4', {0x18, 0x14, 0x12, 0x7F, 0x10}}, {'5', {0x27, 0x45, 0x45, 0x45, 0x39}},
    {'6', {0x3C, 0x4A, 0x49, 0x49, 0x30}}, {'7', {0x01, 0x71, 0x09, 0x05, 0x03}},
    {'8', {0x36, 0x49, 0x49, 0x49, 0x36}}, {'9', {0x06, 0x49, 0x49, 0x29, 0x1E}},
    {'A', {0x7E, 0x11, 0x11, 0x11, 0x7E}}, {'B', {0x7F, 0x49, 0x49, 0x49, 0x36}},
    {'C', {0x3E, 0x41, 0x41, 0x41, 0x22}}, {'D', {0x7F, 0x41, 0x41, 0x22, 0x1C}},
    {'E', {0x7F, 0x49, 0x49, 0x49, 0x41}}, {'F', {0x7F, 0x09, 0x09, 0x09, 0x01}},
    {'G', {0x3E, 0x41, 0x49, 0x49, 0x7A}}, {'H', {0x7F, 0x08, 0x08, 0x08, 0x7F}},
    {'I', {0x00, 0x41, 0x7F, 0x41, 0x00}}, {'J', {0x20, 0x40, 0x41, 0x3F, 0x01}},
    {'K', {0x7F, 0x08, 0x14, 0x22, 0x41}}, {'L', {0x7F, 0x40, 0x40, 0x40, 0x40}},
    {'M', {0x7F, 0x02, 0x0C, 0x02, 0x7F}}, {'N', {0x7F, 0x04, 0x08, 0x10, 0x7F}},
    {'O', {0x3E, 0x41, 0x41, 0x41, 0x3E}}, {'P', {0x7F, 0x09, 0x09, 0x09, 0x06}},
    {'Q', {0x3E, 0x41, 0x51, 0x21, 0x5E}}, {'R', {0x7F, 0x09, 0x19, 0x29, 0x46}},
    {'S', {0x46, 0x49, 0x49, 0x49, 0x31}}, {'T', {0x01, 0x01, 0x7F, 0x01, 0x01}},
    {'U', {0x3F, 0x40, 0x40, 0x40, 0x3F}}, {'V', {0x1F, 0x20, 0x40, 0x20, 0x1F}},
    {'W', {0x3F, 0x40, 0x38, 0x40, 0x3F}}, {'X', {0x63, 0x14, 0x08, 0x14, 0x63}},
    {'Y', {0x07, 0x08, 0x70, 0x08, 0x07}}, {'Z', {0x61, 0x51, 0x49, 0x45, 0x43}},
    {'#', {0x14, 0x7F, 0x14, 0x7F, 0x14}}, {'-', {0x08, 0x08, 0x08, 0x08, 0x08}},
    {'_', {0x40, 0x40, 0x40, 0x40, 0x40}}, {'.', {0x00, 0x60, 0x60, 0x00, 0x00}},
    {':', {0x00, 0x36, 0x36, 0x00, 0x00}},
};

inline const Glyph* find_glyph(char c) {
  c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& g : kFont)
    if (g.c == c) return &g;
  return nullptr;
}

inline void put(RasterImage& img, int x, int y, Color c) {
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return;
  const std::array<std::uint8_t, 3> rgb{c.r, c.g, c.b};
  for (int ch = 0; ch < std::min(3, img.channels()); ++ch) img.at(x, y, ch) = rgb[ch];
  if (img.channels() == 4) img.at(x, y, 3) = 255;
}

}  // namespace detail

/// Blends every pixel halfway toward white.
inline RasterImage fade(const RasterImage& img, double amount = 0.5) {
  RasterImage out = img;
  const int ch = img.channels();
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (ch == 4 && i % 4 == 3) continue;
    px[i] = iconforge::detail::clamp_u8((1.0 - amount) * px[i] + amount * 255.0);
  }
  return out;
}

inline void draw_text(RasterImage& img, int x, int y, const std::string& text, Color color) {
  int cx = x;
  for (char c : text) {
    if (const auto* g = detail::find_glyph(c)) {
      for (int col = 0; col < 5; ++col)
        for (int row = 0; row < 7; ++row)
          if (g->cols[col] >> row & 1) detail::put(img, cx + col, y + row, color);
    }
    cx += 6;
  }
}

/// Stroke lies inside the box; dashes are 6 on / 4 off along each edge.
inline void draw_rect(RasterImage& img, const BBox& b, Color color, Stroke stroke, int thickness) {
  const int x0 = static_cast<int>(std::lround(b.x)), y0 = static_cast<int>(std::lround(b.y));
  const int x1 = static_cast<int>(std::lround(b.right())) - 1, y1 = static_cast<int>(std::lround(b.bottom())) - 1;
  auto on = [&](int t) { return stroke == Stroke::solid || (t % 10) < 6; };
  for (int t = 0; t < thickness; ++t) {
    for (int x = x0; x <= x1; ++x) {
      if (!on(x - x0)) continue;
      detail::put(img, x, y0 + t, color);
      detail::put(img, x, y1 - t, color);
    }
    for (int y = y0; y <= y1; ++y) {
      if (!on(y - y0)) continue;
      detail::put(img, x0 + t, y, color);
      detail::put(img, x1 - t, y, color);
    }
  }
}

/// Boxes extending past the image are clipped and reported.
inline OverlayResult render_overlay(const RasterImage& image, const std::vector<OverlayBox>& boxes) {
  OverlayResult r{fade(to_rgb(image)), {}};
  for (const auto& ob : boxes) {
    BBox b = ob.box;
    if (!b.inside(image.width(), image.height())) {
      r.warnings.push_back("box clipped to image bounds");
      const double x0 = std::clamp(b.x, 0.0, static_cast<double>(image.width()));
      const double y0 = std::clamp(b.y, 0.0, static_cast<double>(image.height()));
      const double x1 = std::clamp(b.right(), 0.0, static_cast<double>(image.width()));
      const double y1 = std::clamp(b.bottom(), 0.0, static_cast<double>(image.height()));
      b = BBox{x0, y0, x1 - x0, y1 - y0};
      if (!b.valid()) continue;
    }
    draw_rect(r.image, b, ob.color, ob.stroke, ob.thickness);
    if (!ob.label.empty()) {
      const int ty = b.y >= 9 ? static_cast<int>(b.y) - 9 : static_cast<int>(b.y) + ob.thickness + 1;
      draw_text(r.image, static_cast<int>(b.x), ty, ob.label, ob.color);
    }
  }
  return r;
}

}  // namespace iconforge::render
