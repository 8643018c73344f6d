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

// Procedural stand-ins for real data: infographic-like pages (title bars,
// text blocks, bar charts, blank margins), two-tone shape icons with and
// without transparent backgrounds, and a small word/tag world for the
// summarizer. Deterministic in the seed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "iconforge/image_io.hpp"
#include "iconforge/imaging.hpp"
#include "iconforge/jsonl.hpp"
#include "iconforge/rng.hpp"
#include "iconforge/synthgen.hpp"

namespace iconforge::toy {

inline const std::vector<std::string>& tags() {
  static const std::vector<std::string> t{"health", "money", "travel", "food", "sports", "science", "water", "energy"};
  return t;
}

struct Rgb {
  std::uint8_t r, g, b;
};

inline void fill_rect(RasterImage& img, int x, int y, int w, int h, Rgb c, std::uint8_t a = 255) {
  for (int yy = std::max(0, y); yy < std::min(img.height(), y + h); ++yy) {
    for (int xx = std::max(0, x); xx < std::min(img.width(), x + w); ++xx) {
      img.at(xx, yy, 0) = c.r;
      if (img.channels() >= 3) {
        img.at(xx, yy, 1) = c.g;
        img.at(xx, yy, 2) = c.b;
      }
      if (img.channels() == 4) img.at(xx, yy, 3) = a;
    }
  }
}

inline void fill_ellipse(RasterImage& img, double cx, double cy, double rx, double ry, Rgb c, std::uint8_t a = 255) {
  for (int y = std::max(0, static_cast<int>(cy - ry)); y <= std::min(img.height() - 1, static_cast<int>(cy + ry)); ++y) {
    for (int x = std::max(0, static_cast<int>(cx - rx)); x <= std::min(img.width() - 1, static_cast<int>(cx + rx)); ++x) {
      const double dx = (x + 0.5 - cx) / rx, dy = (y + 0.5 - cy) / ry;
      if (dx * dx + dy * dy <= 1.0) fill_rect(img, x, y, 1, 1, c, a);
    }
  }
}

inline Rgb random_strong_color(Rng& rng) {
  static const Rgb palette[] = {{200, 30, 40},  {30, 90, 200},  {20, 150, 70}, {230, 140, 20},
                                {120, 40, 160}, {10, 10, 10},   {0, 150, 170}, {180, 20, 120}};
  return palette[rng.uniform_int(0, 7)];
}

/// A page with a title bar, text blocks, charts and empty margins.
inline RasterImage make_infographic(Rng& rng, int width, int height) {
  RasterImage img(width, height, 3, std::uint8_t{255});
  const Rgb bg = rng.uniform01() < 0.5 ? Rgb{255, 255, 255} : Rgb{246, 244, 238};
  fill_rect(img, 0, 0, width, height, bg);
  int y = 0;
  const int title_h = static_cast<int>(rng.uniform_int(60, 140));
  fill_rect(img, 0, 0, width, title_h, random_strong_color(rng));
  for (int i = 0; i < 3; ++i)
    fill_rect(img, 40 + i * 120, title_h / 2 - 10, 100, 20, Rgb{255, 255, 255});
  y = title_h + static_cast<int>(rng.uniform_int(40, 120));
  while (y < height - 80) {
    const double kind = rng.uniform01();
    const int x0 = static_cast<int>(rng.uniform_int(20, width / 3));
    const int block_w = static_cast<int>(rng.uniform_int(width / 4, width / 2));
    int block_h = 0;
    if (kind < 0.45) {  // text block: rows of dark "words"
      const int lines = static_cast<int>(rng.uniform_int(3, 10));
      for (int l = 0; l < lines; ++l) {
        int x = x0;
        while (x < x0 + block_w) {
          const int ww = static_cast<int>(rng.uniform_int(12, 60));
          fill_rect(img, x, y + l * 18, ww, 10, Rgb{40, 40, 40});
          x += ww + static_cast<int>(rng.uniform_int(5, 10));
        }
      }
      block_h = lines * 18;
    } else if (kind < 0.7) {  // bar chart
      const int bars = static_cast<int>(rng.uniform_int(3, 8));
      block_h = static_cast<int>(rng.uniform_int(120, 260));
      for (int b = 0; b < bars; ++b) {
        const int bh = static_cast<int>(rng.uniform_int(20, block_h));
        fill_rect(img, x0 + b * 40, y + block_h - bh, 28, bh, random_strong_color(rng));
      }
      fill_rect(img, x0 - 5, y + block_h, bars * 40 + 10, 3, Rgb{60, 60, 60});
    } else if (kind < 0.85) {  // pie-ish disc with a label strip
      const int r = static_cast<int>(rng.uniform_int(40, 110));
      fill_ellipse(img, x0 + r, y + r, r, r, random_strong_color(rng));
      fill_ellipse(img, x0 + r, y + r, r * 0.5, r * 0.5, bg);
      fill_rect(img, x0 + 2 * r + 20, y + r - 6, 120, 12, Rgb{40, 40, 40});
      block_h = 2 * r;
    } else {  // white space
      block_h = static_cast<int>(rng.uniform_int(80, 300));
    }
    y += block_h + static_cast<int>(rng.uniform_int(60, 200));
  }
  return img;
}

/// Two-tone shape icon. Transparent icons have alpha 0 outside the shape;
/// opaque icons sit on a solid tile.
inline RasterImage make_icon(int shape, Rgb fg, Rgb accent, bool transparent, int w = 96, int h = 96) {
  RasterImage img(w, h, 4, std::uint8_t{0});
  if (!transparent) fill_rect(img, 0, 0, w, h, Rgb{235, 235, 210});
  const double cx = w / 2.0, cy = h / 2.0;
  switch (shape % 4) {
    case 0:
      fill_ellipse(img, cx, cy, w * 0.45, h * 0.45, fg);
      fill_ellipse(img, cx, cy, w * 0.2, h * 0.2, accent);
      break;
    case 1:
      fill_rect(img, static_cast<int>(w * 0.1), static_cast<int>(h * 0.1), static_cast<int>(w * 0.8),
                static_cast<int>(h * 0.8), fg);
      fill_rect(img, static_cast<int>(w * 0.35), static_cast<int>(h * 0.2), static_cast<int>(w * 0.3),
                static_cast<int>(h * 0.6), accent);
      break;
    case 2:  // plus sign
      fill_rect(img, static_cast<int>(w * 0.35), static_cast<int>(h * 0.05), static_cast<int>(w * 0.3),
                static_cast<int>(h * 0.9), fg);
      fill_rect(img, static_cast<int>(w * 0.05), static_cast<int>(h * 0.35), static_cast<int>(w * 0.9),
                static_cast<int>(h * 0.3), fg);
      fill_rect(img, static_cast<int>(w * 0.42), static_cast<int>(h * 0.42), static_cast<int>(w * 0.16),
                static_cast<int>(h * 0.16), accent);
      break;
    default:  // triangle
      for (int y = static_cast<int>(h * 0.08); y < static_cast<int>(h * 0.92); ++y) {
        const double t = (y - h * 0.08) / (h * 0.84);
        const int half = static_cast<int>(t * w * 0.45);
        fill_rect(img, static_cast<int>(cx) - half, y, 2 * half + 1, 1, fg);
      }
      fill_ellipse(img, cx, h * 0.62, w * 0.1, h * 0.1, accent);
      break;
  }
  return img;
}

struct ToyData {
  std::vector<synthgen::CorpusImage> corpus;
  std::vector<synthgen::IconAsset> icons;  // transparent and opaque
};

inline ToyData make_toy_data(std::size_t n_images, std::size_t icons_per_tag, std::uint64_t seed,
                             int min_side = 800, int max_side = 1600) {
  ToyData d;
  for (std::size_t i = 0; i < n_images; ++i) {
    Rng rng = Rng::stream(seed, i);
    const int w = static_cast<int>(rng.uniform_int(min_side, max_side));
    const int h = static_cast<int>(rng.uniform_int(min_side, max_side * 3 / 2));
    char id[32];
    std::snprintf(id, sizeof id, "info_%03zu", i);
    d.corpus.push_back({id, make_infographic(rng, w, h)});
  }
  Rng rng = Rng::stream(seed, 1'000'000);
  const auto& ts = tags();
  for (std::size_t t = 0; t < ts.size(); ++t) {
    for (std::size_t k = 0; k < icons_per_tag; ++k) {
      for (bool transparent : {true, false}) {
        const Rgb fg = random_strong_color(rng);
        const Rgb accent = rng.uniform01() < 0.5 ? Rgb{255, 255, 255} : Rgb{250, 220, 40};
        const int w = static_cast<int>(rng.uniform_int(72, 128));
        const int h = static_cast<int>(rng.uniform_int(72, 128));
        char id[64];
        std::snprintf(id, sizeof id, "%s_%zu%s", ts[t].c_str(), k, transparent ? "" : "_opaque");
        auto img = make_icon(static_cast<int>(t + k), fg, accent, transparent, w, h);
        d.icons.push_back({id, std::move(img), ts[t], transparent});
      }
    }
  }
  return d;
}

/// Word lists per tag; word vectors are clustered around a per-tag centre.
inline std::vector<std::string> tag_words(std::size_t tag) {
  static const std::vector<std::vector<std::string>> w{
      {"doctor", "hospital", "medicine", "heart", "care"},   {"bank", "cash", "price", "budget", "loan"},
      {"flight", "hotel", "trip", "airport", "tourism"},     {"meal", "recipe", "fruit", "diet", "cook"},
      {"football", "team", "score", "match", "athlete"},     {"research", "lab", "physics", "data", "experiment"},
      {"river", "ocean", "rain", "drink", "clean"},          {"solar", "power", "oil", "wind", "grid"}};
  return w.at(tag % w.size());
}

struct ToyEmbedding {
  std::string word;
  std::vector<double> vec;
};

inline std::vector<ToyEmbedding> make_embeddings(int dim, std::uint64_t seed) {
  std::vector<ToyEmbedding> out;
  Rng rng(seed);
  for (std::size_t t = 0; t < tags().size(); ++t) {
    std::vector<double> centre(static_cast<std::size_t>(dim));
    for (auto& c : centre) c = rng.uniform(-1.0, 1.0);
    for (const auto& w : tag_words(t)) {
      std::vector<double> v = centre;
      for (auto& x : v) x += rng.uniform(-0.3, 0.3);
      out.push_back({w, std::move(v)});
    }
  }
  for (const char* filler : {"the", "of", "and", "in", "percent"}) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = rng.uniform(-0.1, 0.1);
    out.push_back({filler, std::move(v)});
  }
  return out;
}

/// Writes corpus/, icons/, icons.jsonl, tags.txt, embeddings.txt,
/// tag_train.jsonl and words/<image>.json under `dir`.
inline void write_toy_dataset(const std::filesystem::path& dir, std::size_t n_images, std::uint64_t seed,
                              std::size_t icons_per_tag = 3, int embedding_dim = 300) {
  namespace fs = std::filesystem;
  fs::create_directories(dir / "corpus");
  fs::create_directories(dir / "icons");
  fs::create_directories(dir / "words");
  const auto data = make_toy_data(n_images, icons_per_tag, seed);
  for (const auto& c : data.corpus) write_png(dir / "corpus" / (c.id + ".png"), c.image);
  std::vector<json> manifest;
  for (const auto& i : data.icons) {
    write_png(dir / "icons" / (i.id + ".png"), i.image);
    manifest.push_back({{"id", i.id}, {"path", "icons/" + i.id + ".png"}, {"tag", i.tag}, {"transparent", i.transparent}});
  }
  write_jsonl(dir / "icons.jsonl", manifest);

  std::string tag_text;
  for (const auto& t : tags()) tag_text += t + "\n";
  write_text(dir / "tags.txt", tag_text);

  std::string emb;
  char buf[32];
  for (const auto& e : make_embeddings(embedding_dim, seed ^ 0xe3bULL)) {
    emb += e.word;
    for (double v : e.vec) {
      std::snprintf(buf, sizeof buf, " %.6f", v);
      emb += buf;
    }
    emb += "\n";
  }
  write_text(dir / "embeddings.txt", emb);

  Rng rng = Rng::stream(seed, 2'000'000);
  auto sample_words = [&](std::vector<std::size_t> tag_ids) {
    std::vector<std::string> words{"the", "of", "percent"};
    for (std::size_t t : tag_ids) {
      const auto tw = tag_words(t);
      for (int k = 0; k < 6; ++k) words.push_back(tw[static_cast<std::size_t>(rng.uniform_int(0, 4))]);
    }
    words.push_back("unknownword");
    return words;
  };
  std::vector<json> train;
  for (int n = 0; n < 160; ++n) {
    std::vector<std::size_t> ids{static_cast<std::size_t>(rng.uniform_int(0, 7))};
    if (rng.uniform01() < 0.4) ids.push_back(static_cast<std::size_t>(rng.uniform_int(0, 7)));
    std::vector<std::string> tag_names;
    for (auto t : ids) tag_names.push_back(tags()[t]);
    train.push_back({{"words", sample_words(ids)}, {"tags", tag_names}});
  }
  write_jsonl(dir / "tag_train.jsonl", train);
  for (std::size_t i = 0; i < data.corpus.size(); ++i) {
    const std::size_t t = static_cast<std::size_t>(rng.uniform_int(0, 7));
    write_json(dir / "words" / (data.corpus[i].id + ".json"),
               json{{"image_id", data.corpus[i].id}, {"words", sample_words({t})}});
  }
}

}  // namespace iconforge::toy
