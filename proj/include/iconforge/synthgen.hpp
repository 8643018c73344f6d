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

// Synthetic icon-detection training data: random windows cut from real
// infographics, low-entropy patches located inside them, and transparent icons
// pasted into those patches when they contrast enough with the background.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"
#include "iconforge/image_io.hpp"
#include "iconforge/imaging.hpp"
#include "iconforge/jsonl.hpp"
#include "iconforge/parallel.hpp"
#include "iconforge/rng.hpp"

namespace iconforge::synthgen {

struct AugmentParams {
  int icons_per_window = 4;
  int icon_size_min = 30;
  int icon_size_max = 240;
  double entropy_threshold = 0.05;
  double contrast_threshold = 500.0;
  int max_patch_tries = 50;
  int max_icon_redraws = 10;
  int max_size_redraws = 10;  // fresh icon sizes tried when no patch or icon fits
  int window_size = 600;
  std::uint64_t rng_seed = 0;
  EntropyParams entropy;

  void validate() const {
    if (icons_per_window < 1 || icons_per_window > 16)
      throw ValidationError("icons_per_window must be in [1, 16]");
    if (window_size < 2) throw ValidationError("window_size must be >= 2");
    if (icon_size_min < 1 || icon_size_min > icon_size_max || icon_size_max > window_size - 1)
      throw ValidationError("icon sizes must satisfy 0 < min <= max <= window_size - 1");
    if (!(entropy_threshold >= 0.0 && entropy_threshold <= 1.0))
      throw ValidationError("entropy_threshold must be in [0, 1]");
    if (!(contrast_threshold >= 0.0)) throw ValidationError("contrast_threshold must be nonnegative");
    if (max_patch_tries < 1 || max_icon_redraws < 1 || max_size_redraws < 1) throw ValidationError("retry budgets must be >= 1");
    if (!(entropy.canny.low < entropy.canny.high)) throw ValidationError("canny low must be below canny high");
    if (!(entropy.sigma_frac > 0.0)) throw ValidationError("sigma_frac must be positive");
  }
};

enum class BaselineMode { none, random_locations, nontransparent_icons, blank_background };

inline std::string_view to_string(BaselineMode m) {
  switch (m) {
    case BaselineMode::random_locations: return "random_locations";
    case BaselineMode::nontransparent_icons: return "nontransparent_icons";
    case BaselineMode::blank_background: return "blank_background";
    default: return "none";
  }
}

inline BaselineMode parse_baseline_mode(std::string_view s) {
  if (s.empty() || s == "none") return BaselineMode::none;
  if (s == "random_locations") return BaselineMode::random_locations;
  if (s == "nontransparent_icons") return BaselineMode::nontransparent_icons;
  if (s == "blank_background") return BaselineMode::blank_background;
  throw ValidationError("unknown baseline mode '" + std::string(s) + "'");
}

struct IconAsset {
  std::string id;
  RasterImage image;
  std::string tag;
  bool transparent = false;
};

struct CorpusImage {
  std::string id;
  RasterImage image;
};

struct PlacedIcon {
  BBox box;    // tight pasted-icon rectangle, window coordinates
  BBox patch;  // square patch the icon was centred in
  std::string icon_id;
  std::string tag;
  double entropy = 0.0;   // pre-composite patch entropy
  double contrast = 0.0;  // contrast_score(patch, resized icon)
};

struct SyntheticSample {
  RasterImage window;
  RasterImage background;  // the window before any icon was pasted
  std::vector<PlacedIcon> boxes;
  std::string source_id;
  int origin_x = 0;
  int origin_y = 0;
  double source_scale = 1.0;
};

struct WindowDraw {
  RasterImage window;
  int origin_x = 0;
  int origin_y = 0;
  double scale = 1.0;
};

/// Uniformly placed size x size window. Images with a side shorter than
/// `size` are first upscaled so that their short side equals `size`.
inline WindowDraw sample_window(const RasterImage& infographic, int size, Rng& rng) {
  const RasterImage* src = &infographic;
  RasterImage scaled;
  double scale = 1.0;
  const int short_side = std::min(infographic.width(), infographic.height());
  if (short_side < size) {
    scale = static_cast<double>(size) / short_side;
    const int w = std::max(size, static_cast<int>(std::ceil(infographic.width() * scale - 1e-9)));
    const int h = std::max(size, static_cast<int>(std::ceil(infographic.height() * scale - 1e-9)));
    scaled = resize(infographic, w, h);
    src = &scaled;
  }
  const int ox = static_cast<int>(rng.uniform_int(0, src->width() - size));
  const int oy = static_cast<int>(rng.uniform_int(0, src->height() - size));
  return WindowDraw{to_rgb(crop(*src, ox, oy, size, size)), ox, oy, scale};
}

struct PatchChoice {
  BBox box;
  double entropy = 0.0;
};

/// First uniformly placed square patch of side `desired_size` that avoids
/// `occupied` and (when `gated`) has entropy <= params.entropy_threshold.
/// Each rejected candidate, overlapping or textured, consumes one try.
inline std::optional<PatchChoice> find_valid_patch(const RasterImage& window, int desired_size,
                                                   const AugmentParams& params, Rng& rng,
                                                   std::span<const BBox> occupied = {}, bool gated = true) {
  if (desired_size < 1 || desired_size > std::min(window.width(), window.height()) - 1)
    throw ValidationError("find_valid_patch: desired_size must be in [1, window side - 1]");
  for (int t = 0; t < params.max_patch_tries; ++t) {
    const int x = static_cast<int>(rng.uniform_int(0, window.width() - desired_size));
    const int y = static_cast<int>(rng.uniform_int(0, window.height() - desired_size));
    const BBox box{static_cast<double>(x), static_cast<double>(y), static_cast<double>(desired_size),
                   static_cast<double>(desired_size)};
    bool clash = false;
    for (const auto& o : occupied) {
      if (intersection_area(box, o) > 0.0) {
        clash = true;
        break;
      }
    }
    if (clash) continue;
    const double e = patch_entropy(crop(window, x, y, desired_size, desired_size), params.entropy);
    if (gated && e > params.entropy_threshold) continue;
    return PatchChoice{box, e};
  }
  return std::nullopt;
}

/// Resizes an icon so its long side equals `side`, preserving aspect.
inline RasterImage fit_icon(const RasterImage& icon, int side) {
  const int long_side = std::max(icon.width(), icon.height());
  const double s = static_cast<double>(side) / long_side;
  const int w = std::max(1, static_cast<int>(std::lround(icon.width() * s)));
  const int h = std::max(1, static_cast<int>(std::lround(icon.height() * s)));
  return resize(to_rgba(icon), w, h);
}

/// Pastes up to icons_per_window icons into `window`. A sample with no boxes
/// means nothing could be placed and the caller should draw a new window.
inline SyntheticSample augment_window(const RasterImage& window, std::span<const IconAsset> pool,
                                      const AugmentParams& params, Rng& rng,
                                      BaselineMode mode = BaselineMode::none) {
  if (pool.empty()) throw ValidationError("augment_window: icon pool is empty");
  const bool want_transparent = mode != BaselineMode::nontransparent_icons;
  for (const auto& icon : pool) {
    if (icon.transparent != want_transparent)
      throw ValidationError("augment_window: icon '" + icon.id + "' has the wrong transparency for this mode");
  }
  const bool gated = mode != BaselineMode::random_locations;

  SyntheticSample sample;
  sample.background = to_rgb(window);
  sample.window = sample.background;
  std::vector<BBox> occupied;
  for (int k = 0; k < params.icons_per_window; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < params.max_size_redraws && !placed; ++attempt) {
      const int side = static_cast<int>(rng.uniform_int(params.icon_size_min, params.icon_size_max));
      const auto patch = find_valid_patch(sample.background, side, params, rng, occupied, gated);
      if (!patch) continue;
      const int px = static_cast<int>(patch->box.x), py = static_cast<int>(patch->box.y);
      const RasterImage patch_img = crop(sample.background, px, py, side, side);
      for (int r = 0; r < params.max_icon_redraws; ++r) {
        const auto& icon =
            pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
        const RasterImage fitted = fit_icon(icon.image, side);
        if (std::min(fitted.width(), fitted.height()) < params.icon_size_min) continue;
        double contrast = 0.0;
        try {
          contrast = contrast_score(patch_img, fitted);
        } catch (const ValidationError&) {
          continue;  // fully transparent after resampling
        }
        if (gated && contrast < params.contrast_threshold) continue;
        const int ix = px + (side - fitted.width()) / 2;
        const int iy = py + (side - fitted.height()) / 2;
        sample.window = alpha_composite(sample.window, fitted, ix, iy);
        sample.boxes.push_back(PlacedIcon{
            BBox{static_cast<double>(ix), static_cast<double>(iy), static_cast<double>(fitted.width()),
                 static_cast<double>(fitted.height())},
            patch->box, icon.id, icon.tag, patch->entropy, contrast});
        occupied.push_back(patch->box);
        placed = true;
        break;
      }
    }
  }
  return sample;
}

inline constexpr int kMaxWindowAttempts = 100;

/// Sample `index` of a run; a pure function of its arguments.
inline SyntheticSample generate_one(std::span<const CorpusImage> corpus, std::span<const IconAsset> pool,
                                    const AugmentParams& params, BaselineMode mode, std::uint64_t index) {
  if (corpus.empty() && mode != BaselineMode::blank_background)
    throw ValidationError("generate: corpus is empty");
  if (pool.empty()) throw ValidationError("generate: icon pool is empty");
  Rng rng = Rng::stream(params.rng_seed, index);
  for (int attempt = 0; attempt < kMaxWindowAttempts; ++attempt) {
    SyntheticSample s;
    if (mode == BaselineMode::blank_background) {
      RasterImage blank(params.window_size, params.window_size, 3, std::uint8_t{255});
      s = augment_window(blank, pool, params, rng, mode);
      s.source_id = "blank";
    } else {
      const auto& src = corpus[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(corpus.size()) - 1))];
      auto draw = sample_window(src.image, params.window_size, rng);
      s = augment_window(draw.window, pool, params, rng, mode);
      s.source_id = src.id;
      s.origin_x = draw.origin_x;
      s.origin_y = draw.origin_y;
      s.source_scale = draw.scale;
    }
    if (!s.boxes.empty()) return s;
  }
  throw ValidationError("generate: no icon could be placed in " + std::to_string(kMaxWindowAttempts) +
                        " windows for sample " + std::to_string(index));
}

/// Picks the pool a mode draws from: transparent icons, or opaque ones for
/// the non-transparent baseline.
inline std::vector<IconAsset> pool_for_mode(std::span<const IconAsset> icons, BaselineMode mode) {
  const bool want = mode != BaselineMode::nontransparent_icons;
  std::vector<IconAsset> out;
  for (const auto& i : icons)
    if (i.transparent == want) out.push_back(i);
  return out;
}

inline std::vector<SyntheticSample> generate_samples(std::span<const CorpusImage> corpus,
                                                     std::span<const IconAsset> pool, const AugmentParams& params,
                                                     std::size_t n, BaselineMode mode = BaselineMode::none,
                                                     unsigned threads = default_thread_count()) {
  params.validate();
  std::vector<SyntheticSample> out(n);
  parallel_for(n, threads, [&](std::size_t i) { out[i] = generate_one(corpus, pool, params, mode, i); });
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline json to_json(const AugmentParams& p) {
  return json{{"icons_per_window", p.icons_per_window},
              {"icon_size_min", p.icon_size_min},
              {"icon_size_max", p.icon_size_max},
              {"entropy_threshold", p.entropy_threshold},
              {"contrast_threshold", p.contrast_threshold},
              {"max_patch_tries", p.max_patch_tries},
              {"max_icon_redraws", p.max_icon_redraws},
              {"max_size_redraws", p.max_size_redraws},
              {"window_size", p.window_size},
              {"rng_seed", p.rng_seed},
              {"canny_low", p.entropy.canny.low},
              {"canny_high", p.entropy.canny.high},
              {"sigma_frac", p.entropy.sigma_frac}};
}

inline std::string sample_name(std::size_t index) {
  std::ostringstream os;
  os << std::setw(6) << std::setfill('0') << index;
  return os.str();
}

inline json annotation_record(const SyntheticSample& s, std::size_t index) {
  json boxes = json::array();
  for (const auto& b : s.boxes) {
    boxes.push_back(json{{"x", b.box.x},
                         {"y", b.box.y},
                         {"w", b.box.w},
                         {"h", b.box.h},
                         {"tag", b.tag},
                         {"icon_id", b.icon_id},
                         {"patch", json{{"x", b.patch.x}, {"y", b.patch.y}, {"w", b.patch.w}, {"h", b.patch.h}}}});
  }
  const std::string name = sample_name(index);
  return json{{"schema_version", kSchemaVersion},
              {"image_id", name},
              {"image_path", "images/" + name + ".png"},
              {"source_id", s.source_id},
              {"window_origin", json::array({s.origin_x, s.origin_y})},
              {"source_scale", s.source_scale},
              {"boxes", std::move(boxes)}};
}

struct DatasetSummary {
  std::size_t samples = 0;
  std::size_t boxes = 0;
};

/// Writes images/NNNNNN.png, annotations.jsonl and manifest.json under `out_dir`.
inline DatasetSummary generate_dataset(std::span<const CorpusImage> corpus, std::span<const IconAsset> pool,
                                       const AugmentParams& params, std::size_t n_windows,
                                       const std::filesystem::path& out_dir, BaselineMode mode = BaselineMode::none,
                                       unsigned threads = default_thread_count()) {
  params.validate();
  if (n_windows > 0) {
    if (pool.empty()) throw ValidationError("generate: icon pool is empty");
    if (corpus.empty() && mode != BaselineMode::blank_background) throw ValidationError("generate: corpus is empty");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "images", ec);
  if (ec) throw IoError((out_dir / "images").string(), "cannot create directory: " + ec.message());

  std::vector<json> records(n_windows);
  parallel_for(n_windows, threads, [&](std::size_t i) {
    const auto s = generate_one(corpus, pool, params, mode, i);
    write_png(out_dir / "images" / (sample_name(i) + ".png"), s.window);
    records[i] = annotation_record(s, i);
  });
  write_jsonl(out_dir / "annotations.jsonl", records);

  DatasetSummary summary{n_windows, 0};
  for (const auto& r : records) summary.boxes += r["boxes"].size();
  write_json(out_dir / "manifest.json", json{{"schema_version", kSchemaVersion},
                                             {"n_windows", n_windows},
                                             {"total_boxes", summary.boxes},
                                             {"mode", std::string(to_string(mode))},
                                             {"corpus_size", corpus.size()},
                                             {"icon_pool_size", pool.size()},
                                             {"params", to_json(params)}});
  return summary;
}

/// Loads the icon manifest (JSONL {id, path, tag, transparent}); paths are
/// relative to the manifest. An icon counts as transparent only if it is
/// declared so and its pixels actually contain alpha < 255.
inline std::vector<IconAsset> load_icon_manifest(const std::filesystem::path& manifest) {
  std::vector<IconAsset> icons;
  const auto base = manifest.parent_path();
  for_each_jsonl(manifest, [&](const json& rec, std::size_t) {
    IconAsset a;
    a.id = require<std::string>(rec, "id");
    a.tag = require<std::string>(rec, "tag");
    const auto rel = require<std::string>(rec, "path");
    a.image = read_image(base / rel);
    const bool declared = rec.value("transparent", true);
    a.transparent = declared && detail::lower_extension(rel) == ".png" && has_transparency(a.image);
    icons.push_back(std::move(a));
  });
  return icons;
}

/// Every PNG/JPEG directly inside `dir`, sorted by file name; id = stem.
inline std::vector<CorpusImage> load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string(), "corpus directory not found");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && is_image_path(e.path())) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusImage> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(CorpusImage{f.stem().string(), to_rgb(read_image(f))});
  return out;
}

}  // namespace iconforge::synthgen
