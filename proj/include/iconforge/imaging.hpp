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

// Per-pixel primitives used by the synthetic-data gates and the tiler.
// Everything here is a pure function of its inputs.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "iconforge/bbox.hpp"
#include "iconforge/errors.hpp"

namespace iconforge {

/// 8-bit image, row-major, interleaved channels (1 = gray, 3 = RGB, 4 = RGBA).
class RasterImage {
 public:
  RasterImage() = default;

  RasterImage(int width, int height, int channels, std::uint8_t fill = 0)
      : width_(width), height_(height), channels_(channels) {
    check_shape(width, height, channels);
    pixels_.assign(static_cast<std::size_t>(width) * height * channels, fill);
  }

  RasterImage(int width, int height, int channels, std::vector<std::uint8_t> pixels)
      : width_(width), height_(height), channels_(channels), pixels_(std::move(pixels)) {
    check_shape(width, height, channels);
    if (pixels_.size() != static_cast<std::size_t>(width) * height * channels) {
      throw ValidationError("pixel buffer length does not match width*height*channels");
    }
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return pixels_.empty(); }
  bool has_alpha() const noexcept { return channels_ == 4; }

  std::uint8_t& at(int x, int y, int c) noexcept { return pixels_[index(x, y, c)]; }
  std::uint8_t at(int x, int y, int c) const noexcept { return pixels_[index(x, y, c)]; }

  /// Alpha of a pixel; 255 for images without an alpha channel.
  std::uint8_t alpha(int x, int y) const noexcept {
    return channels_ == 4 ? at(x, y, 3) : std::uint8_t{255};
  }

  std::span<std::uint8_t> pixels() noexcept { return pixels_; }
  std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  void fill_rgb(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const std::array<std::uint8_t, 3> rgb{r, g, b};
    for (std::size_t i = 0; i < pixels_.size(); i += channels_) {
      for (int c = 0; c < channels_; ++c) pixels_[i + c] = c < 3 ? rgb[c] : std::uint8_t{255};
    }
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  static void check_shape(int w, int h, int c) {
    if (w < 1 || h < 1) throw ValidationError("image dimensions must be >= 1");
    if (c != 1 && c != 3 && c != 4) throw ValidationError("image must have 1, 3 or 4 channels");
  }

  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Binary (0/1) edge response per pixel.
struct EdgeMap {
  int width = 0;
  int height = 0;
  std::vector<float> values;

  float at(int x, int y) const noexcept { return values[static_cast<std::size_t>(y) * width + x]; }
  std::size_t count() const noexcept {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](float v) { return v > 0.0f; }));
  }
};

/// Separable Gaussian weights; weight(x, y) = wx[x] * wy[y], peak 1.
struct WeightWindow {
  int width = 0;
  int height = 0;
  std::vector<double> weights;

  double at(int x, int y) const noexcept { return weights[static_cast<std::size_t>(y) * width + x]; }
};

struct CannyParams {
  double low = 50.0;
  double high = 150.0;
};

struct EntropyParams {
  CannyParams canny;
  double sigma_frac = 0.33;
};

namespace detail {

inline std::uint8_t clamp_u8(double v) {
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0L, 255L));
}

inline std::vector<double> gaussian_profile(int n, double sigma) {
  std::vector<double> p(static_cast<std::size_t>(n));
  const double c = (n - 1) / 2.0;
  for (int i = 0; i < n; ++i) {
    const double d = i - c;
    p[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  return p;
}

inline std::vector<float> luma_plane(const RasterImage& img) {
  const int w = img.width(), h = img.height();
  std::vector<float> out(static_cast<std::size_t>(w) * h);
  const auto px = img.pixels();
  const int ch = img.channels();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::uint8_t* p = px.data() + i * ch;
    out[i] = ch < 3 ? p[0] : static_cast<float>(std::lround(0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2]));
  }
  return out;
}

}  // namespace detail

/// Rec. 601 luma, single channel. Gray input is copied through.
inline RasterImage to_grayscale(const RasterImage& img) {
  const auto plane = detail::luma_plane(img);
  std::vector<std::uint8_t> px(plane.size());
  std::transform(plane.begin(), plane.end(), px.begin(), [](float v) { return static_cast<std::uint8_t>(v); });
  return RasterImage(img.width(), img.height(), 1, std::move(px));
}

/// Canny edge detector: 5x5 Gaussian blur (sigma 1.4), Sobel gradients,
/// non-maximum suppression along the gradient, hysteresis. Thresholds apply
/// to the raw L2 Sobel magnitude. Output values are 0 or 1.
inline EdgeMap canny(const RasterImage& img, const CannyParams& params = {}) {
  if (!(params.low < params.high)) throw ValidationError("canny: low threshold must be below high threshold");
  const int w = img.width(), h = img.height();
  const std::size_t n = static_cast<std::size_t>(w) * h;
  auto src = detail::luma_plane(img);

  std::array<float, 5> k{};
  {
    double sum = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double d = i - 2;
      k[i] = static_cast<float>(std::exp(-(d * d) / (2.0 * 1.4 * 1.4)));
      sum += k[i];
    }
    for (auto& v : k) v = static_cast<float>(v / sum);
  }
  auto cx = [w](int x) { return std::clamp(x, 0, w - 1); };
  auto cy = [h](int y) { return std::clamp(y, 0, h - 1); };

  std::vector<float> tmp(n), blur(n);
  for (int y = 0; y < h; ++y) {
    const float* row = src.data() + static_cast<std::size_t>(y) * w;
    float* out = tmp.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * row[cx(x + i)];
      out[x] = acc;
    }
  }
  for (int y = 0; y < h; ++y) {
    float* out = blur.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      float acc = 0.0f;
      for (int i = -2; i <= 2; ++i) acc += k[i + 2] * tmp[static_cast<std::size_t>(cy(y + i)) * w + x];
      out[x] = acc;
    }
  }

  std::vector<float> mag(n);
  std::vector<std::uint8_t> dir(n);  // 0: horizontal gradient, 1: vertical, 2: diag "\", 3: diag "/"
  constexpr double kTan22 = 0.41421356237309503;
  constexpr double kTan67 = 2.414213562373095;
  auto b = [&](int x, int y) { return blur[static_cast<std::size_t>(cy(y)) * w + cx(x)]; };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float gx = (b(x + 1, y - 1) + 2 * b(x + 1, y) + b(x + 1, y + 1)) -
                       (b(x - 1, y - 1) + 2 * b(x - 1, y) + b(x - 1, y + 1));
      const float gy = (b(x - 1, y + 1) + 2 * b(x, y + 1) + b(x + 1, y + 1)) -
                       (b(x - 1, y - 1) + 2 * b(x, y - 1) + b(x + 1, y - 1));
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      mag[i] = std::sqrt(gx * gx + gy * gy);
      const double ax = std::fabs(gx), ay = std::fabs(gy);
      if (ay <= ax * kTan22) dir[i] = 0;
      else if (ay > ax * kTan67) dir[i] = 1;
      else dir[i] = (gx * gy > 0) ? 2 : 3;
    }
  }

  auto m = [&](int x, int y) -> float {
    if (x < 0 || y < 0 || x >= w || y >= h) return 0.0f;
    return mag[static_cast<std::size_t>(y) * w + x];
  };
  // 0 = none, 1 = weak, 2 = strong
  std::vector<std::uint8_t> cls(n, 0);
  std::vector<std::size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const float v = mag[i];
      if (v <= params.low) continue;
      float prev = 0, next = 0;
      switch (dir[i]) {
        case 0: prev = m(x - 1, y); next = m(x + 1, y); break;
        case 1: prev = m(x, y - 1); next = m(x, y + 1); break;
        case 2: prev = m(x - 1, y - 1); next = m(x + 1, y + 1); break;
        default: prev = m(x + 1, y - 1); next = m(x - 1, y + 1); break;
      }
      if (!(v > prev && v >= next)) continue;
      if (v > params.high) {
        cls[i] = 2;
        stack.push_back(i);
      } else {
        cls[i] = 1;
      }
    }
  }

  EdgeMap out{w, h, std::vector<float>(n, 0.0f)};
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    if (out.values[i] > 0.0f) continue;
    out.values[i] = 1.0f;
    const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = x + dx, ny = y + dy;
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
        if (cls[j] != 0 && out.values[j] == 0.0f) stack.push_back(j);
      }
    }
  }
  return out;
}

/// Gaussian weights centred on ((w-1)/2, (h-1)/2) with sigma = sigma_frac * side.
inline WeightWindow gaussian_window(int w, int h, double sigma_frac) {
  if (w < 1 || h < 1) throw ValidationError("gaussian_window: dimensions must be >= 1");
  if (!(sigma_frac > 0.0)) throw ValidationError("gaussian_window: sigma_frac must be positive");
  const auto wx = detail::gaussian_profile(w, sigma_frac * w);
  const auto wy = detail::gaussian_profile(h, sigma_frac * h);
  WeightWindow win{w, h, std::vector<double>(static_cast<std::size_t>(w) * h)};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) win.weights[static_cast<std::size_t>(y) * w + x] = wx[x] * wy[y];
  return win;
}

/// Gaussian-weighted edge density normalised by total weight mass; in [0, 1].
inline double entropy_from_edges(const EdgeMap& edges, double sigma_frac) {
  if (!(sigma_frac > 0.0)) throw ValidationError("entropy: sigma_frac must be positive");
  const auto wx = detail::gaussian_profile(edges.width, sigma_frac * edges.width);
  const auto wy = detail::gaussian_profile(edges.height, sigma_frac * edges.height);
  double num = 0.0;
  for (int y = 0; y < edges.height; ++y) {
    double row = 0.0;
    const float* e = edges.values.data() + static_cast<std::size_t>(y) * edges.width;
    for (int x = 0; x < edges.width; ++x)
      if (e[x] > 0.0f) row += e[x] * wx[x];
    num += row * wy[y];
  }
  double sx = 0.0, sy = 0.0;
  for (double v : wx) sx += v;
  for (double v : wy) sy += v;
  return std::clamp(num / (sx * sy), 0.0, 1.0);
}

inline double patch_entropy(const RasterImage& patch, const EntropyParams& params = {}) {
  if (patch.empty()) throw ValidationError("patch_entropy: empty patch");
  return entropy_from_edges(canny(patch, params.canny), params.sigma_frac);
}

namespace detail {

struct ColorStats {
  std::size_t count = 0;
  double variance = 0.0;  // mean of per-channel population variances
};

inline ColorStats rgb_variance(const RasterImage& img, bool opaque_only) {
  std::array<double, 3> sum{}, sq{};
  std::size_t count = 0;
  const int ch = img.channels();
  const auto px = img.pixels();
  for (std::size_t i = 0; i < px.size(); i += ch) {
    if (opaque_only && ch == 4 && px[i + 3] == 0) continue;
    for (int c = 0; c < 3; ++c) {
      const double v = px[i + std::min(c, ch - 1)];
      sum[c] += v;
      sq[c] += v * v;
    }
    ++count;
  }
  ColorStats s{count, 0.0};
  if (count == 0) return s;
  for (int c = 0; c < 3; ++c) {
    const double mean = sum[c] / count;
    s.variance += std::max(0.0, sq[c] / count - mean * mean);
  }
  s.variance /= 3.0;
  return s;
}

}  // namespace detail

/// |Var(patch) - Var(opaque icon pixels)|, variances averaged over RGB.
inline double contrast_score(const RasterImage& patch, const RasterImage& icon) {
  const auto icon_stats = detail::rgb_variance(icon, true);
  if (icon_stats.count == 0) throw ValidationError("contrast_score: icon has no opaque pixels");
  const auto patch_stats = detail::rgb_variance(patch, false);
  return std::fabs(patch_stats.variance - icon_stats.variance);
}

/// Pastes `icon` at (x, y) with straight-alpha "over" blending.
inline RasterImage alpha_composite(const RasterImage& base, const RasterImage& icon, int x, int y) {
  if (x < 0 || y < 0 || x + icon.width() > base.width() || y + icon.height() > base.height()) {
    throw ValidationError("alpha_composite: icon does not fit inside base at (" + std::to_string(x) + "," +
                          std::to_string(y) + ")");
  }
  RasterImage out = base;
  const int bc = base.channels();
  const int ic = icon.channels();
  for (int iy = 0; iy < icon.height(); ++iy) {
    for (int ix = 0; ix < icon.width(); ++ix) {
      const std::uint8_t a8 = icon.alpha(ix, iy);
      if (a8 == 0) continue;
      const double a = a8 / 255.0;
      for (int c = 0; c < bc; ++c) {
        const double src = c == 3 ? 255.0 : icon.at(ix, iy, std::min(c, ic < 3 ? 0 : 2));
        const double dst = base.at(x + ix, y + iy, c);
        out.at(x + ix, y + iy, c) = detail::clamp_u8(a * src + (1.0 - a) * dst);
      }
    }
  }
  return out;
}

/// Bilinear resampling of `region` (source coordinates, may be fractional)
/// into an out_w x out_h image, half-pixel-centre convention, edge clamped.
inline RasterImage resample_region(const RasterImage& img, const BBox& region, int out_w, int out_h) {
  if (out_w < 1 || out_h < 1) throw ValidationError("resize: target dimensions must be >= 1");
  RasterImage out(out_w, out_h, img.channels());
  const int ch = img.channels();
  const double sx = region.w / out_w, sy = region.h / out_h;
  std::vector<int> x0(out_w), x1(out_w);
  std::vector<double> fx(out_w);
  for (int u = 0; u < out_w; ++u) {
    const double px = std::clamp(region.x + (u + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
    x0[u] = static_cast<int>(std::floor(px));
    x1[u] = std::min(x0[u] + 1, img.width() - 1);
    fx[u] = px - x0[u];
  }
  for (int v = 0; v < out_h; ++v) {
    const double py = std::clamp(region.y + (v + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
    const int y0 = static_cast<int>(std::floor(py));
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = py - y0;
    for (int u = 0; u < out_w; ++u) {
      const double w00 = (1 - fx[u]) * (1 - fy), w10 = fx[u] * (1 - fy), w01 = (1 - fx[u]) * fy, w11 = fx[u] * fy;
      if (ch == 4) {  // premultiplied, so fully transparent pixels carry no colour
        const double a00 = img.at(x0[u], y0, 3) * w00, a10 = img.at(x1[u], y0, 3) * w10;
        const double a01 = img.at(x0[u], y1, 3) * w01, a11 = img.at(x1[u], y1, 3) * w11;
        const double a = a00 + a10 + a01 + a11;
        for (int c = 0; c < 3; ++c) {
          const double sum = img.at(x0[u], y0, c) * a00 + img.at(x1[u], y0, c) * a10 + img.at(x0[u], y1, c) * a01 +
                             img.at(x1[u], y1, c) * a11;
          out.at(u, v, c) = a > 0 ? detail::clamp_u8(sum / a) : std::uint8_t{0};
        }
        out.at(u, v, 3) = detail::clamp_u8(a);
        continue;
      }
      for (int c = 0; c < ch; ++c) {
        const double top = img.at(x0[u], y0, c) * (1 - fx[u]) + img.at(x1[u], y0, c) * fx[u];
        const double bot = img.at(x0[u], y1, c) * (1 - fx[u]) + img.at(x1[u], y1, c) * fx[u];
        out.at(u, v, c) = detail::clamp_u8(top * (1 - fy) + bot * fy);
      }
    }
  }
  return out;
}

inline RasterImage resize(const RasterImage& img, int new_w, int new_h) {
  if (new_w == img.width() && new_h == img.height()) return img;
  return resample_region(img, BBox{0, 0, static_cast<double>(img.width()), static_cast<double>(img.height())},
                         new_w, new_h);
}

/// Integer crop; the rectangle must lie inside the image.
inline RasterImage crop(const RasterImage& img, int x, int y, int w, int h) {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > img.width() || y + h > img.height())
    throw ValidationError("crop: rectangle outside image");
  RasterImage out(w, h, img.channels());
  const std::size_t row = static_cast<std::size_t>(w) * img.channels();
  for (int r = 0; r < h; ++r) {
    const auto src = img.pixels().subspan((static_cast<std::size_t>(y + r) * img.width() + x) * img.channels(), row);
    std::copy(src.begin(), src.end(), out.pixels().begin() + static_cast<std::ptrdiff_t>(r * row));
  }
  return out;
}

/// True iff some pixel is not fully opaque.
inline bool has_transparency(const RasterImage& img) {
  if (!img.has_alpha()) return false;
  const auto px = img.pixels();
  for (std::size_t i = 3; i < px.size(); i += 4)
    if (px[i] < 255) return true;
  return false;
}

/// RGB(A) copy of any image; gray is expanded to three equal channels.
inline RasterImage to_rgb(const RasterImage& img) {
  if (img.channels() == 3) return img;
  RasterImage out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y, img.channels() == 1 ? 0 : c);
  return out;
}

inline RasterImage to_rgba(const RasterImage& img) {
  if (img.channels() == 4) return img;
  RasterImage out(img.width(), img.height(), 4, std::uint8_t{255});
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(x, y, img.channels() == 1 ? 0 : c);
  return out;
}

}  // namespace iconforge
