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
#include <cmath>
#include <ostream>

namespace iconforge {

/// Axis-aligned box, half-open [x, x+w) x [y, y+h), top-left origin.
/// Coordinates are doubles so that boxes mapped back from rescaled tiles
/// keep sub-pixel precision; ground truth is integral in practice.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double right() const noexcept { return x + w; }
  double bottom() const noexcept { return y + h; }
  double area() const noexcept { return w * h; }
  bool valid() const noexcept { return w > 0.0 && h > 0.0; }

  bool inside(double width, double height, double tol = 1e-9) const noexcept {
    return x >= -tol && y >= -tol && right() <= width + tol &&
           bottom() <= height + tol;
  }

  friend bool operator==(const BBox&, const BBox&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const BBox& b) {
  return os << "(" << b.x << "," << b.y << "," << b.w << "," << b.h << ")";
}

inline double intersection_area(const BBox& a, const BBox& b) noexcept {
  const double iw = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  return iw * ih;
}

/// Intersection over union; 0 for degenerate boxes.
inline double iou(const BBox& a, const BBox& b) noexcept {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

/// Fraction of `part`'s own area covered by `whole`.
inline double containment(const BBox& part, const BBox& whole) noexcept {
  const double a = part.area();
  return a > 0.0 ? intersection_area(part, whole) / a : 0.0;
}

}  // namespace iconforge
