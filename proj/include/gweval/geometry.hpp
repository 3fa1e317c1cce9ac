// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "gweval/errors.hpp"

namespace gweval {

// Image canvas in pixels.
struct CanvasSize {
  int width = 0;
  int height = 0;

  CanvasSize() = default;
  CanvasSize(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) {
      throw InputDomainError("canvas dimensions must be >= 1, got " +
                             std::to_string(w) + "x" + std::to_string(h));
    }
  }

  friend bool operator==(const CanvasSize&, const CanvasSize&) = default;
};

// Axis-aligned box in pixel coordinates, origin at the image top-left.
// Coordinates are real-valued and follow the half-open convention
// [x_min, x_max) x [y_min, y_max): a shared edge carries no area.
// Width and height are strictly positive; all coordinates finite.
struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  BoundingBox(double x0, double y0, double x1, double y1)
      : x_min(x0), y_min(y0), x_max(x1), y_max(y1) {
    if (!std::isfinite(x0) || !std::isfinite(y0) || !std::isfinite(x1) ||
        !std::isfinite(y1)) {
      throw InputDomainError("bounding box coordinates must be finite");
    }
    if (!(x0 < x1) || !(y0 < y1)) {
      throw InputDomainError("bounding box must have positive extent, got (" +
                             std::to_string(x0) + "," + std::to_string(y0) +
                             "," + std::to_string(x1) + "," +
                             std::to_string(y1) + ")");
    }
  }

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }

  bool within(const CanvasSize& canvas) const {
    return x_min >= 0.0 && y_min >= 0.0 && x_max <= canvas.width &&
           y_max <= canvas.height;
  }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

inline double area(const BoundingBox& b) { return b.width() * b.height(); }

// Intersection over union in [0, 1]. Exactly 1 iff the boxes are equal;
// exactly 0 iff their interiors are disjoint (touching edges count as
// disjoint under the half-open convention).
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double iw =
      std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih =
      std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return inter / (area(a) + area(b) - inter);
}

// The invertible, interpolation-free transform set used for test-time
// augmentation: identity plus the flips and quarter/half rotations.
enum class TTATransform {
  kIdentity,
  kHorizontalFlip,
  kVerticalFlip,
  kRotate90Cw,
  kRotate90Ccw,
  kRotate180,
};

constexpr TTATransform inverse(TTATransform t) {
  switch (t) {
    case TTATransform::kRotate90Cw:
      return TTATransform::kRotate90Ccw;
    case TTATransform::kRotate90Ccw:
      return TTATransform::kRotate90Cw;
    default:
      return t;  // flips, 180 and identity are self-inverse
  }
}

// Canvas of the transformed image: width/height swap for 90-degree
// rotations.
inline CanvasSize transformed_canvas(TTATransform t, const CanvasSize& c) {
  switch (t) {
    case TTATransform::kRotate90Cw:
    case TTATransform::kRotate90Ccw:
      return CanvasSize(c.height, c.width);
    default:
      return c;
  }
}

inline std::string_view to_string(TTATransform t) {
  switch (t) {
    case TTATransform::kIdentity: return "identity";
    case TTATransform::kHorizontalFlip: return "horizontal-flip";
    case TTATransform::kVerticalFlip: return "vertical-flip";
    case TTATransform::kRotate90Cw: return "rotate-90-cw";
    case TTATransform::kRotate90Ccw: return "rotate-90-ccw";
    case TTATransform::kRotate180: return "rotate-180";
  }
  return "identity";
}

inline TTATransform parse_transform(std::string_view name) {
  if (name == "identity") return TTATransform::kIdentity;
  if (name == "horizontal-flip") return TTATransform::kHorizontalFlip;
  if (name == "vertical-flip") return TTATransform::kVerticalFlip;
  if (name == "rotate-90-cw") return TTATransform::kRotate90Cw;
  if (name == "rotate-90-ccw") return TTATransform::kRotate90Ccw;
  if (name == "rotate-180") return TTATransform::kRotate180;
  throw FormatError("unknown transform '" + std::string(name) + "'");
}

// Maps a box through `t` on the given canvas. The box must lie within
// the canvas; the result lies within transformed_canvas(t, canvas).
// On coordinates representable as dyadic fractions of the canvas grid
// the map is exact, so transform followed by its inverse reproduces the
// input bit-for-bit.
inline BoundingBox transform_box(const BoundingBox& b, TTATransform t,
                                 const CanvasSize& canvas) {
  if (!b.within(canvas)) {
    throw InputDomainError("box lies outside the " +
                           std::to_string(canvas.width) + "x" +
                           std::to_string(canvas.height) + " canvas");
  }
  const double w = canvas.width;
  const double h = canvas.height;
  switch (t) {
    case TTATransform::kIdentity:
      return b;
    case TTATransform::kHorizontalFlip:
      return BoundingBox(w - b.x_max, b.y_min, w - b.x_min, b.y_max);
    case TTATransform::kVerticalFlip:
      return BoundingBox(b.x_min, h - b.y_max, b.x_max, h - b.y_min);
    case TTATransform::kRotate180:
      return BoundingBox(w - b.x_max, h - b.y_max, w - b.x_min, h - b.y_min);
    case TTATransform::kRotate90Cw:
      // (x, y) -> (H - y, x) on an HxW canvas.
      return BoundingBox(h - b.y_max, b.x_min, h - b.y_min, b.x_max);
    case TTATransform::kRotate90Ccw:
      // (x, y) -> (y, W - x) on an HxW canvas.
      return BoundingBox(b.y_min, w - b.x_max, b.y_max, w - b.x_min);
  }
  return b;
}

// Intersection of `b` with the canvas rectangle, or nullopt when the
// intersection has zero width or height.
inline std::optional<BoundingBox> clip_box(const BoundingBox& b,
                                           const CanvasSize& canvas) {
  const double x0 = std::max(b.x_min, 0.0);
  const double y0 = std::max(b.y_min, 0.0);
  const double x1 = std::min(b.x_max, static_cast<double>(canvas.width));
  const double y1 = std::min(b.y_max, static_cast<double>(canvas.height));
  if (!(x0 < x1) || !(y0 < y1)) return std::nullopt;
  return BoundingBox(x0, y0, x1, y1);
}

}  // namespace gweval
