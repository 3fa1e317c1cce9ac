// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared generators and independent reference implementations used as
// oracles across the test suite.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <tuple>
#include <vector>

#include "gweval/geometry.hpp"
#include "gweval/matching.hpp"
#include "gweval/model.hpp"
#include "gweval/rng.hpp"

namespace testutil {

using namespace gweval;

// Boxes on a small integer grid so overlaps and exact ties are common.
inline BoundingBox random_overlap_box(SeededRng& rng) {
  const double x = static_cast<double>(rng.uniform_int(20));
  const double y = static_cast<double>(rng.uniform_int(20));
  const double w = static_cast<double>(1 + rng.uniform_int(10));
  const double h = static_cast<double>(1 + rng.uniform_int(10));
  return BoundingBox(x, y, x + w, y + h);
}

inline BoxList random_gt_boxes(SeededRng& rng, std::size_t max_boxes) {
  BoxList out;
  const std::size_t n = rng.uniform_int(max_boxes + 1);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_overlap_box(rng));
  return out;
}

// Confidences on a coarse grid so equal-confidence tie-breaking is
// exercised constantly.
inline DetectionList random_detections(SeededRng& rng,
                                       std::size_t max_boxes) {
  DetectionList out;
  const std::size_t n = rng.uniform_int(max_boxes + 1);
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(Detection{random_overlap_box(rng),
                            static_cast<double>(rng.uniform_int(21)) / 20.0});
  }
  return out;
}

// Box whose corners sit on the 1/1024 grid inside the canvas; flips and
// rotations are exact on these coordinates.
inline BoundingBox random_grid_box(SeededRng& rng, const CanvasSize& canvas) {
  const auto coord = [&](int extent) {
    const std::uint64_t steps = static_cast<std::uint64_t>(extent) * 1024 + 1;
    return static_cast<double>(rng.uniform_int(steps)) / 1024.0;
  };
  for (;;) {
    double x0 = coord(canvas.width);
    double x1 = coord(canvas.width);
    double y0 = coord(canvas.height);
    double y1 = coord(canvas.height);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    if (x0 < x1 && y0 < y1) return BoundingBox(x0, y0, x1, y1);
  }
}

// Straight-line re-derivation of the greedy matcher, written without
// reusing the library's matrix/order machinery. IoU is recomputed from
// raw coordinates here on purpose.
inline MatchResult reference_match(const BoxList& gt,
                                   const DetectionList& preds,
                                   double threshold) {
  const auto raw_iou = [](const BoundingBox& a, const BoundingBox& b) {
    const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    const double area_a = (a.x_max - a.x_min) * (a.y_max - a.y_min);
    const double area_b = (b.x_max - b.x_min) * (b.y_max - b.y_min);
    return inter / (area_a + area_b - inter);
  };

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (preds[a].confidence != preds[b].confidence) {
      return preds[a].confidence > preds[b].confidence;
    }
    const auto& ba = preds[a].box;
    const auto& bb = preds[b].box;
    const auto ta = std::tie(ba.x_min, ba.y_min, ba.x_max, ba.y_max);
    const auto tb = std::tie(bb.x_min, bb.y_min, bb.x_max, bb.y_max);
    if (ta != tb) return ta < tb;
    return a < b;
  });

  MatchResult r;
  r.threshold = threshold;
  std::vector<char> taken(gt.size(), 0);
  for (const std::size_t i : order) {
    std::size_t best = gt.size();
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if (taken[g]) continue;
      const double v = raw_iou(preds[i].box, gt[g]);
      if (v > best_iou) {
        best_iou = v;
        best = g;
      }
    }
    if (best < gt.size() && best_iou >= threshold) {
      taken[best] = 1;
      ++r.tp;
      r.pairs.push_back(MatchedPair{i, best, best_iou});
    } else {
      ++r.fp;
    }
  }
  r.fn = gt.size() - r.tp;
  return r;
}

// Exhaustive maximum-cardinality matching over iou >= threshold pairs.
// Only usable for tiny instances; the greedy result can never beat it.
inline std::size_t optimal_assignment_tp(const BoxList& gt,
                                         const DetectionList& preds,
                                         double threshold) {
  std::vector<std::vector<char>> ok(preds.size(),
                                    std::vector<char>(gt.size(), 0));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      ok[i][g] = iou(preds[i].box, gt[g]) >= threshold ? 1 : 0;
    }
  }
  std::function<std::size_t(std::size_t, unsigned)> go =
      [&](std::size_t i, unsigned used) -> std::size_t {
    if (i == preds.size()) return 0;
    std::size_t best = go(i + 1, used);
    for (std::size_t g = 0; g < gt.size(); ++g) {
      if ((used >> g & 1u) || !ok[i][g]) continue;
      best = std::max(best, 1 + go(i + 1, used | (1u << g)));
    }
    return best;
  };
  return go(0, 0);
}

}  // namespace testutil
