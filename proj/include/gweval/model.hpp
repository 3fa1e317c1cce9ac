// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "gweval/geometry.hpp"

namespace gweval {

// One predicted box with its confidence score in [0, 1].
struct Detection {
  BoundingBox box;
  double confidence = 0.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

using BoxList = std::vector<BoundingBox>;
using DetectionList = std::vector<Detection>;

// Total order used wherever detections are ranked: higher confidence
// first; the coordinate tuple ascending breaks confidence ties; the
// caller-supplied position breaks exact duplicates. Every ranking in
// the toolkit goes through this so results never depend on sort
// stability or input shuffling.
inline bool detection_precedes(const Detection& a, std::size_t pos_a,
                               const Detection& b, std::size_t pos_b) {
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  const auto key = [](const Detection& d) {
    return std::tie(d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max);
  };
  if (key(a) != key(b)) return key(a) < key(b);
  return pos_a < pos_b;
}

// Indices of `dets` in ranked order.
inline std::vector<std::size_t> ranked_indices(const DetectionList& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return detection_precedes(dets[i], i, dets[j], j);
  });
  return order;
}

// Reference boxes for one image.
struct ImageAnnotation {
  CanvasSize canvas;
  BoxList boxes;

  friend bool operator==(const ImageAnnotation&,
                         const ImageAnnotation&) = default;
};

// A full annotation release. `label_variant` is free text naming the
// release the boxes came from; the toolkit treats alternate releases
// as interchangeable inputs.
struct GroundTruthSet {
  std::string label_variant;
  std::map<std::string, ImageAnnotation> images;

  friend bool operator==(const GroundTruthSet&,
                         const GroundTruthSet&) = default;
};

// One model's predictions over a set of images.
struct PredictionSet {
  std::string name;
  std::map<std::string, DetectionList> images;

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

// image id -> domain id. Every image belongs to exactly one domain.
struct DomainManifest {
  std::map<std::string, std::string> domains;

  friend bool operator==(const DomainManifest&,
                         const DomainManifest&) = default;
};

// Non-fatal notes accumulated while parsing or transforming inputs
// (dropped degenerate boxes, clipped annotations, ignored ids).
struct WarningLog {
  std::vector<std::string> messages;

  void add(std::string message) { messages.push_back(std::move(message)); }
  std::size_t count() const { return messages.size(); }
  bool empty() const { return messages.empty(); }
};

}  // namespace gweval
