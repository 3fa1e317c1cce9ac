// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/geometry.hpp"
#include "gweval/model.hpp"

namespace gweval {

enum class ScoreMode {
  kMean,          // fused score = plain mean of member scores
  kWeightedMean,  // fused score = score-weighted mean of member scores
};

inline std::string_view to_string(ScoreMode m) {
  return m == ScoreMode::kMean ? "mean" : "weighted-mean";
}

inline ScoreMode parse_score_mode(std::string_view name) {
  if (name == "mean") return ScoreMode::kMean;
  if (name == "weighted-mean") return ScoreMode::kWeightedMean;
  throw FormatError("unknown score mode '" + std::string(name) + "'");
}

struct FusionConfig {
  double iou_threshold = 0.55;
  std::vector<double> weights;  // per source; empty = all 1
  ScoreMode score_mode = ScoreMode::kMean;
  double cull_threshold = 0.0;

  void validate(std::size_t source_count) const {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
      throw ConfigError("fusion iou threshold must lie in (0,1]");
    }
    if (!weights.empty() && weights.size() != source_count) {
      throw ConfigError("got " + std::to_string(weights.size()) +
                        " weights for " + std::to_string(source_count) +
                        " sources");
    }
    for (const double w : weights) {
      if (!(w > 0.0)) throw ConfigError("source weights must be > 0");
    }
    if (!(cull_threshold >= 0.0 && cull_threshold <= 1.0)) {
      throw ConfigError("cull threshold must lie in [0,1]");
    }
  }
};

// Greedy non-max suppression: walk detections in ranked order, keep
// one iff it overlaps every already-kept box at IoU <= threshold.
// Output is in ranked order; kept boxes form an antichain under IoU,
// which also makes the operation idempotent.
inline DetectionList nms(const DetectionList& dets, double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw InputDomainError("NMS iou threshold must lie in (0,1]");
  }
  DetectionList kept;
  for (const std::size_t i : ranked_indices(dets)) {
    const bool suppressed =
        std::any_of(kept.begin(), kept.end(), [&](const Detection& k) {
          return iou(k.box, dets[i].box) > iou_threshold;
        });
    if (!suppressed) kept.push_back(dets[i]);
  }
  return kept;
}

namespace detail {

struct WbfCluster {
  std::vector<Detection> members;  // confidences already weighted
  BoundingBox fused;
  double raw_conf_sum = 0.0;  // sum of weighted member confidences
  std::size_t birth = 0;      // creation order, breaks output ties

  WbfCluster(const Detection& first, std::size_t order)
      : fused(first.box), birth(order) {
    members.push_back(first);
    raw_conf_sum = first.confidence;
  }

  // Refit the fused box as the confidence-weighted mean of member
  // coordinates. All-zero confidences degrade to the plain mean so the
  // box stays defined. A mean of identical boxes is taken literally,
  // keeping single-member and unanimous clusters bit-exact.
  void refit() {
    const bool unanimous =
        std::all_of(members.begin(), members.end(), [&](const Detection& m) {
          return m.box == members[0].box;
        });
    if (unanimous) {
      fused = members[0].box;
      return;
    }
    double wsum = 0.0;
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    for (const Detection& m : members) {
      const double w = raw_conf_sum > 0.0 ? m.confidence : 1.0;
      wsum += w;
      x0 += w * m.box.x_min;
      y0 += w * m.box.y_min;
      x1 += w * m.box.x_max;
      y1 += w * m.box.y_max;
    }
    fused = BoundingBox(x0 / wsum, y0 / wsum, x1 / wsum, y1 / wsum);
  }

  double fused_confidence(ScoreMode mode, std::size_t source_count) const {
    double base = 0.0;
    const bool equal_confs =
        std::all_of(members.begin(), members.end(), [&](const Detection& m) {
          return m.confidence == members[0].confidence;
        });
    if (equal_confs) {
      base = members[0].confidence;  // mean of equal values, kept exact
    } else if (mode == ScoreMode::kWeightedMean && raw_conf_sum > 0.0) {
      double num = 0.0;
      for (const Detection& m : members) {
        num += m.confidence * m.confidence;
      }
      base = num / raw_conf_sum;
    } else {
      for (const Detection& m : members) base += m.confidence;
      base /= static_cast<double>(members.size());
    }
    const double t = static_cast<double>(source_count);
    const double n = static_cast<double>(members.size());
    if (n >= t) return std::clamp(base, 0.0, 1.0);
    return std::clamp(base * n / t, 0.0, 1.0);
  }
};

}  // namespace detail

// Weighted boxes fusion across detection sources (models or TTA
// variants). Source weights are normalized to mean 1 before they scale
// confidences, so a uniform weight vector changes nothing. Detections
// are visited in ranked order of weighted confidence; each one joins
// the cluster whose running fused box overlaps it most, provided that
// IoU exceeds the threshold, and otherwise opens a new cluster. A
// cluster's box is the confidence-weighted mean of its members; its
// confidence is the mean member confidence scaled by min(T, N)/T for T
// sources and N members, so boxes corroborated by few sources are
// penalized. Clusters whose confidence ends up below the cull
// threshold are dropped.
inline DetectionList wbf_fuse(const std::vector<DetectionList>& sources,
                              const FusionConfig& cfg = {}) {
  if (sources.empty()) {
    throw InputDomainError("weighted boxes fusion needs at least one source");
  }
  cfg.validate(sources.size());

  std::vector<double> weights = cfg.weights;
  if (weights.empty()) weights.assign(sources.size(), 1.0);
  double wsum = 0.0;
  for (const double w : weights) wsum += w;
  for (double& w : weights) w = w * static_cast<double>(weights.size()) / wsum;

  DetectionList pool;
  for (std::size_t s = 0; s < sources.size(); ++s) {
    for (const Detection& d : sources[s]) {
      pool.push_back(Detection{d.box, d.confidence * weights[s]});
    }
  }

  std::vector<detail::WbfCluster> clusters;
  for (const std::size_t i : ranked_indices(pool)) {
    std::size_t best = clusters.size();
    double best_iou = 0.0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      const double v = iou(clusters[c].fused, pool[i].box);
      if (v > best_iou) {
        best_iou = v;
        best = c;
      }
    }
    if (best != clusters.size() && best_iou > cfg.iou_threshold) {
      clusters[best].members.push_back(pool[i]);
      clusters[best].raw_conf_sum += pool[i].confidence;
      clusters[best].refit();
    } else {
      clusters.emplace_back(pool[i], clusters.size());
    }
  }

  DetectionList fused;
  std::vector<std::size_t> birth;
  for (const auto& c : clusters) {
    const double conf = c.fused_confidence(cfg.score_mode, sources.size());
    if (conf < cfg.cull_threshold) continue;
    fused.push_back(Detection{c.fused, conf});
    birth.push_back(c.birth);
  }
  std::vector<std::size_t> order(fused.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return detection_precedes(fused[a], birth[a], fused[b], birth[b]);
  });
  DetectionList out;
  out.reserve(fused.size());
  for (const std::size_t i : order) out.push_back(fused[i]);
  return out;
}

// Predictions made on transformed images, still in transformed-image
// coordinates.
struct TTAPredictionSet {
  std::string name;
  TTATransform transform = TTATransform::kIdentity;
  std::map<std::string, CanvasSize> canvases;  // transformed canvas
  std::map<std::string, DetectionList> images;
};

// Maps every detection back to original-image coordinates through the
// inverse transform. Confidences pass through untouched.
inline std::map<std::string, DetectionList> detransform_predictions(
    const TTAPredictionSet& p) {
  if (p.transform == TTATransform::kIdentity) return p.images;
  std::map<std::string, DetectionList> out;
  const TTATransform inv = inverse(p.transform);
  for (const auto& [id, dets] : p.images) {
    const auto cit = p.canvases.find(id);
    if (cit == p.canvases.end()) {
      throw InputDomainError("no canvas recorded for image '" + id + "'");
    }
    DetectionList& mapped = out[id];
    mapped.reserve(dets.size());
    for (const Detection& d : dets) {
      mapped.push_back(
          Detection{transform_box(d.box, inv, cit->second), d.confidence});
    }
  }
  return out;
}

// De-transforms every variant and fuses them per image, one variant
// per fusion source. All variants must cover the same image ids.
inline PredictionSet tta_merge(const std::vector<TTAPredictionSet>& variants,
                               const FusionConfig& cfg = {}) {
  if (variants.empty()) {
    throw InputDomainError("TTA merge needs at least one variant");
  }
  std::set<std::string> reference;
  for (const auto& [id, dets] : variants[0].images) reference.insert(id);
  for (std::size_t v = 1; v < variants.size(); ++v) {
    std::set<std::string> ids;
    for (const auto& [id, dets] : variants[v].images) ids.insert(id);
    if (ids != reference) {
      std::string diff;
      for (const auto& id : reference) {
        if (!ids.count(id)) diff += " -" + id;
      }
      for (const auto& id : ids) {
        if (!reference.count(id)) diff += " +" + id;
      }
      throw InputDomainError("variant '" + variants[v].name +
                             "' covers a different image set than '" +
                             variants[0].name + "':" + diff);
    }
  }

  std::vector<std::map<std::string, DetectionList>> restored;
  restored.reserve(variants.size());
  for (const auto& v : variants) {
    restored.push_back(detransform_predictions(v));
  }

  PredictionSet merged;
  merged.name = "tta-merge";
  for (const auto& id : reference) {
    std::vector<DetectionList> sources;
    sources.reserve(restored.size());
    for (const auto& r : restored) sources.push_back(r.at(id));
    merged.images[id] = wbf_fuse(sources, cfg);
  }
  return merged;
}

// Promotes confident detections to reference labels. Boxes are clipped
// to their image canvas (a prediction may legally poke past the edge);
// a clipped-away box is dropped. The produced set is tagged "pseudo".
inline GroundTruthSet pseudo_label(
    const PredictionSet& p, double confidence_threshold,
    const std::map<std::string, CanvasSize>& canvases,
    WarningLog* warnings = nullptr) {
  if (!(confidence_threshold >= 0.0 && confidence_threshold <= 1.0)) {
    throw InputDomainError("confidence threshold must lie in [0,1]");
  }
  GroundTruthSet out;
  out.label_variant = "pseudo";
  for (const auto& [id, dets] : p.images) {
    const auto cit = canvases.find(id);
    if (cit == canvases.end()) {
      throw InputDomainError("no canvas recorded for image '" + id + "'");
    }
    ImageAnnotation& ann =
        out.images.try_emplace(id, ImageAnnotation{cit->second, {}})
            .first->second;
    for (const Detection& d : dets) {
      if (d.confidence < confidence_threshold) continue;
      if (d.box.within(cit->second)) {
        ann.boxes.push_back(d.box);
        continue;
      }
      const auto clipped = clip_box(d.box, cit->second);
      if (clipped) {
        ann.boxes.push_back(*clipped);
        if (warnings) {
          warnings->add("clipped out-of-canvas box in image '" + id + "'");
        }
      } else if (warnings) {
        warnings->add("dropped box entirely outside canvas in image '" + id +
                      "'");
      }
    }
  }
  return out;
}

}  // namespace gweval
