// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/matching.hpp"
#include "gweval/metrics.hpp"
#include "gweval/model.hpp"
#include "gweval/parallel.hpp"

namespace gweval {

// Scores one prediction set against the reference. Every reference
// image is scored; an image the submission skips is scored with zero
// detections (and tallied as a warning), mirroring how a leaderboard
// treats omissions. Predictions for unknown image ids are ignored with
// a warning. Images are independent, so the sweeps run in parallel
// (worker count capped by GWEVAL_THREADS); every result lands in its
// own preallocated slot, keeping the report identical for any worker
// count.
inline EvaluationReport evaluate_dataset(const GroundTruthSet& gt,
                                         const PredictionSet& preds,
                                         const DomainManifest& domains,
                                         const EvalOptions& options = {}) {
  if (gt.images.empty()) {
    throw InputDomainError("ground truth set holds no images");
  }
  if (options.thresholds.empty()) {
    throw ConfigError("threshold list must not be empty");
  }
  for (const double t : options.thresholds) {
    if (!(t > 0.0 && t <= 1.0)) {
      throw ConfigError("IoU thresholds must lie in (0,1]");
    }
  }

  EvaluationReport report;
  report.thresholds = options.thresholds;

  static const DetectionList kNoDetections;
  std::vector<std::pair<const std::string*, const ImageAnnotation*>> items;
  items.reserve(gt.images.size());
  for (const auto& [id, ann] : gt.images) {
    // Domain lookups fail fast, before any scoring work happens.
    (void)detail::domain_of(domains, id);
    items.emplace_back(&id, &ann);
    if (!preds.images.count(id)) {
      report.warnings.add("no predictions for image '" + id + "'");
    }
  }
  for (const auto& [id, dets] : preds.images) {
    if (!gt.images.count(id)) {
      report.warnings.add("ignoring predictions for unknown image '" + id +
                          "'");
    }
  }

  report.images.resize(items.size());
  parallel_for(items.size(), [&](std::size_t i) {
    const std::string& id = *items[i].first;
    const ImageAnnotation& ann = *items[i].second;
    const auto pit = preds.images.find(id);
    const DetectionList& dets =
        pit == preds.images.end() ? kNoDetections : pit->second;

    ImageScore score;
    score.image_id = id;
    score.domain = domains.domains.at(id);
    const auto ious = detail::iou_matrix(ann.boxes, dets);
    const auto order = ranked_indices(dets);
    score.sweep.reserve(options.thresholds.size());
    for (const double t : options.thresholds) {
      score.sweep.push_back(
          detail::match_with_matrix(ious, order, ann.boxes.size(), t));
    }
    score.accuracy_exact = image_accuracy_exact(score.sweep);
    score.accuracy = to_double(score.accuracy_exact);
    report.images[i] = std::move(score);
  });

  for (const ImageScore& s : report.images) {
    const auto git = gt.images.find(s.image_id);
    if (git->second.boxes.empty() && s.sweep.front().fp == 0) {
      ++report.empty_empty_images;
    }
  }

  report.n = report.images.size();
  report.kaggle_exact = kaggle_accuracy_exact(report.images);
  report.kaggle_accuracy = to_double(report.kaggle_exact);
  report.weighted_exact = weighted_accuracy_exact(report.images, domains);
  report.weighted_accuracy = to_double(report.weighted_exact);
  report.domains = domain_aggregates(report.images, domains);
  report.domain_count = report.domains.size();
  if (options.retain_pairs) {
    report.histogram = missed_size_histogram(report.images, gt);
  }
  return report;
}

}  // namespace gweval
