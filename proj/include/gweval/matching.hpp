// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/model.hpp"
#include "gweval/rational.hpp"

namespace gweval {

// The competition sweep: IoU thresholds 0.50 through 0.75 in steps of
// 0.05.
inline constexpr std::array<double, 6> kIouThresholds = {0.50, 0.55, 0.60,
                                                         0.65, 0.70, 0.75};

struct MatchedPair {
  std::size_t pred_index = 0;
  std::size_t gt_index = 0;
  double iou = 0.0;
};

// Outcome of matching one image at one threshold.
// tp + fn = |gt| and tp + fp = |preds| always hold.
struct MatchResult {
  double threshold = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::vector<MatchedPair> pairs;
};

using ThresholdSweep = std::vector<MatchResult>;

namespace detail {

// IoU of every (prediction, ground truth) pair, row per prediction.
inline std::vector<std::vector<double>> iou_matrix(const BoxList& gt,
                                                   const DetectionList& preds) {
  std::vector<std::vector<double>> m(preds.size(),
                                     std::vector<double>(gt.size(), 0.0));
  for (std::size_t p = 0; p < preds.size(); ++p) {
    for (std::size_t g = 0; g < gt.size(); ++g) {
      m[p][g] = iou(preds[p].box, gt[g]);
    }
  }
  return m;
}

inline MatchResult match_with_matrix(
    const std::vector<std::vector<double>>& ious,
    const std::vector<std::size_t>& order, std::size_t gt_count,
    double threshold) {
  MatchResult result;
  result.threshold = threshold;
  std::vector<char> gt_used(gt_count, 0);
  for (const std::size_t p : order) {
    std::size_t best_g = gt_count;
    double best_iou = 0.0;
    for (std::size_t g = 0; g < gt_count; ++g) {
      if (gt_used[g]) continue;
      // Strictly better IoU wins; on an exact tie the earlier ground
      // truth box keeps the match.
      if (ious[p][g] > best_iou) {
        best_iou = ious[p][g];
        best_g = g;
      }
    }
    if (best_g != gt_count && best_iou >= threshold) {
      gt_used[best_g] = 1;
      result.pairs.push_back(MatchedPair{p, best_g, best_iou});
      ++result.tp;
    } else {
      ++result.fp;
    }
  }
  result.fn = gt_count - result.tp;
  return result;
}

}  // namespace detail

// Greedy matching at one threshold. Detections are visited in ranked
// order (confidence descending with total tie-breaking); each one
// claims the unmatched ground truth box of highest IoU when that IoU
// reaches the threshold, otherwise it counts as a false positive.
// Leftover ground truth boxes count as false negatives.
inline MatchResult match_image(const BoxList& gt, const DetectionList& preds,
                               double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw InputDomainError("IoU threshold must lie in (0,1]");
  }
  return detail::match_with_matrix(detail::iou_matrix(gt, preds),
                                   ranked_indices(preds), gt.size(),
                                   threshold);
}

// One MatchResult per sweep threshold. The IoU matrix and the ranked
// order are computed once and shared across thresholds.
inline ThresholdSweep sweep_thresholds(const BoxList& gt,
                                       const DetectionList& preds) {
  const auto ious = detail::iou_matrix(gt, preds);
  const auto order = ranked_indices(preds);
  ThresholdSweep sweep;
  sweep.reserve(kIouThresholds.size());
  for (const double t : kIouThresholds) {
    sweep.push_back(detail::match_with_matrix(ious, order, gt.size(), t));
  }
  return sweep;
}

// Per-image accuracy: mean over thresholds of TP/(TP+FP+FN). An image
// with no boxes on either side has nothing to get wrong, so an empty
// denominator scores 1. Kept as an exact fraction; downstream means
// stay exact until final rounding.
inline Rational image_accuracy_exact(const ThresholdSweep& sweep) {
  if (sweep.empty()) throw InputDomainError("empty threshold sweep");
  Rational sum = 0;
  for (const MatchResult& r : sweep) {
    const std::size_t denom = r.tp + r.fp + r.fn;
    if (denom == 0) {
      sum += 1;
    } else {
      sum += Rational(r.tp) / denom;
    }
  }
  return sum / sweep.size();
}

inline double image_accuracy(const ThresholdSweep& sweep) {
  return to_double(image_accuracy_exact(sweep));
}

}  // namespace gweval
