// SPDX-License-Identifier: Apache-2.0
//
// Scores a small in-memory dataset and prints the two headline
// accuracies plus a per-domain breakdown.
#include <cstdio>

#include "gweval/gweval.hpp"

int main() {
  using namespace gweval;

  GroundTruthSet gt;
  gt.images["field_a_0"] =
      ImageAnnotation{CanvasSize{1024, 1024}, {BoundingBox{10, 10, 50, 50}}};
  gt.images["field_a_1"] =
      ImageAnnotation{CanvasSize{1024, 1024}, {BoundingBox{0, 0, 100, 100}}};
  gt.images["field_b_0"] =
      ImageAnnotation{CanvasSize{1024, 1024}, {BoundingBox{0, 0, 10, 10}}};

  PredictionSet preds;
  preds.name = "demo";
  preds.images["field_a_0"] = {Detection{BoundingBox{10, 10, 50, 50}, 0.9}};
  preds.images["field_a_1"] = {Detection{BoundingBox{0, 0, 100, 62}, 0.8}};
  preds.images["field_b_0"] = {
      Detection{BoundingBox{100, 100, 110, 110}, 0.7}};

  DomainManifest domains;
  domains.domains["field_a_0"] = "field_a";
  domains.domains["field_a_1"] = "field_a";
  domains.domains["field_b_0"] = "field_b";

  const EvaluationReport report = evaluate_dataset(gt, preds, domains);

  std::printf("images evaluated : %zu\n", report.n);
  std::printf("accuracy (global): %.6f\n", report.kaggle_accuracy);
  std::printf("accuracy (domain): %.6f\n", report.weighted_accuracy);
  for (const DomainAggregate& d : report.domains) {
    std::printf("  %-8s n=%zu mean=%.4f tp=%zu fp=%zu fn=%zu\n",
                d.domain.c_str(), d.n, d.mean, d.tp, d.fp, d.fn);
  }
  return 0;
}
