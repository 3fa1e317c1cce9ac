// SPDX-License-Identifier: Apache-2.0
//
// Fuses detections from two models on one image with weighted box
// fusion, then prunes the survivors with non-max suppression.
#include <cstdio>

#include "gweval/gweval.hpp"

static void print_list(const char* label, const gweval::DetectionList& dets) {
  std::printf("%s\n", label);
  for (const gweval::Detection& d : dets) {
    std::printf("  conf=%.4f box=(%.1f, %.1f, %.1f, %.1f)\n", d.confidence,
                d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max);
  }
}

int main() {
  using namespace gweval;

  const DetectionList model_a = {Detection{BoundingBox{0, 0, 10, 10}, 0.6},
                                 Detection{BoundingBox{40, 40, 60, 60}, 0.9}};
  const DetectionList model_b = {Detection{BoundingBox{1, 0, 11, 10}, 0.8}};

  FusionConfig cfg;
  cfg.iou_threshold = 0.55;

  const DetectionList fused = wbf_fuse({model_a, model_b}, cfg);
  print_list("fused:", fused);

  const DetectionList pruned = nms(fused, 0.5);
  print_list("after nms:", pruned);
  return 0;
}
