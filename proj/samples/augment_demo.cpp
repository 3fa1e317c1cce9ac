// SPDX-License-Identifier: Apache-2.0
//
// Runs the seeded augmentation pipeline over a tiny synthetic batch
// and prints every random draw it records.
#include <cstdio>

#include "gweval/gweval.hpp"

// Square canvas so rotations keep every sample the same size; the
// mixing stages require that.
static gweval::Sample make_sample(std::uint8_t shade) {
  gweval::Sample s;
  s.size = gweval::CanvasSize{48, 48};
  s.pixels.assign(static_cast<std::size_t>(48) * 48 * 3, shade);
  s.boxes = {gweval::BoundingBox{8, 8, 24, 20}};
  return s;
}

int main() {
  using namespace gweval;

  std::vector<Sample> batch;
  for (int i = 0; i < 4; ++i) {
    batch.push_back(make_sample(static_cast<std::uint8_t>(40 * (i + 1))));
  }

  AugmentConfig cfg;
  cfg.groups.push_back(OpGroupConfig{
      {SingleImageOp::kHorizontalFlip, SingleImageOp::kRotate90}, 0.75});
  cfg.cutmix.enabled = true;
  cfg.mosaic.enabled = true;
  cfg.validate();

  const std::uint64_t seed = 7;
  const PipelineResult run = run_pipeline(batch, cfg, seed);

  for (const SampleTrace& trace : run.traces) {
    const Sample& out = run.samples[trace.index];
    std::printf("sample %zu (%dx%d, %zu boxes)\n", trace.index,
                out.size.width, out.size.height, out.boxes.size());
    for (const StageRecord& stage : trace.stages) {
      std::printf("  %-8s %s", stage.stage.c_str(),
                  stage.applied ? "applied" : "skipped");
      for (const auto& [name, value] : stage.draws) {
        std::printf("  %s=%s", name.c_str(), value.c_str());
      }
      std::printf("\n");
    }
  }
  return 0;
}
