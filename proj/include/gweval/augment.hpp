// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/geometry.hpp"
#include "gweval/image_io.hpp"
#include "gweval/rng.hpp"

namespace gweval {

enum class SingleImageOp {
  kHorizontalFlip,
  kVerticalFlip,
  kRotate90,
  kBrightnessShift,
  kChannelShuffle,
};

inline std::string_view to_string(SingleImageOp op) {
  switch (op) {
    case SingleImageOp::kHorizontalFlip: return "horizontal-flip";
    case SingleImageOp::kVerticalFlip: return "vertical-flip";
    case SingleImageOp::kRotate90: return "rotate-90";
    case SingleImageOp::kBrightnessShift: return "brightness-shift";
    case SingleImageOp::kChannelShuffle: return "channel-shuffle";
  }
  return "horizontal-flip";
}

inline SingleImageOp parse_single_image_op(std::string_view name) {
  if (name == "horizontal-flip") return SingleImageOp::kHorizontalFlip;
  if (name == "vertical-flip") return SingleImageOp::kVerticalFlip;
  if (name == "rotate-90") return SingleImageOp::kRotate90;
  if (name == "brightness-shift") return SingleImageOp::kBrightnessShift;
  if (name == "channel-shuffle") return SingleImageOp::kChannelShuffle;
  throw ConfigError("unknown op '" + std::string(name) + "'");
}

// Brightness shifts are drawn uniformly from [-32, +32].
inline constexpr int kBrightnessAmplitude = 32;

// The six channel orderings in lexicographic order; index 0 is the
// identity.
inline constexpr std::array<std::array<int, 3>, 6> kChannelPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

struct OpGroupConfig {
  std::vector<SingleImageOp> ops;
  double probability = 0.5;
};

struct CutmixConfig {
  bool enabled = false;
  double probability = 0.5;
  double area_lo = 0.25;
  double area_hi = 0.75;
};

struct MixupConfig {
  bool enabled = false;
  double probability = 0.5;
  double weight = 0.5;
};

struct MosaicConfig {
  bool enabled = false;
  double probability = 0.5;
};

struct AugmentConfig {
  std::vector<OpGroupConfig> groups;
  CutmixConfig cutmix;
  MixupConfig mixup;
  MosaicConfig mosaic;
  double keep_fraction = 0.25;  // minimum visible area share of a clipped box

  void validate() const {
    const auto check_p = [](double p, std::string_view stage) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(std::string(stage) +
                          " probability must lie in [0,1]");
      }
    };
    for (const OpGroupConfig& g : groups) {
      if (g.ops.empty()) throw ConfigError("op group must not be empty");
      check_p(g.probability, "group");
    }
    check_p(cutmix.probability, "cutmix");
    check_p(mixup.probability, "mixup");
    check_p(mosaic.probability, "mosaic");
    if (!(mixup.weight > 0.0 && mixup.weight < 1.0)) {
      throw ConfigError("mixup weight must lie in (0,1)");
    }
    if (!(cutmix.area_lo > 0.0 && cutmix.area_hi < 1.0 &&
          cutmix.area_lo <= cutmix.area_hi)) {
      throw ConfigError("cutmix area range must lie within (0,1)");
    }
    if (!(keep_fraction >= 0.0 && keep_fraction <= 1.0)) {
      throw ConfigError("keep fraction must lie in [0,1]");
    }
  }
};

namespace detail {

inline double overlap_area(const BoundingBox& a, const BoundingBox& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  return iw > 0.0 && ih > 0.0 ? iw * ih : 0.0;
}

// Nearest-neighbor source index for destination index u when a length
//`src` axis is resampled to length `dst`: the source pixel under the
// destination pixel's center.
inline int nn_source(int u, int src, int dst) {
  const long long num = (2LL * u + 1) * src;
  const long long idx = num / (2LL * dst);
  return static_cast<int>(std::min<long long>(idx, src - 1));
}

}  // namespace detail

// Applies a geometric transform to pixels and boxes together.
inline Sample transform_sample(const Sample& s, TTATransform t) {
  const CanvasSize out_size = transformed_canvas(t, s.size);
  Sample out;
  out.size = out_size;
  out.pixels.resize(s.pixels.size());
  const int w = s.size.width;
  const int h = s.size.height;
  for (int v = 0; v < out_size.height; ++v) {
    for (int u = 0; u < out_size.width; ++u) {
      int x = u, y = v;
      switch (t) {
        case TTATransform::kIdentity: break;
        case TTATransform::kHorizontalFlip: x = w - 1 - u; break;
        case TTATransform::kVerticalFlip: y = h - 1 - v; break;
        case TTATransform::kRotate180:
          x = w - 1 - u;
          y = h - 1 - v;
          break;
        case TTATransform::kRotate90Cw:
          // output (u, v) = input (x, y) with u = h - 1 - y, v = x
          x = v;
          y = h - 1 - u;
          break;
        case TTATransform::kRotate90Ccw:
          // output (u, v) = input (x, y) with u = y, v = w - 1 - x
          x = w - 1 - v;
          y = u;
          break;
      }
      for (int c = 0; c < 3; ++c) out.at(u, v, c) = s.at(x, y, c);
    }
  }
  out.boxes.reserve(s.boxes.size());
  for (const BoundingBox& b : s.boxes) {
    out.boxes.push_back(transform_box(b, t, s.size));
  }
  return out;
}

// Adds `delta` to every channel, clamping to [0, 255]. Boxes untouched.
inline Sample brightness_shift(const Sample& s, int delta) {
  Sample out = s;
  for (std::uint8_t& v : out.pixels) {
    v = static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + delta, 0,
                                             255));
  }
  return out;
}

// Reorders the color channels by the given permutation. Boxes untouched.
inline Sample channel_shuffle(const Sample& s, const std::array<int, 3>& perm) {
  Sample out = s;
  const std::size_t px_count = s.pixels.size() / 3;
  for (std::size_t p = 0; p < px_count; ++p) {
    for (int c = 0; c < 3; ++c) {
      out.pixels[p * 3 + c] = s.pixels[p * 3 + perm[c]];
    }
  }
  return out;
}

// Blends two equally sized samples: out = round(weight*a + (1-weight)*b)
// with halves rounded away from zero. Annotations are the concatenation
// of both box lists.
inline Sample mixup(const Sample& a, const Sample& b, double weight) {
  if (a.size != b.size) {
    throw InputDomainError("mixup needs equally sized samples");
  }
  if (!(weight > 0.0 && weight < 1.0)) {
    throw InputDomainError("mixup weight must lie in (0,1)");
  }
  Sample out = a;
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    const double v =
        weight * a.pixels[i] + (1.0 - weight) * b.pixels[i];
    out.pixels[i] = static_cast<std::uint8_t>(std::llround(v));
  }
  out.boxes = a.boxes;
  out.boxes.insert(out.boxes.end(), b.boxes.begin(), b.boxes.end());
  return out;
}

// Deterministic cutmix core: replace the given patch of `a` with the
// same region of `b`. Boxes of b are clipped to the patch and kept when
// the visible share of their area reaches keep_fraction; boxes of a
// keep their original coordinates when the share of their area left
// outside the patch reaches keep_fraction.
inline Sample cutmix_patch(const Sample& a, const Sample& b, int px, int py,
                           int pw, int ph, double keep_fraction) {
  if (a.size != b.size) {
    throw InputDomainError("cutmix needs equally sized samples");
  }
  if (pw < 1 || ph < 1 || px < 0 || py < 0 || px + pw > a.size.width ||
      py + ph > a.size.height) {
    throw InputDomainError("cutmix patch must lie within the canvas");
  }
  Sample out = a;
  for (int y = py; y < py + ph; ++y) {
    for (int x = px; x < px + pw; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = b.at(x, y, c);
    }
  }
  const BoundingBox patch(px, py, px + pw, py + ph);
  out.boxes.clear();
  for (const BoundingBox& box : a.boxes) {
    const double outside = area(box) - detail::overlap_area(box, patch);
    if (outside >= keep_fraction * area(box) && outside > 0.0) {
      out.boxes.push_back(box);
    }
  }
  for (const BoundingBox& box : b.boxes) {
    const double inside = detail::overlap_area(box, patch);
    if (inside >= keep_fraction * area(box) && inside > 0.0) {
      const double x0 = std::max(box.x_min, patch.x_min);
      const double y0 = std::max(box.y_min, patch.y_min);
      const double x1 = std::min(box.x_max, patch.x_max);
      const double y1 = std::min(box.y_max, patch.y_max);
      out.boxes.push_back(BoundingBox(x0, y0, x1, y1));
    }
  }
  return out;
}

struct CutmixDraw {
  double area_fraction = 0.0;
  int px = 0, py = 0, pw = 0, ph = 0;
};

// Draws cutmix patch geometry: area fraction uniform over the
// configured range, patch shaped like the image (side = edge *
// sqrt(fraction)), position uniform among placements that fit. Draw
// order: fraction, then x, then y.
inline CutmixDraw draw_cutmix(SeededRng& rng, CanvasSize size,
                              const CutmixConfig& cfg) {
  CutmixDraw d;
  d.area_fraction = rng.uniform_real(cfg.area_lo, cfg.area_hi);
  const double side = std::sqrt(d.area_fraction);
  d.pw = std::max(1, static_cast<int>(std::llround(size.width * side)));
  d.ph = std::max(1, static_cast<int>(std::llround(size.height * side)));
  d.px = static_cast<int>(
      rng.uniform_int(static_cast<std::uint64_t>(size.width - d.pw) + 1));
  d.py = static_cast<int>(
      rng.uniform_int(static_cast<std::uint64_t>(size.height - d.ph) + 1));
  return d;
}

// Randomized cutmix over a drawn patch.
inline Sample cutmix(const Sample& a, const Sample& b, SeededRng& rng,
                     const CutmixConfig& cfg, double keep_fraction) {
  if (a.size != b.size) {
    throw InputDomainError("cutmix needs equally sized samples");
  }
  const CutmixDraw d = draw_cutmix(rng, a.size, cfg);
  return cutmix_patch(a, b, d.px, d.py, d.pw, d.ph, keep_fraction);
}

// Deterministic mosaic core: stitch four equally sized samples around
// the joint point (jx, jy) of a doubled canvas, in the order top-left,
// top-right, bottom-left, bottom-right. Each input is resampled with
// nearest-neighbor to fill its quadrant; boxes are scaled into the
// quadrant and kept when their visible share reaches keep_fraction.
inline Sample mosaic_at(const std::array<Sample, 4>& quad, int jx, int jy,
                        double keep_fraction) {
  const CanvasSize in = quad[0].size;
  for (const Sample& s : quad) {
    if (s.size != in) {
      throw InputDomainError("mosaic needs four equally sized samples");
    }
  }
  const int out_w = 2 * in.width;
  const int out_h = 2 * in.height;
  if (jx < 1 || jx > out_w - 1 || jy < 1 || jy > out_h - 1) {
    throw InputDomainError("mosaic joint point must be interior");
  }
  Sample out;
  out.size = CanvasSize(out_w, out_h);
  out.pixels.resize(static_cast<std::size_t>(out_w) * out_h * 3);

  const std::array<std::array<int, 4>, 4> quadrants = {{
      {0, 0, jx, jy},
      {jx, 0, out_w - jx, jy},
      {0, jy, jx, out_h - jy},
      {jx, jy, out_w - jx, out_h - jy},
  }};
  for (std::size_t q = 0; q < 4; ++q) {
    const auto [ox, oy, qw, qh] = quadrants[q];
    const Sample& src = quad[q];
    for (int v = 0; v < qh; ++v) {
      const int sy = detail::nn_source(v, in.height, qh);
      for (int u = 0; u < qw; ++u) {
        const int sx = detail::nn_source(u, in.width, qw);
        for (int c = 0; c < 3; ++c) {
          out.at(ox + u, oy + v, c) = src.at(sx, sy, c);
        }
      }
    }
    const double sx_scale = static_cast<double>(qw) / in.width;
    const double sy_scale = static_cast<double>(qh) / in.height;
    const BoundingBox quadrant(ox, oy, ox + qw, oy + qh);
    for (const BoundingBox& b : src.boxes) {
      const double x0 = ox + b.x_min * sx_scale;
      const double y0 = oy + b.y_min * sy_scale;
      const double x1 = ox + b.x_max * sx_scale;
      const double y1 = oy + b.y_max * sy_scale;
      if (!(x0 < x1) || !(y0 < y1)) continue;
      const BoundingBox scaled(x0, y0, x1, y1);
      const double inside = detail::overlap_area(scaled, quadrant);
      if (inside < keep_fraction * area(scaled) || inside <= 0.0) continue;
      out.boxes.push_back(BoundingBox(std::max(x0, quadrant.x_min),
                                      std::max(y0, quadrant.y_min),
                                      std::min(x1, quadrant.x_max),
                                      std::min(y1, quadrant.y_max)));
    }
  }
  return out;
}

struct MosaicDraw {
  int jx = 0, jy = 0;
};

// Draws an integer joint point uniformly over the central half of the
// doubled canvas, x before y.
inline MosaicDraw draw_mosaic(SeededRng& rng, CanvasSize size) {
  const int x_lo = (size.width + 1) / 2;         // ceil(W/2)
  const int x_hi = size.width + size.width / 2;  // floor(3W/2)
  const int y_lo = (size.height + 1) / 2;
  const int y_hi = size.height + size.height / 2;
  MosaicDraw d;
  d.jx = x_lo + static_cast<int>(rng.uniform_int(
                    static_cast<std::uint64_t>(x_hi - x_lo) + 1));
  d.jy = y_lo + static_cast<int>(rng.uniform_int(
                    static_cast<std::uint64_t>(y_hi - y_lo) + 1));
  return d;
}

// Randomized mosaic over a drawn joint point.
inline Sample mosaic(const std::array<Sample, 4>& quad, SeededRng& rng,
                     double keep_fraction) {
  const MosaicDraw d = draw_mosaic(rng, quad[0].size);
  return mosaic_at(quad, d.jx, d.jy, keep_fraction);
}

// Applies one uniformly chosen op of the group. Draw order: op index,
// then the op's own draws (brightness delta, channel permutation).
inline Sample apply_single_image_group(const Sample& s,
                                       const std::vector<SingleImageOp>& group,
                                       SeededRng& rng) {
  if (group.empty()) {
    throw InputDomainError("op group must not be empty");
  }
  const SingleImageOp op = group[rng.uniform_int(group.size())];
  switch (op) {
    case SingleImageOp::kHorizontalFlip:
      return transform_sample(s, TTATransform::kHorizontalFlip);
    case SingleImageOp::kVerticalFlip:
      return transform_sample(s, TTATransform::kVerticalFlip);
    case SingleImageOp::kRotate90:
      return transform_sample(s, TTATransform::kRotate90Cw);
    case SingleImageOp::kBrightnessShift: {
      const int delta =
          static_cast<int>(rng.uniform_int(2 * kBrightnessAmplitude + 1)) -
          kBrightnessAmplitude;
      return brightness_shift(s, delta);
    }
    case SingleImageOp::kChannelShuffle:
      return channel_shuffle(s, kChannelPerms[rng.uniform_int(6)]);
  }
  return s;
}

// Audit record of one stage decision for one sample.
struct StageRecord {
  std::string stage;
  bool applied = false;
  std::vector<std::pair<std::string, std::string>> draws;
};

struct SampleTrace {
  std::size_t index = 0;
  std::vector<StageRecord> stages;
};

struct PipelineResult {
  std::vector<Sample> samples;
  std::vector<SampleTrace> traces;
};

namespace detail {

inline std::string num_str(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Draws k distinct partner indices from [0, n) excluding `self`.
inline std::vector<std::size_t> draw_partners(SeededRng& rng, std::size_t n,
                                              std::size_t self,
                                              std::size_t k) {
  std::vector<std::size_t> remaining;
  remaining.reserve(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (i != self) remaining.push_back(i);
  }
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t pick = rng.uniform_int(remaining.size());
    out.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

}  // namespace detail

// Runs the full pipeline over a batch. Stages run in a fixed order
// (each op group in configuration order, then cutmix, mixup, mosaic);
// within a stage every sample decides independently via a Bernoulli
// draw from its own (seed, index) stream, and partner samples are read
// from the stage's input snapshot. A sample's entire draw sequence
// therefore depends only on (seed, index) and the configuration, never
// on scheduling, which is what makes reruns byte-identical.
inline PipelineResult run_pipeline(const std::vector<Sample>& batch,
                                   const AugmentConfig& cfg,
                                   std::uint64_t seed) {
  if (batch.empty()) throw InputDomainError("batch must not be empty");
  for (const Sample& s : batch) s.check();
  cfg.validate();
  const std::size_t n = batch.size();
  if ((cfg.cutmix.enabled || cfg.mixup.enabled) && n < 2) {
    throw ConfigError("cutmix and mixup need a batch of at least 2");
  }
  if (cfg.mosaic.enabled && n < 4) {
    throw ConfigError("mosaic needs a batch of at least 4");
  }

  PipelineResult result;
  result.samples = batch;
  result.traces.resize(n);
  std::vector<SeededRng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    streams.emplace_back(seed, static_cast<std::uint64_t>(i));
    result.traces[i].index = i;
  }

  const auto run_stage = [&](const std::string& stage, double probability,
                             auto&& apply) {
    const std::vector<Sample> snapshot = result.samples;
    for (std::size_t i = 0; i < n; ++i) {
      StageRecord rec;
      rec.stage = stage;
      rec.applied = streams[i].bernoulli(probability);
      if (rec.applied) {
        result.samples[i] = apply(i, snapshot, streams[i], rec);
      }
      result.traces[i].stages.push_back(std::move(rec));
    }
  };

  for (std::size_t g = 0; g < cfg.groups.size(); ++g) {
    const OpGroupConfig& group = cfg.groups[g];
    run_stage("group-" + std::to_string(g), group.probability,
              [&](std::size_t i, const std::vector<Sample>& snap,
                  SeededRng& rng, StageRecord& rec) {
                const std::size_t op_index = rng.uniform_int(group.ops.size());
                rec.draws.emplace_back(
                    "op", std::string(to_string(group.ops[op_index])));
                switch (group.ops[op_index]) {
                  case SingleImageOp::kBrightnessShift: {
                    const int delta =
                        static_cast<int>(
                            rng.uniform_int(2 * kBrightnessAmplitude + 1)) -
                        kBrightnessAmplitude;
                    rec.draws.emplace_back("delta", std::to_string(delta));
                    return brightness_shift(snap[i], delta);
                  }
                  case SingleImageOp::kChannelShuffle: {
                    const std::uint64_t perm = rng.uniform_int(6);
                    rec.draws.emplace_back("permutation",
                                           std::to_string(perm));
                    return channel_shuffle(snap[i], kChannelPerms[perm]);
                  }
                  case SingleImageOp::kHorizontalFlip:
                    return transform_sample(snap[i],
                                            TTATransform::kHorizontalFlip);
                  case SingleImageOp::kVerticalFlip:
                    return transform_sample(snap[i],
                                            TTATransform::kVerticalFlip);
                  case SingleImageOp::kRotate90:
                    return transform_sample(snap[i], TTATransform::kRotate90Cw);
                }
                return snap[i];
              });
  }

  if (cfg.cutmix.enabled) {
    run_stage("cutmix", cfg.cutmix.probability,
              [&](std::size_t i, const std::vector<Sample>& snap,
                  SeededRng& rng, StageRecord& rec) {
                const std::size_t partner =
                    detail::draw_partners(rng, n, i, 1)[0];
                rec.draws.emplace_back("partner", std::to_string(partner));
                const Sample& a = snap[i];
                const Sample& b = snap[partner];
                if (a.size != b.size) {
                  throw InputDomainError("cutmix needs equally sized samples");
                }
                const CutmixDraw d = draw_cutmix(rng, a.size, cfg.cutmix);
                rec.draws.emplace_back("area_fraction",
                                       detail::num_str(d.area_fraction));
                rec.draws.emplace_back("patch_x", std::to_string(d.px));
                rec.draws.emplace_back("patch_y", std::to_string(d.py));
                rec.draws.emplace_back("patch_w", std::to_string(d.pw));
                rec.draws.emplace_back("patch_h", std::to_string(d.ph));
                return cutmix_patch(a, b, d.px, d.py, d.pw, d.ph,
                                    cfg.keep_fraction);
              });
  }

  if (cfg.mixup.enabled) {
    run_stage("mixup", cfg.mixup.probability,
              [&](std::size_t i, const std::vector<Sample>& snap,
                  SeededRng& rng, StageRecord& rec) {
                const std::size_t partner =
                    detail::draw_partners(rng, n, i, 1)[0];
                rec.draws.emplace_back("partner", std::to_string(partner));
                return mixup(snap[i], snap[partner], cfg.mixup.weight);
              });
  }

  if (cfg.mosaic.enabled) {
    run_stage("mosaic", cfg.mosaic.probability,
              [&](std::size_t i, const std::vector<Sample>& snap,
                  SeededRng& rng, StageRecord& rec) {
                const auto partners = detail::draw_partners(rng, n, i, 3);
                rec.draws.emplace_back("partner_tr",
                                       std::to_string(partners[0]));
                rec.draws.emplace_back("partner_bl",
                                       std::to_string(partners[1]));
                rec.draws.emplace_back("partner_br",
                                       std::to_string(partners[2]));
                const std::array<Sample, 4> quad = {
                    snap[i], snap[partners[0]], snap[partners[1]],
                    snap[partners[2]]};
                const CanvasSize in = quad[0].size;
                for (const Sample& q : quad) {
                  if (q.size != in) {
                    throw InputDomainError(
                        "mosaic needs four equally sized samples");
                  }
                }
                const MosaicDraw d = draw_mosaic(rng, in);
                rec.draws.emplace_back("joint_x", std::to_string(d.jx));
                rec.draws.emplace_back("joint_y", std::to_string(d.jy));
                return mosaic_at(quad, d.jx, d.jy, cfg.keep_fraction);
              });
  }

  return result;
}

}  // namespace gweval
