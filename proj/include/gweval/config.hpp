// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "gweval/augment.hpp"
#include "gweval/errors.hpp"
#include "gweval/fusion.hpp"

namespace gweval {

namespace detail {

inline nlohmann::json parse_config_json(const std::string& text,
                                        const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(what + " is not valid JSON: " + e.what());
  }
}

inline void reject_unknown_keys(const nlohmann::json& obj,
                                const std::vector<std::string>& known,
                                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
T config_get(const nlohmann::json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("bad value for '" + key + "'");
  }
}

}  // namespace detail

// Parsed augmentation pipeline file plus its optional embedded seed
// (a --seed flag takes precedence over it).
struct AugmentFileConfig {
  AugmentConfig pipeline;
  std::optional<std::uint64_t> seed;
};

// Schema: optional "seed" and "keep_fraction"; optional "groups" array
// of {"probability", "ops"}; optional "cutmix" {"probability",
// "area_range"}, "mixup" {"probability", "weight"}, "mosaic"
// {"probability"}. A stage exists iff its key is present. Unknown keys
// are rejected.
inline AugmentFileConfig parse_augment_config(const std::string& text) {
  const nlohmann::json root =
      detail::parse_config_json(text, "augment config");
  if (!root.is_object()) {
    throw ConfigError("augment config must be a JSON object");
  }
  detail::reject_unknown_keys(
      root, {"seed", "keep_fraction", "groups", "cutmix", "mixup", "mosaic"},
      "augment config");

  AugmentFileConfig out;
  if (root.contains("seed")) {
    try {
      out.seed = root.at("seed").get<std::uint64_t>();
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("bad value for 'seed'");
    }
  }
  out.pipeline.keep_fraction =
      detail::config_get(root, "keep_fraction", out.pipeline.keep_fraction);

  if (root.contains("groups")) {
    const nlohmann::json& groups = root.at("groups");
    if (!groups.is_array()) throw ConfigError("'groups' must be an array");
    for (const nlohmann::json& g : groups) {
      if (!g.is_object()) throw ConfigError("each group must be an object");
      detail::reject_unknown_keys(g, {"probability", "ops"}, "group");
      OpGroupConfig group;
      group.probability =
          detail::config_get(g, "probability", group.probability);
      if (!g.contains("ops")) throw ConfigError("group needs an 'ops' list");
      for (const nlohmann::json& name : g.at("ops")) {
        if (!name.is_string()) throw ConfigError("op names must be strings");
        group.ops.push_back(parse_single_image_op(name.get<std::string>()));
      }
      out.pipeline.groups.push_back(std::move(group));
    }
  }

  if (root.contains("cutmix")) {
    const nlohmann::json& c = root.at("cutmix");
    if (!c.is_object()) throw ConfigError("'cutmix' must be an object");
    detail::reject_unknown_keys(c, {"probability", "area_range"}, "cutmix");
    out.pipeline.cutmix.enabled = true;
    out.pipeline.cutmix.probability =
        detail::config_get(c, "probability", out.pipeline.cutmix.probability);
    if (c.contains("area_range")) {
      const auto range = detail::config_get(c, "area_range",
                                            std::vector<double>{0.25, 0.75});
      if (range.size() != 2) {
        throw ConfigError("'area_range' must hold [lo, hi]");
      }
      out.pipeline.cutmix.area_lo = range[0];
      out.pipeline.cutmix.area_hi = range[1];
    }
  }

  if (root.contains("mixup")) {
    const nlohmann::json& m = root.at("mixup");
    if (!m.is_object()) throw ConfigError("'mixup' must be an object");
    detail::reject_unknown_keys(m, {"probability", "weight"}, "mixup");
    out.pipeline.mixup.enabled = true;
    out.pipeline.mixup.probability =
        detail::config_get(m, "probability", out.pipeline.mixup.probability);
    out.pipeline.mixup.weight =
        detail::config_get(m, "weight", out.pipeline.mixup.weight);
  }

  if (root.contains("mosaic")) {
    const nlohmann::json& m = root.at("mosaic");
    if (!m.is_object()) throw ConfigError("'mosaic' must be an object");
    detail::reject_unknown_keys(m, {"probability"}, "mosaic");
    out.pipeline.mosaic.enabled = true;
    out.pipeline.mosaic.probability =
        detail::config_get(m, "probability", out.pipeline.mosaic.probability);
  }

  out.pipeline.validate();
  return out;
}

// Schema: optional "iou_threshold", "weights" (array, one per source),
// "score_mode" ("mean" or "weighted-mean"), "cull_threshold".
inline FusionConfig parse_fusion_config(const std::string& text) {
  const nlohmann::json root = detail::parse_config_json(text, "fusion config");
  if (!root.is_object()) {
    throw ConfigError("fusion config must be a JSON object");
  }
  detail::reject_unknown_keys(
      root, {"iou_threshold", "weights", "score_mode", "cull_threshold"},
      "fusion config");
  FusionConfig cfg;
  cfg.iou_threshold =
      detail::config_get(root, "iou_threshold", cfg.iou_threshold);
  cfg.weights = detail::config_get(root, "weights", cfg.weights);
  if (root.contains("score_mode")) {
    const auto mode = detail::config_get<std::string>(root, "score_mode", "");
    try {
      cfg.score_mode = parse_score_mode(mode);
    } catch (const FormatError& e) {
      throw ConfigError(e.what());
    }
  }
  cfg.cull_threshold =
      detail::config_get(root, "cull_threshold", cfg.cull_threshold);
  return cfg;
}

}  // namespace gweval
