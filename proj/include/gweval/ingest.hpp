// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gweval/csv.hpp"
#include "gweval/errors.hpp"
#include "gweval/model.hpp"

namespace gweval {

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) {
      ++i;
    }
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline void require_header(const csv::Row& row,
                           const std::vector<std::string_view>& expected) {
  bool ok = row.fields.size() == expected.size();
  for (std::size_t i = 0; ok && i < expected.size(); ++i) {
    ok = trim(row.fields[i]) == expected[i];
  }
  if (!ok) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ',';
      want += expected[i];
    }
    throw FormatError(row.line, "expected header '" + want + "'");
  }
}

inline int parse_canvas_dim(std::string_view field, std::size_t line,
                            std::string_view what) {
  const long long v = csv::parse_int(trim(field), line, what);
  if (v < 1 || v > std::numeric_limits<int>::max()) {
    throw FormatError(line, std::string(what) + " out of range: " +
                                std::to_string(v));
  }
  return static_cast<int>(v);
}

// Parses "[x, y, w, h]" into four finite reals.
inline std::array<double, 4> parse_bbox_field(std::string_view field,
                                              std::size_t line) {
  std::string_view body = trim(field);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
    throw FormatError(line, "bbox field must look like '[x, y, w, h]'");
  }
  body.remove_prefix(1);
  body.remove_suffix(1);
  std::array<double, 4> vals{};
  std::size_t count = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ',') {
      if (count == 4) throw FormatError(line, "bbox field has extra values");
      vals[count++] = csv::parse_double(trim(body.substr(start, i - start)),
                                        line, "bbox value");
      start = i + 1;
    }
  }
  if (count != 4) throw FormatError(line, "bbox field needs 4 values");
  for (const double v : vals) {
    if (!std::isfinite(v)) {
      throw FormatError(line, "bbox value must be finite");
    }
  }
  return vals;
}

inline std::string format_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

}  // namespace detail

struct GroundTruthParse {
  GroundTruthSet ground_truth;
  DomainManifest domains;
  WarningLog warnings;
};

// Reads an annotation table with header image_id,width,height,bbox,domain.
// The bbox column holds "[x, y, w, h]" (top-left corner plus extent) and
// is converted to corner form; an image with no boxes appears once with
// an empty bbox field. Rows with non-positive extent are dropped and
// tallied as warnings; boxes poking outside the canvas are clipped with
// a warning. The domain column doubles as a DomainManifest.
inline GroundTruthParse parse_ground_truth(std::string_view text,
                                           std::string label_variant = {}) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError(1, "missing header row");
  detail::require_header(rows[0],
                         {"image_id", "width", "height", "bbox", "domain"});

  GroundTruthParse out;
  out.ground_truth.label_variant = std::move(label_variant);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 5) {
      throw FormatError(row.line, "expected 5 fields, got " +
                                      std::to_string(row.fields.size()));
    }
    const std::string id{detail::trim(row.fields[0])};
    if (id.empty()) throw FormatError(row.line, "empty image_id");
    const CanvasSize canvas(
        detail::parse_canvas_dim(row.fields[1], row.line, "width"),
        detail::parse_canvas_dim(row.fields[2], row.line, "height"));
    const std::string domain{detail::trim(row.fields[4])};
    if (domain.empty()) throw FormatError(row.line, "empty domain");

    auto [it, inserted] =
        out.ground_truth.images.try_emplace(id, ImageAnnotation{canvas, {}});
    if (!inserted && it->second.canvas != canvas) {
      throw FormatError(row.line,
                        "conflicting canvas size for image '" + id + "'");
    }
    auto [dit, dinserted] = out.domains.domains.try_emplace(id, domain);
    if (!dinserted && dit->second != domain) {
      throw FormatError(row.line, "conflicting domain for image '" + id +
                                      "': '" + dit->second + "' vs '" +
                                      domain + "'");
    }

    const std::string_view bbox = detail::trim(row.fields[3]);
    if (bbox.empty()) continue;  // zero-box image registration
    const auto [x, y, w, h] = detail::parse_bbox_field(bbox, row.line);
    if (w <= 0.0 || h <= 0.0) {
      out.warnings.add("line " + std::to_string(row.line) +
                       ": dropped box with non-positive extent in image '" +
                       id + "'");
      continue;
    }
    const BoundingBox corner(x, y, x + w, y + h);
    if (corner.within(canvas)) {
      it->second.boxes.push_back(corner);
      continue;
    }
    const auto clipped = clip_box(corner, canvas);
    if (!clipped) {
      out.warnings.add("line " + std::to_string(row.line) +
                       ": dropped box entirely outside canvas in image '" +
                       id + "'");
      continue;
    }
    out.warnings.add("line " + std::to_string(row.line) +
                     ": clipped box exceeding canvas in image '" + id + "'");
    it->second.boxes.push_back(*clipped);
  }

  // Canonical box order makes the parsed model independent of row order.
  for (auto& [id, ann] : out.ground_truth.images) {
    std::sort(ann.boxes.begin(), ann.boxes.end(),
              [](const BoundingBox& a, const BoundingBox& b) {
                return std::tie(a.x_min, a.y_min, a.x_max, a.y_max) <
                       std::tie(b.x_min, b.y_min, b.x_max, b.y_max);
              });
  }
  return out;
}

struct SubmissionParse {
  PredictionSet predictions;
  WarningLog warnings;
};

// Reads a submission table with header image_id,PredictionString where
// PredictionString repeats "conf x y w h" separated by whitespace.
inline SubmissionParse parse_submission(std::string_view text,
                                        std::string name = {}) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError(1, "missing header row");
  detail::require_header(rows[0], {"image_id", "PredictionString"});

  SubmissionParse out;
  out.predictions.name = std::move(name);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 2) {
      throw FormatError(row.line, "expected 2 fields, got " +
                                      std::to_string(row.fields.size()));
    }
    const std::string id{detail::trim(row.fields[0])};
    if (id.empty()) throw FormatError(row.line, "empty image_id");
    auto [it, inserted] = out.predictions.images.try_emplace(id);
    if (!inserted) {
      throw FormatError(row.line, "duplicate image_id '" + id + "'");
    }
    const auto tokens = detail::split_ws(row.fields[1]);
    if (tokens.size() % 5 != 0) {
      throw FormatError(row.line,
                        "PredictionString token count " +
                            std::to_string(tokens.size()) +
                            " is not a multiple of 5");
    }
    for (std::size_t t = 0; t < tokens.size(); t += 5) {
      const double conf =
          csv::parse_double(tokens[t], row.line, "confidence");
      if (!(conf >= 0.0 && conf <= 1.0)) {
        throw FormatError(row.line, "confidence " + std::string(tokens[t]) +
                                        " outside [0,1]");
      }
      const double x = csv::parse_double(tokens[t + 1], row.line, "x");
      const double y = csv::parse_double(tokens[t + 2], row.line, "y");
      const double w = csv::parse_double(tokens[t + 3], row.line, "w");
      const double h = csv::parse_double(tokens[t + 4], row.line, "h");
      if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(w) ||
          !std::isfinite(h) || !std::isfinite(x + w) || !std::isfinite(y + h)) {
        throw FormatError(row.line, "box value must be finite");
      }
      if (w <= 0.0 || h <= 0.0) {
        out.warnings.add("line " + std::to_string(row.line) +
                         ": dropped detection with non-positive extent in "
                         "image '" +
                         id + "'");
        continue;
      }
      it->second.push_back(Detection{BoundingBox(x, y, x + w, y + h), conf});
    }
  }
  return out;
}

// Writes the submission table back out. Coordinates are printed with 4
// decimals and confidences with 6, enough for parse(serialize(p)) to
// reproduce values printed at that precision bit-for-bit.
inline std::string serialize_submission(const PredictionSet& p) {
  std::string out = "image_id,PredictionString\n";
  for (const auto& [id, dets] : p.images) {
    std::string pred_string;
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const auto& d = dets[i];
      if (i) pred_string += ' ';
      pred_string += detail::format_fixed(d.confidence, 6);
      pred_string += ' ';
      pred_string += detail::format_fixed(d.box.x_min, 4);
      pred_string += ' ';
      pred_string += detail::format_fixed(d.box.y_min, 4);
      pred_string += ' ';
      pred_string += detail::format_fixed(d.box.width(), 4);
      pred_string += ' ';
      pred_string += detail::format_fixed(d.box.height(), 4);
    }
    out += csv::escape(id);
    out += ',';
    out += csv::escape(pred_string);
    out += '\n';
  }
  return out;
}

// Reads a table with header image_id,domain into a one-to-one map.
inline DomainManifest parse_domain_manifest(std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError(1, "missing header row");
  detail::require_header(rows[0], {"image_id", "domain"});

  DomainManifest out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 2) {
      throw FormatError(row.line, "expected 2 fields, got " +
                                      std::to_string(row.fields.size()));
    }
    const std::string id{detail::trim(row.fields[0])};
    const std::string domain{detail::trim(row.fields[1])};
    if (id.empty()) throw FormatError(row.line, "empty image_id");
    if (domain.empty()) {
      throw FormatError(row.line, "empty domain for image '" + id + "'");
    }
    if (!out.domains.try_emplace(id, domain).second) {
      throw FormatError(row.line, "duplicate image_id '" + id + "'");
    }
  }
  return out;
}

inline std::string serialize_domain_manifest(const DomainManifest& m) {
  std::string out = "image_id,domain\n";
  for (const auto& [id, domain] : m.domains) {
    out += csv::escape(id);
    out += ',';
    out += csv::escape(domain);
    out += '\n';
  }
  return out;
}

// Writes reference labels in the same table the parser reads. One row
// per box, 4-decimal coordinates; a zero-box image keeps one row with
// an empty bbox field so it stays registered.
inline std::string serialize_ground_truth(const GroundTruthSet& gt,
                                          const DomainManifest& domains) {
  std::string out = "image_id,width,height,bbox,domain\n";
  for (const auto& [id, ann] : gt.images) {
    const auto dit = domains.domains.find(id);
    if (dit == domains.domains.end()) {
      throw InputDomainError("no domain recorded for image '" + id + "'");
    }
    const auto row_prefix = [&](std::string& row) {
      row += csv::escape(id);
      row += ',';
      row += std::to_string(ann.canvas.width);
      row += ',';
      row += std::to_string(ann.canvas.height);
      row += ',';
    };
    if (ann.boxes.empty()) {
      std::string row;
      row_prefix(row);
      row += ',';
      row += csv::escape(dit->second);
      row += '\n';
      out += row;
      continue;
    }
    for (const BoundingBox& b : ann.boxes) {
      std::string row;
      row_prefix(row);
      std::string bbox = "[";
      bbox += detail::format_fixed(b.x_min, 4);
      bbox += ", ";
      bbox += detail::format_fixed(b.y_min, 4);
      bbox += ", ";
      bbox += detail::format_fixed(b.width(), 4);
      bbox += ", ";
      bbox += detail::format_fixed(b.height(), 4);
      bbox += "]";
      row += csv::escape(bbox);
      row += ',';
      row += csv::escape(dit->second);
      row += '\n';
      out += row;
    }
  }
  return out;
}

// Reads a table with header image_id,width,height mapping each image
// to its canvas.
inline std::map<std::string, CanvasSize> parse_canvas_file(
    std::string_view text) {
  const auto rows = csv::parse(text);
  if (rows.empty()) throw FormatError(1, "missing header row");
  detail::require_header(rows[0], {"image_id", "width", "height"});

  std::map<std::string, CanvasSize> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.fields.size() != 3) {
      throw FormatError(row.line, "expected 3 fields, got " +
                                      std::to_string(row.fields.size()));
    }
    const std::string id{detail::trim(row.fields[0])};
    if (id.empty()) throw FormatError(row.line, "empty image_id");
    const CanvasSize canvas(
        detail::parse_canvas_dim(row.fields[1], row.line, "width"),
        detail::parse_canvas_dim(row.fields[2], row.line, "height"));
    if (!out.try_emplace(id, canvas).second) {
      throw FormatError(row.line, "duplicate image_id '" + id + "'");
    }
  }
  return out;
}

}  // namespace gweval
