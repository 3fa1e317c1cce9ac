// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "gweval/errors.hpp"
#include "gweval/metrics.hpp"
#include "gweval/model.hpp"
#include "gweval/ranking.hpp"
#include "gweval/version.hpp"

namespace gweval {

using Json = nlohmann::json;  // object keys serialize sorted

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

// Envelope shared by every command's report: tool identity, the
// command with its arguments, a content hash per input file, warnings,
// and the command-specific payload.
inline Json report_document(const std::string& command,
                            const std::vector<std::string>& arguments,
                            const std::vector<InputDigest>& inputs,
                            const WarningLog& warnings, Json payload) {
  Json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["tool"]["name"] = std::string(kToolName);
  doc["tool"]["version"] = std::string(kToolVersion);
  doc["command"] = command;
  doc["arguments"] = arguments;
  doc["inputs"] = Json::array();
  for (const InputDigest& in : inputs) {
    doc["inputs"].push_back(
        {{"role", in.role}, {"path", in.path}, {"sha256", in.sha256}});
  }
  doc["warnings"] = warnings.messages;
  doc["payload"] = std::move(payload);
  return doc;
}

inline Json evaluation_payload(const EvaluationReport& r) {
  Json p;
  p["kind"] = "evaluation";
  p["n"] = r.n;
  p["domain_count"] = r.domain_count;
  p["kaggle_accuracy"] = r.kaggle_accuracy;
  p["kaggle_accuracy_fraction"] = to_fraction_string(r.kaggle_exact);
  p["weighted_accuracy"] = r.weighted_accuracy;
  p["weighted_accuracy_fraction"] = to_fraction_string(r.weighted_exact);
  p["thresholds"] = r.thresholds;
  p["rate_threshold"] = r.thresholds.front();
  p["empty_empty_images"] = r.empty_empty_images;
  p["pair_retention"] = r.histogram.has_value();

  p["images"] = Json::array();
  for (const ImageScore& s : r.images) {
    Json counts = Json::array();
    for (const MatchResult& m : s.sweep) {
      counts.push_back({{"threshold", m.threshold},
                        {"tp", m.tp},
                        {"fp", m.fp},
                        {"fn", m.fn}});
    }
    p["images"].push_back({{"id", s.image_id},
                           {"domain", s.domain},
                           {"accuracy", s.accuracy},
                           {"accuracy_fraction",
                            to_fraction_string(s.accuracy_exact)},
                           {"counts", std::move(counts)}});
  }

  p["domains"] = Json::array();
  for (const DomainAggregate& d : r.domains) {
    p["domains"].push_back(
        {{"domain", d.domain},
         {"n", d.n},
         {"mean_accuracy", d.mean},
         {"mean_accuracy_fraction", to_fraction_string(d.mean_exact)},
         {"stddev", d.stddev},
         {"tp", d.tp},
         {"fp", d.fp},
         {"fn", d.fn},
         {"missed_rate", d.missed_rate},
         {"missed_rate_defined", d.missed_rate_defined},
         {"fp_rate", d.fp_rate},
         {"fp_rate_defined", d.fp_rate_defined}});
  }

  if (r.histogram) {
    Json h;
    h["edges"] = r.histogram->edges;
    h["all_counts"] = r.histogram->all_counts;
    h["missed_counts"] = r.histogram->missed_counts;
    if (r.histogram->median_ratio) {
      h["median_ratio"] = *r.histogram->median_ratio;
    } else {
      h["median_ratio"] = nullptr;
    }
    p["size_histogram"] = std::move(h);
  }
  return p;
}

// Rebuilds the parts of an EvaluationReport that downstream analysis
// needs from its serialized payload. Matched pairs are not serialized,
// so sweeps come back with counts only.
inline EvaluationReport parse_evaluation_payload(const Json& p) {
  try {
    if (p.at("kind").get<std::string>() != "evaluation") {
      throw FormatError("report payload kind is not 'evaluation'");
    }
    EvaluationReport r;
    r.n = p.at("n").get<std::size_t>();
    r.domain_count = p.at("domain_count").get<std::size_t>();
    r.kaggle_exact = parse_fraction(p.at("kaggle_accuracy_fraction").get<std::string>());
    r.weighted_exact = parse_fraction(p.at("weighted_accuracy_fraction").get<std::string>());
    r.kaggle_accuracy = p.at("kaggle_accuracy").get<double>();
    r.weighted_accuracy = p.at("weighted_accuracy").get<double>();
    r.thresholds = p.at("thresholds").get<std::vector<double>>();
    r.empty_empty_images = p.at("empty_empty_images").get<std::size_t>();
    for (const Json& img : p.at("images")) {
      ImageScore s;
      s.image_id = img.at("id").get<std::string>();
      s.domain = img.at("domain").get<std::string>();
      s.accuracy = img.at("accuracy").get<double>();
      s.accuracy_exact = parse_fraction(img.at("accuracy_fraction").get<std::string>());
      for (const Json& c : img.at("counts")) {
        MatchResult m;
        m.threshold = c.at("threshold").get<double>();
        m.tp = c.at("tp").get<std::size_t>();
        m.fp = c.at("fp").get<std::size_t>();
        m.fn = c.at("fn").get<std::size_t>();
        s.sweep.push_back(std::move(m));
      }
      r.images.push_back(std::move(s));
    }
    for (const Json& dom : p.at("domains")) {
      DomainAggregate d;
      d.domain = dom.at("domain").get<std::string>();
      d.n = dom.at("n").get<std::size_t>();
      d.mean = dom.at("mean_accuracy").get<double>();
      d.mean_exact = parse_fraction(dom.at("mean_accuracy_fraction").get<std::string>());
      d.stddev = dom.at("stddev").get<double>();
      d.tp = dom.at("tp").get<std::size_t>();
      d.fp = dom.at("fp").get<std::size_t>();
      d.fn = dom.at("fn").get<std::size_t>();
      d.missed_rate = dom.at("missed_rate").get<double>();
      d.missed_rate_defined = dom.at("missed_rate_defined").get<bool>();
      d.fp_rate = dom.at("fp_rate").get<double>();
      d.fp_rate_defined = dom.at("fp_rate_defined").get<bool>();
      r.domains.push_back(std::move(d));
    }
    if (p.contains("size_histogram")) {
      const Json& h = p.at("size_histogram");
      SizeHistogram hist;
      hist.edges = h.at("edges").get<std::vector<double>>();
      hist.all_counts = h.at("all_counts").get<std::vector<std::size_t>>();
      hist.missed_counts =
          h.at("missed_counts").get<std::vector<std::size_t>>();
      if (!h.at("median_ratio").is_null()) {
        hist.median_ratio = h.at("median_ratio").get<double>();
      }
      r.histogram = std::move(hist);
    }
    return r;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("malformed evaluation report: ") + e.what());
  }
}

inline Json ranking_payload(const std::vector<SubmissionScore>& scores,
                            const RankTable& kaggle_table,
                            const RankTable& weighted_table,
                            const RankDelta& delta) {
  const auto table_json = [](const RankTable& t) {
    Json rows = Json::array();
    for (const RankEntry& e : t.entries) {
      rows.push_back({{"rank", e.rank},
                      {"name", e.name},
                      {"score", e.score},
                      {"score_fraction", to_fraction_string(e.score_exact)}});
    }
    return rows;
  };
  Json p;
  p["kind"] = "ranking";
  p["submissions"] = Json::array();
  for (const SubmissionScore& s : scores) {
    p["submissions"].push_back(
        {{"name", s.name},
         {"kaggle_accuracy", s.kaggle},
         {"kaggle_accuracy_fraction", to_fraction_string(s.kaggle_exact)},
         {"weighted_accuracy", s.weighted},
         {"weighted_accuracy_fraction", to_fraction_string(s.weighted_exact)}});
  }
  p["tables"]["kaggle"] = table_json(kaggle_table);
  p["tables"]["weighted"] = table_json(weighted_table);
  Json entries = Json::array();
  for (const RankDeltaEntry& e : delta.entries) {
    entries.push_back({{"name", e.name},
                       {"kaggle_rank", e.rank_a},
                       {"weighted_rank", e.rank_b},
                       {"delta", e.delta}});
  }
  p["delta"]["entries"] = std::move(entries);
  p["delta"]["max_riser"] = delta.max_riser;
  p["delta"]["max_faller"] = delta.max_faller;
  p["delta"]["spearman"] = delta.spearman;
  return p;
}

inline void write_text_file(const std::string& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot create output file '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw ConfigError("write failure on '" + path + "'");
}

inline void write_report(const std::string& path, const Json& doc) {
  write_text_file(path, doc.dump(2) + "\n");
}

inline Json read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open report '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError("report '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace gweval
