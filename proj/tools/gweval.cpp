// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: evaluate, rank, fuse, augment, pseudo-label,
// analyze. Exit statuses are a stable contract: 0 success, 2 format
// error, 3 input-domain error, 4 configuration error.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gweval/gweval.hpp"

namespace fs = std::filesystem;

namespace {

using namespace gweval;

std::string read_input_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw ConfigError("read failure on '" + path + "'");
  return ss.str();
}

InputDigest digest_of(std::string role, const std::string& path,
                      const std::string& content) {
  return InputDigest{std::move(role), path, sha256_hex(content)};
}

// Prefixes thrown format errors with the file they came from.
template <typename Fn>
auto with_file_context(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// "start:stop:step" -> the inclusive arithmetic sweep.
std::vector<double> parse_threshold_spec(const std::string& spec) {
  const auto bad = [&](const std::string& why) {
    return ConfigError("bad --thresholds '" + spec + "': " + why);
  };
  std::vector<std::string> parts;
  std::string cur;
  for (const char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  if (parts.size() != 3) throw bad("expected start:stop:step");
  double v[3];
  for (int i = 0; i < 3; ++i) {
    try {
      std::size_t used = 0;
      v[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw bad("'" + parts[i] + "' is not a number");
    } catch (const std::logic_error&) {
      throw bad("'" + parts[i] + "' is not a number");
    }
  }
  const double start = v[0], stop = v[1], step = v[2];
  if (!(step > 0.0)) throw bad("step must be positive");
  if (!(start <= stop)) throw bad("start must not exceed stop");
  if (!(start > 0.0 && stop <= 1.0)) throw bad("sweep must stay within (0,1]");
  const auto count =
      static_cast<std::size_t>((stop - start) / step + 1e-9) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(start + static_cast<double>(i) * step);
  }
  return out;
}

void warn_to_stderr(const WarningLog& warnings) {
  for (const std::string& w : warnings.messages) {
    std::fprintf(stderr, "warning: %s\n", w.c_str());
  }
}

std::string fmt(double v) { return detail::num_str(v); }

// Reads the three evaluation inputs, reconciling the label file's
// embedded domain column against the explicit manifest (the manifest
// wins; disagreements are warnings).
struct EvalInputs {
  GroundTruthSet gt;
  PredictionSet preds;
  DomainManifest domains;
  WarningLog warnings;
  std::vector<InputDigest> digests;
};

EvalInputs load_eval_inputs(const std::string& gt_path,
                            const std::string& pred_path,
                            const std::string& dom_path) {
  EvalInputs in;
  const std::string gt_text = read_input_file(gt_path);
  const std::string pred_text = read_input_file(pred_path);
  const std::string dom_text = read_input_file(dom_path);
  in.digests.push_back(digest_of("ground-truth", gt_path, gt_text));
  in.digests.push_back(digest_of("predictions", pred_path, pred_text));
  in.digests.push_back(digest_of("domains", dom_path, dom_text));

  auto gt_parse = with_file_context(
      gt_path, [&] { return parse_ground_truth(gt_text); });
  auto sub_parse = with_file_context(
      pred_path,
      [&] { return parse_submission(pred_text, fs::path(pred_path).stem().string()); });
  in.domains = with_file_context(
      dom_path, [&] { return parse_domain_manifest(dom_text); });

  in.gt = std::move(gt_parse.ground_truth);
  in.preds = std::move(sub_parse.predictions);
  for (const auto& w : gt_parse.warnings.messages) in.warnings.add(w);
  for (const auto& w : sub_parse.warnings.messages) in.warnings.add(w);
  for (const auto& [id, domain] : gt_parse.domains.domains) {
    const auto it = in.domains.domains.find(id);
    if (it != in.domains.domains.end() && it->second != domain) {
      in.warnings.add("image '" + id + "': label file says domain '" + domain +
                      "' but the manifest says '" + it->second +
                      "'; using the manifest");
    }
  }
  return in;
}

int cmd_evaluate(const std::vector<std::string>& args,
                 const std::string& gt_path, const std::string& pred_path,
                 const std::string& dom_path,
                 const std::string& thresholds_spec, bool retain_pairs,
                 const std::string& out_path) {
  EvalInputs in = load_eval_inputs(gt_path, pred_path, dom_path);

  EvalOptions options;
  options.retain_pairs = retain_pairs;
  if (!thresholds_spec.empty()) {
    options.thresholds = parse_threshold_spec(thresholds_spec);
  }

  EvaluationReport report =
      evaluate_dataset(in.gt, in.preds, in.domains, options);
  for (const auto& w : report.warnings.messages) in.warnings.add(w);

  const Json doc = report_document("evaluate", args, in.digests, in.warnings,
                                   evaluation_payload(report));
  write_report(out_path, doc);
  warn_to_stderr(in.warnings);
  return 0;
}

int cmd_rank(const std::vector<std::string>& args,
             const std::string& manifest_path, const std::string& gt_path,
             const std::string& dom_path, const std::string& out_path) {
  const std::string manifest_text = read_input_file(manifest_path);
  const std::string gt_text = read_input_file(gt_path);
  const std::string dom_text = read_input_file(dom_path);

  std::vector<InputDigest> digests;
  digests.push_back(digest_of("manifest", manifest_path, manifest_text));
  digests.push_back(digest_of("ground-truth", gt_path, gt_text));
  digests.push_back(digest_of("domains", dom_path, dom_text));

  WarningLog warnings;
  auto gt_parse = with_file_context(
      gt_path, [&] { return parse_ground_truth(gt_text); });
  const DomainManifest domains = with_file_context(
      dom_path, [&] { return parse_domain_manifest(dom_text); });
  for (const auto& w : gt_parse.warnings.messages) warnings.add(w);

  // Manifest rows are name,path; relative paths resolve against the
  // manifest's own directory.
  std::vector<std::pair<std::string, std::string>> entries;
  with_file_context(manifest_path, [&] {
    const auto rows = csv::parse(manifest_text);
    if (rows.empty()) throw FormatError(1, "missing header row");
    if (rows[0].fields.size() != 2 || rows[0].fields[0] != "name" ||
        rows[0].fields[1] != "path") {
      throw FormatError(rows[0].line, "expected header name,path");
    }
    std::set<std::string> seen;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.fields.size() != 2) {
        throw FormatError(row.line, "expected 2 fields, got " +
                                        std::to_string(row.fields.size()));
      }
      if (row.fields[0].empty()) throw FormatError(row.line, "empty name");
      if (row.fields[1].empty()) throw FormatError(row.line, "empty path");
      if (!seen.insert(row.fields[0]).second) {
        throw FormatError(row.line,
                          "duplicate submission name '" + row.fields[0] + "'");
      }
      entries.emplace_back(row.fields[0], row.fields[1]);
    }
    return 0;
  });

  const fs::path base = fs::path(manifest_path).parent_path();
  std::vector<SubmissionScore> scores;
  for (const auto& [name, rel_path] : entries) {
    fs::path p(rel_path);
    if (p.is_relative()) p = base / p;
    const std::string path = p.string();
    const std::string text = read_input_file(path);
    digests.push_back(digest_of("submission", path, text));
    auto parsed = with_file_context(
        path, [&] { return parse_submission(text, name); });
    for (const auto& w : parsed.warnings.messages) {
      warnings.add("submission '" + name + "': " + w);
    }
    const EvaluationReport rep =
        evaluate_dataset(gt_parse.ground_truth, parsed.predictions, domains);
    for (const auto& w : rep.warnings.messages) {
      warnings.add("submission '" + name + "': " + w);
    }
    SubmissionScore s;
    s.name = name;
    s.kaggle_exact = rep.kaggle_exact;
    s.weighted_exact = rep.weighted_exact;
    s.kaggle = rep.kaggle_accuracy;
    s.weighted = rep.weighted_accuracy;
    scores.push_back(std::move(s));
  }

  const RankTable kaggle_table = rank_table(scores, MetricChoice::kKaggle);
  const RankTable weighted_table = rank_table(scores, MetricChoice::kWeighted);
  const RankDelta delta = rank_delta(kaggle_table, weighted_table);

  const Json doc =
      report_document("rank", args, digests, warnings,
                      ranking_payload(scores, kaggle_table, weighted_table,
                                      delta));
  write_report(out_path, doc);
  warn_to_stderr(warnings);
  return 0;
}

int cmd_fuse(const std::vector<std::string>& args,
             const std::vector<std::string>& input_paths,
             const std::string& variants_path, const std::string& config_path,
             const std::string& canvases_path, const std::string& out_path) {
  const std::string config_text = read_input_file(config_path);
  const std::string variants_text = read_input_file(variants_path);

  std::vector<InputDigest> digests;
  digests.push_back(digest_of("config", config_path, config_text));
  digests.push_back(digest_of("variants", variants_path, variants_text));

  const FusionConfig cfg = parse_fusion_config(config_text);

  // Sidecar rows are variant,transform where variant names an input by
  // its path as given or by its basename.
  std::map<std::string, TTATransform> transform_of;
  with_file_context(variants_path, [&] {
    const auto rows = csv::parse(variants_text);
    if (rows.empty()) throw FormatError(1, "missing header row");
    if (rows[0].fields.size() != 2 || rows[0].fields[0] != "variant" ||
        rows[0].fields[1] != "transform") {
      throw FormatError(rows[0].line, "expected header variant,transform");
    }
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.fields.size() != 2) {
        throw FormatError(row.line, "expected 2 fields, got " +
                                        std::to_string(row.fields.size()));
      }
      const TTATransform t = parse_transform(row.fields[1]);
      if (!transform_of.emplace(row.fields[0], t).second) {
        throw FormatError(row.line,
                          "duplicate variant '" + row.fields[0] + "'");
      }
    }
    return 0;
  });

  WarningLog warnings;
  std::set<std::string> used_variants;
  std::vector<TTAPredictionSet> variants;
  bool any_transformed = false;
  for (const std::string& path : input_paths) {
    const std::string basename = fs::path(path).filename().string();
    auto it = transform_of.find(path);
    std::string key = path;
    if (it == transform_of.end()) {
      it = transform_of.find(basename);
      key = basename;
    }
    if (it == transform_of.end()) {
      throw FormatError("no transform recorded for input '" + path +
                        "' in '" + variants_path + "'");
    }
    used_variants.insert(key);

    const std::string text = read_input_file(path);
    digests.push_back(digest_of("input", path, text));
    auto parsed =
        with_file_context(path, [&] { return parse_submission(text, key); });
    for (const auto& w : parsed.warnings.messages) {
      warnings.add("input '" + key + "': " + w);
    }
    if (parsed.predictions.images.empty()) {
      warnings.add("input '" + key + "' contains no predictions");
    }

    TTAPredictionSet v;
    v.name = key;
    v.transform = it->second;
    v.images = std::move(parsed.predictions.images);
    if (v.transform != TTATransform::kIdentity) any_transformed = true;
    variants.push_back(std::move(v));
  }
  for (const auto& [variant, t] : transform_of) {
    if (!used_variants.count(variant)) {
      warnings.add("variants row '" + variant + "' matches no input");
    }
  }

  if (any_transformed) {
    if (canvases_path.empty()) {
      throw ConfigError(
          "--canvases is required when any variant transform is not "
          "'identity'");
    }
    const std::string canvases_text = read_input_file(canvases_path);
    digests.push_back(digest_of("canvases", canvases_path, canvases_text));
    const auto original = with_file_context(
        canvases_path, [&] { return parse_canvas_file(canvases_text); });
    for (TTAPredictionSet& v : variants) {
      if (v.transform == TTATransform::kIdentity) continue;
      for (const auto& [id, dets] : v.images) {
        const auto cit = original.find(id);
        if (cit == original.end()) {
          throw InputDomainError("no canvas recorded for image '" + id +
                                 "' in '" + canvases_path + "'");
        }
        v.canvases.emplace(id, transformed_canvas(v.transform, cit->second));
      }
    }
  }

  const PredictionSet merged = tta_merge(variants, cfg);

  std::size_t total_in = 0, total_out = 0;
  Json images = Json::array();
  for (const auto& [id, dets] : merged.images) {
    std::size_t boxes_in = 0;
    for (const TTAPredictionSet& v : variants) {
      const auto vit = v.images.find(id);
      if (vit != v.images.end()) boxes_in += vit->second.size();
    }
    total_in += boxes_in;
    total_out += dets.size();
    images.push_back(
        {{"id", id}, {"boxes_in", boxes_in}, {"boxes_out", dets.size()}});
  }

  Json payload;
  payload["kind"] = "fusion";
  payload["iou_threshold"] = cfg.iou_threshold;
  payload["score_mode"] = std::string(to_string(cfg.score_mode));
  payload["cull_threshold"] = cfg.cull_threshold;
  Json sources = Json::array();
  for (const TTAPredictionSet& v : variants) {
    std::size_t n = 0;
    for (const auto& [id, dets] : v.images) n += dets.size();
    sources.push_back({{"name", v.name},
                       {"transform", std::string(to_string(v.transform))},
                       {"images", v.images.size()},
                       {"boxes", n}});
  }
  payload["sources"] = std::move(sources);
  payload["images"] = std::move(images);
  payload["total_boxes_in"] = total_in;
  payload["total_boxes_out"] = total_out;

  write_text_file(out_path, serialize_submission(merged));
  const Json doc =
      report_document("fuse", args, digests, warnings, std::move(payload));
  write_report(out_path + ".report.json", doc);
  warn_to_stderr(warnings);
  return 0;
}

int cmd_augment(const std::vector<std::string>& args,
                const std::string& images_dir, const std::string& ann_path,
                const std::string& config_path,
                std::optional<std::uint64_t> cli_seed,
                const std::string& out_dir) {
  const std::string ann_text = read_input_file(ann_path);
  const std::string config_text = read_input_file(config_path);

  std::vector<InputDigest> digests;
  digests.push_back(digest_of("annotations", ann_path, ann_text));
  digests.push_back(digest_of("config", config_path, config_text));

  const AugmentFileConfig file_cfg = parse_augment_config(config_text);
  std::uint64_t seed = 0;
  if (cli_seed) {
    seed = *cli_seed;
  } else if (file_cfg.seed) {
    seed = *file_cfg.seed;
  } else {
    throw ConfigError("no seed given: pass --seed or put one in the config");
  }

  auto gt_parse =
      with_file_context(ann_path, [&] { return parse_ground_truth(ann_text); });
  WarningLog warnings = std::move(gt_parse.warnings);
  if (gt_parse.ground_truth.images.empty()) {
    throw InputDomainError("annotation file registers no images");
  }

  // Batch order follows the annotation table's sorted image ids.
  std::vector<std::string> ids;
  std::vector<Sample> batch;
  for (const auto& [id, ann] : gt_parse.ground_truth.images) {
    const std::string path = (fs::path(images_dir) / (id + ".ppm")).string();
    std::string ppm_text;
    {
      std::ifstream in(path, std::ios::binary);
      if (!in) throw FormatError("cannot open image '" + path + "'");
      std::ostringstream ss;
      ss << in.rdbuf();
      ppm_text = ss.str();
    }
    digests.push_back(digest_of("image", path, ppm_text));
    Sample s = with_file_context(path, [&] { return parse_ppm(ppm_text); });
    if (s.size != ann.canvas) {
      throw InputDomainError(
          "image '" + path + "' is " + std::to_string(s.size.width) + "x" +
          std::to_string(s.size.height) + " but the annotations say " +
          std::to_string(ann.canvas.width) + "x" +
          std::to_string(ann.canvas.height));
    }
    s.boxes = ann.boxes;
    ids.push_back(id);
    batch.push_back(std::move(s));
  }

  const PipelineResult result = run_pipeline(batch, file_cfg.pipeline, seed);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + out_dir +
                      "': " + ec.message());
  }

  GroundTruthSet out_gt;
  DomainManifest out_domains;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const Sample& s = result.samples[i];
    write_ppm((fs::path(out_dir) / (ids[i] + ".ppm")).string(), s);
    out_gt.images.emplace(ids[i], ImageAnnotation{s.size, s.boxes});
    out_domains.domains.emplace(ids[i], gt_parse.domains.domains.at(ids[i]));
  }
  write_text_file((fs::path(out_dir) / "annotations.csv").string(),
                  serialize_ground_truth(out_gt, out_domains));

  Json payload;
  payload["kind"] = "augment";
  payload["seed"] = seed;
  Json samples = Json::array();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    Json stages = Json::array();
    for (const StageRecord& st : result.traces[i].stages) {
      Json draws = Json::array();
      for (const auto& [name, value] : st.draws) {
        draws.push_back({{"name", name}, {"value", value}});
      }
      stages.push_back({{"stage", st.stage},
                        {"applied", st.applied},
                        {"draws", std::move(draws)}});
    }
    samples.push_back({{"index", i},
                       {"id", ids[i]},
                       {"stages", std::move(stages)}});
  }
  payload["samples"] = std::move(samples);

  const Json doc =
      report_document("augment", args, digests, warnings, std::move(payload));
  write_report((fs::path(out_dir) / "manifest.json").string(), doc);
  warn_to_stderr(warnings);
  return 0;
}

int cmd_pseudo_label(const std::string& pred_path, double conf_threshold,
                     const std::string& canvases_path,
                     const std::string& out_path) {
  const std::string pred_text = read_input_file(pred_path);
  const std::string canvases_text = read_input_file(canvases_path);

  auto parsed = with_file_context(pred_path, [&] {
    return parse_submission(pred_text, fs::path(pred_path).stem().string());
  });
  const auto canvases = with_file_context(
      canvases_path, [&] { return parse_canvas_file(canvases_text); });

  WarningLog warnings = std::move(parsed.warnings);
  const GroundTruthSet labels =
      pseudo_label(parsed.predictions, conf_threshold, canvases, &warnings);

  DomainManifest domains;
  for (const auto& [id, ann] : labels.images) {
    domains.domains.emplace(id, "pseudo");
  }
  write_text_file(out_path, serialize_ground_truth(labels, domains));
  warn_to_stderr(warnings);
  return 0;
}

int cmd_analyze(const std::string& report_path, const std::string& out_dir) {
  const Json doc = read_report(report_path);
  if (!doc.contains("payload")) {
    throw FormatError("report '" + report_path + "' has no payload");
  }
  const EvaluationReport r = parse_evaluation_payload(doc.at("payload"));
  if (!r.histogram) {
    throw InputDomainError(
        "report lacks retained pair data; re-run evaluate with "
        "--retain-pairs");
  }
  if (r.thresholds.empty()) {
    throw FormatError("report lists no thresholds");
  }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + out_dir +
                      "': " + ec.message());
  }
  const auto out_file = [&](const char* name) {
    return (fs::path(out_dir) / name).string();
  };

  std::string scatter = "domain,n,mean_accuracy,stddev\n";
  for (const DomainAggregate& d : r.domains) {
    scatter += csv::escape(d.domain) + ',' + std::to_string(d.n) + ',' +
               fmt(d.mean) + ',' + fmt(d.stddev) + '\n';
  }
  write_text_file(out_file("domain_scatter.csv"), scatter);

  std::string rates =
      "domain,tp,fp,fn,missed_rate,missed_rate_defined,fp_rate,"
      "fp_rate_defined\n";
  for (const DomainAggregate& d : r.domains) {
    rates += csv::escape(d.domain) + ',' + std::to_string(d.tp) + ',' +
             std::to_string(d.fp) + ',' + std::to_string(d.fn) + ',' +
             fmt(d.missed_rate) + ',' + (d.missed_rate_defined ? "1" : "0") +
             ',' + fmt(d.fp_rate) + ',' + (d.fp_rate_defined ? "1" : "0") +
             '\n';
  }
  write_text_file(out_file("domain_rates.csv"), rates);

  std::string hist = "bin_lo,bin_hi,all_count,missed_count\n";
  const SizeHistogram& h = *r.histogram;
  for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
    hist += fmt(h.edges[i]) + ',' + fmt(h.edges[i + 1]) + ',' +
            std::to_string(h.all_counts[i]) + ',' +
            std::to_string(h.missed_counts[i]) + '\n';
  }
  write_text_file(out_file("size_histogram.csv"), hist);

  // ANOVA is recomputed from the report's exact per-image fractions.
  std::map<std::string, std::vector<Rational>> by_domain;
  for (const ImageScore& s : r.images) {
    by_domain[s.domain].push_back(s.accuracy_exact);
  }
  std::string anova_csv = "status,f,df_between,df_within,p_value\n";
  std::optional<InputDomainError> single_domain_error;
  if (by_domain.size() < 2) {
    anova_csv += "insufficient-domains,,,,\n";
    single_domain_error = InputDomainError(
        "ANOVA needs at least 2 domains, the report has " +
        std::to_string(by_domain.size()) +
        "; domain comparison is meaningless on a single domain");
  } else {
    std::vector<std::vector<Rational>> groups;
    for (auto& [domain, values] : by_domain) {
      groups.push_back(std::move(values));
    }
    try {
      const AnovaResult a = anova_groups(groups);
      anova_csv += "ok," + fmt(a.f) + ',' + std::to_string(a.df_between) +
                   ',' + std::to_string(a.df_within) + ',' + fmt(a.p_value) +
                   '\n';
    } catch (const DegenerateVarianceError&) {
      anova_csv += "degenerate-variance,,,,\n";
    } catch (const InputDomainError&) {
      anova_csv += "insufficient-df,,,,\n";
    }
  }
  write_text_file(out_file("anova.csv"), anova_csv);

  // Informational only: correlation between per-domain error and
  // missed rate, over domains whose missed rate is defined.
  std::vector<double> err, missed;
  for (const DomainAggregate& d : r.domains) {
    if (d.missed_rate_defined) {
      err.push_back(1.0 - d.mean);
      missed.push_back(d.missed_rate);
    }
  }
  std::string pearson_value;
  if (err.size() >= 2) pearson_value = fmt(stats::pearson(err, missed));

  std::string summary = "key,value\n";
  summary += "n," + std::to_string(r.n) + '\n';
  summary += "domain_count," + std::to_string(r.domain_count) + '\n';
  summary += "kaggle_accuracy," + fmt(r.kaggle_accuracy) + '\n';
  summary += "kaggle_accuracy_fraction," +
             csv::escape(to_fraction_string(r.kaggle_exact)) + '\n';
  summary += "weighted_accuracy," + fmt(r.weighted_accuracy) + '\n';
  summary += "weighted_accuracy_fraction," +
             csv::escape(to_fraction_string(r.weighted_exact)) + '\n';
  summary += "rate_threshold," + fmt(r.thresholds.front()) + '\n';
  summary += "empty_empty_images," + std::to_string(r.empty_empty_images) +
             '\n';
  summary += "median_size_ratio," +
             (h.median_ratio ? fmt(*h.median_ratio) : std::string()) + '\n';
  summary += "error_missed_rate_pearson," + pearson_value + '\n';
  write_text_file(out_file("summary.csv"), summary);

  if (single_domain_error) throw *single_domain_error;
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Domain-aware detection evaluation toolkit"};
  app.require_subcommand(1);
  const std::vector<std::string> args(argv + 1, argv + argc);

  // evaluate
  std::string ev_gt, ev_pred, ev_dom, ev_thr, ev_out;
  bool ev_retain = false;
  auto* ev = app.add_subcommand(
      "evaluate", "Score a submission against reference labels");
  ev->add_option("--gt", ev_gt, "reference label table")->required();
  ev->add_option("--pred", ev_pred, "submission table")->required();
  ev->add_option("--domains", ev_dom, "image_id,domain manifest")->required();
  ev->add_option("--thresholds", ev_thr,
                 "IoU sweep as start:stop:step (default 0.5:0.75:0.05)");
  ev->add_flag("--retain-pairs", ev_retain,
               "keep matched pairs and emit the box-size histogram");
  ev->add_option("--out", ev_out, "report path")->required();

  // rank
  std::string rk_manifest, rk_gt, rk_dom, rk_out;
  auto* rk = app.add_subcommand(
      "rank", "Rank many submissions under both metrics");
  rk->add_option("--manifest", rk_manifest, "name,path submission manifest")
      ->required();
  rk->add_option("--gt", rk_gt, "reference label table")->required();
  rk->add_option("--domains", rk_dom, "image_id,domain manifest")->required();
  rk->add_option("--out", rk_out, "report path")->required();

  // fuse
  std::vector<std::string> fs_inputs;
  std::string fs_variants, fs_config, fs_canvases, fs_out;
  auto* fu = app.add_subcommand(
      "fuse", "De-transform and fuse prediction variants");
  fu->add_option("--inputs", fs_inputs, "submission files to fuse")
      ->required()
      ->expected(-1);
  fu->add_option("--variants", fs_variants,
                 "variant,transform sidecar naming each input's transform")
      ->required();
  fu->add_option("--config", fs_config, "fusion settings file")->required();
  fu->add_option("--canvases", fs_canvases,
                 "image_id,width,height table; required for non-identity "
                 "transforms");
  fu->add_option("--out", fs_out, "fused submission path")->required();

  // augment
  std::string au_images, au_ann, au_config, au_out;
  std::uint64_t au_seed = 0;
  auto* au = app.add_subcommand(
      "augment", "Apply the seeded augmentation pipeline to a batch");
  au->add_option("--images", au_images, "directory of <image_id>.ppm files")
      ->required();
  au->add_option("--ann", au_ann, "reference label table for the batch")
      ->required();
  au->add_option("--config", au_config, "pipeline settings file")->required();
  auto* au_seed_opt =
      au->add_option("--seed", au_seed, "overrides the config seed");
  au->add_option("--out", au_out, "output directory")->required();

  // pseudo-label
  std::string pl_pred, pl_canvases, pl_out;
  double pl_thr = 0.0;
  auto* pl = app.add_subcommand(
      "pseudo-label", "Promote confident detections to labels");
  pl->add_option("--pred", pl_pred, "submission table")->required();
  pl->add_option("--conf-thr", pl_thr, "confidence threshold in [0,1]")
      ->required();
  pl->add_option("--canvases", pl_canvases, "image_id,width,height table")
      ->required();
  pl->add_option("--out", pl_out, "label table path")->required();

  // analyze
  std::string an_report, an_out;
  auto* an = app.add_subcommand(
      "analyze", "Emit plot-data tables from an evaluation report");
  an->add_option("--report", an_report, "evaluate report path")->required();
  an->add_option("--out", an_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 4;
  }

  if (*ev) {
    return cmd_evaluate(args, ev_gt, ev_pred, ev_dom, ev_thr, ev_retain,
                        ev_out);
  }
  if (*rk) return cmd_rank(args, rk_manifest, rk_gt, rk_dom, rk_out);
  if (*fu) {
    return cmd_fuse(args, fs_inputs, fs_variants, fs_config, fs_canvases,
                    fs_out);
  }
  if (*au) {
    std::optional<std::uint64_t> seed;
    if (au_seed_opt->count() > 0) seed = au_seed;
    return cmd_augment(args, au_images, au_ann, au_config, seed, au_out);
  }
  if (*pl) return cmd_pseudo_label(pl_pred, pl_thr, pl_canvases, pl_out);
  if (*an) return cmd_analyze(an_report, an_out);
  return 4;  // unreachable behind require_subcommand
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gweval::FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return 2;
  } catch (const gweval::InputDomainError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 3;
  } catch (const gweval::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
