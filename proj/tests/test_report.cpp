// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstddef>
#include <string>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/evaluate.hpp"
#include "gweval/ranking.hpp"
#include "gweval/report.hpp"
#include "gweval/rng.hpp"
#include "helpers.hpp"

using namespace gweval;

namespace {

EvaluationReport sample_report(bool retain) {
  GroundTruthSet gt;
  gt.images["img1"] = ImageAnnotation{CanvasSize{1024, 1024},
                                      {BoundingBox{10, 10, 50, 50}}};
  gt.images["img2"] = ImageAnnotation{CanvasSize{1024, 1024},
                                      {BoundingBox{0, 0, 100, 100}}};
  gt.images["img3"] = ImageAnnotation{CanvasSize{1024, 1024},
                                      {BoundingBox{0, 0, 10, 10}}};
  PredictionSet p;
  p.name = "model";
  p.images["img1"] = {Detection{BoundingBox{10, 10, 50, 50}, 0.9}};
  p.images["img2"] = {Detection{BoundingBox{0, 0, 100, 62}, 0.8}};
  p.images["img3"] = {Detection{BoundingBox{100, 100, 110, 110}, 0.7}};
  DomainManifest m;
  m.domains["img1"] = "A";
  m.domains["img2"] = "A";
  m.domains["img3"] = "B";
  EvalOptions opts;
  opts.retain_pairs = retain;
  return evaluate_dataset(gt, p, m, opts);
}

}  // namespace

TEST_CASE("report envelope carries tool, command, inputs and warnings") {
  WarningLog warnings;
  warnings.add("clipped one box");
  const Json doc = report_document(
      "evaluate", {"--gt", "gt.csv"},
      {InputDigest{"ground-truth", "gt.csv", std::string(64, 'a')}}, warnings,
      Json{{"kind", "evaluation"}});
  CHECK(doc.at("schema_version").get<int>() >= 1);
  CHECK(doc.at("tool").at("name").get<std::string>() == "gweval");
  CHECK_FALSE(doc.at("tool").at("version").get<std::string>().empty());
  CHECK(doc.at("command").get<std::string>() == "evaluate");
  CHECK(doc.at("arguments").get<std::vector<std::string>>() ==
        std::vector<std::string>{"--gt", "gt.csv"});
  REQUIRE(doc.at("inputs").size() == 1);
  CHECK(doc.at("inputs")[0].at("role").get<std::string>() == "ground-truth");
  CHECK(doc.at("inputs")[0].at("sha256").get<std::string>() ==
        std::string(64, 'a'));
  CHECK(doc.at("warnings").get<std::vector<std::string>>() ==
        warnings.messages);
  CHECK(doc.at("payload").at("kind").get<std::string>() == "evaluation");
}

TEST_CASE("evaluation payload survives a serialize and parse round trip") {
  const EvaluationReport original = sample_report(true);
  const Json payload = evaluation_payload(original);
  const EvaluationReport back = parse_evaluation_payload(payload);

  CHECK(back.n == original.n);
  CHECK(back.domain_count == original.domain_count);
  CHECK(back.kaggle_exact == original.kaggle_exact);
  CHECK(back.weighted_exact == original.weighted_exact);
  CHECK(back.kaggle_accuracy == original.kaggle_accuracy);
  CHECK(back.weighted_accuracy == original.weighted_accuracy);
  CHECK(back.thresholds == original.thresholds);
  CHECK(back.empty_empty_images == original.empty_empty_images);

  REQUIRE(back.images.size() == original.images.size());
  for (std::size_t i = 0; i < back.images.size(); ++i) {
    CHECK(back.images[i].image_id == original.images[i].image_id);
    CHECK(back.images[i].domain == original.images[i].domain);
    CHECK(back.images[i].accuracy_exact == original.images[i].accuracy_exact);
    REQUIRE(back.images[i].sweep.size() == original.images[i].sweep.size());
    for (std::size_t t = 0; t < back.images[i].sweep.size(); ++t) {
      CHECK(back.images[i].sweep[t].threshold ==
            original.images[i].sweep[t].threshold);
      CHECK(back.images[i].sweep[t].tp == original.images[i].sweep[t].tp);
      CHECK(back.images[i].sweep[t].fp == original.images[i].sweep[t].fp);
      CHECK(back.images[i].sweep[t].fn == original.images[i].sweep[t].fn);
    }
  }
  REQUIRE(back.domains.size() == original.domains.size());
  for (std::size_t i = 0; i < back.domains.size(); ++i) {
    CHECK(back.domains[i].domain == original.domains[i].domain);
    CHECK(back.domains[i].mean_exact == original.domains[i].mean_exact);
    CHECK(back.domains[i].stddev == original.domains[i].stddev);
    CHECK(back.domains[i].tp == original.domains[i].tp);
    CHECK(back.domains[i].missed_rate == original.domains[i].missed_rate);
    CHECK(back.domains[i].missed_rate_defined ==
          original.domains[i].missed_rate_defined);
  }
  REQUIRE(back.histogram.has_value());
  CHECK(back.histogram->edges == original.histogram->edges);
  CHECK(back.histogram->all_counts == original.histogram->all_counts);
  CHECK(back.histogram->missed_counts == original.histogram->missed_counts);
  REQUIRE(back.histogram->median_ratio.has_value());
  CHECK(*back.histogram->median_ratio == *original.histogram->median_ratio);
}

TEST_CASE("payload flags histogram retention") {
  const Json with = evaluation_payload(sample_report(true));
  CHECK(with.at("pair_retention").get<bool>());
  CHECK(with.contains("size_histogram"));
  CHECK(with.at("rate_threshold").get<double>() == 0.5);

  const Json without = evaluation_payload(sample_report(false));
  CHECK_FALSE(without.at("pair_retention").get<bool>());
  CHECK_FALSE(without.contains("size_histogram"));
  const EvaluationReport back = parse_evaluation_payload(without);
  CHECK_FALSE(back.histogram.has_value());
}

TEST_CASE("a null median ratio survives the round trip") {
  EvaluationReport r = sample_report(true);
  REQUIRE(r.histogram.has_value());
  r.histogram->median_ratio.reset();
  const Json payload = evaluation_payload(r);
  CHECK(payload.at("size_histogram").at("median_ratio").is_null());
  const EvaluationReport back = parse_evaluation_payload(payload);
  REQUIRE(back.histogram.has_value());
  CHECK_FALSE(back.histogram->median_ratio.has_value());
}

TEST_CASE("fraction strings preserve exact accuracies") {
  const Json payload = evaluation_payload(sample_report(false));
  CHECK(payload.at("kaggle_accuracy_fraction").get<std::string>() == "1/2");
  CHECK(payload.at("weighted_accuracy_fraction").get<std::string>() == "3/8");
}

TEST_CASE("wrong payload kinds and missing fields are format errors") {
  Json payload = evaluation_payload(sample_report(false));
  payload["kind"] = "ranking";
  CHECK_THROWS_AS(parse_evaluation_payload(payload), FormatError);
  Json broken = evaluation_payload(sample_report(false));
  broken.erase("images");
  CHECK_THROWS_AS(parse_evaluation_payload(broken), FormatError);
  Json no_kind = Json::object();
  CHECK_THROWS_AS(parse_evaluation_payload(no_kind), FormatError);
}

TEST_CASE("randomized reports round-trip at full precision") {
  SeededRng rng(921);
  for (int iter = 0; iter < 30; ++iter) {
    GroundTruthSet gt;
    PredictionSet p;
    DomainManifest m;
    const int images = 1 + static_cast<int>(rng.uniform_int(6));
    for (int i = 0; i < images; ++i) {
      const std::string id = "img" + std::to_string(i);
      gt.images[id] = ImageAnnotation{CanvasSize{64, 64},
                                      testutil::random_gt_boxes(rng, 5)};
      p.images[id] = testutil::random_detections(rng, 5);
      m.domains[id] = "dom" + std::to_string(rng.uniform_int(3));
    }
    EvalOptions opts;
    opts.retain_pairs = true;
    const EvaluationReport original = evaluate_dataset(gt, p, m, opts);
    const EvaluationReport back =
        parse_evaluation_payload(evaluation_payload(original));
    REQUIRE(back.kaggle_exact == original.kaggle_exact);
    REQUIRE(back.weighted_exact == original.weighted_exact);
    REQUIRE(back.images.size() == original.images.size());
    for (std::size_t i = 0; i < back.images.size(); ++i) {
      REQUIRE(back.images[i].accuracy_exact ==
              original.images[i].accuracy_exact);
    }
  }
}

TEST_CASE("ranking payload lays out tables and movement") {
  const std::vector<SubmissionScore> scores{
      make_submission_score("alpha", 0.5, 0.25),
      make_submission_score("beta", 0.75, 0.125),
  };
  const RankTable k = rank_table(scores, MetricChoice::kKaggle);
  const RankTable w = rank_table(scores, MetricChoice::kWeighted);
  const RankDelta d = rank_delta(k, w);
  const Json p = ranking_payload(scores, k, w, d);

  CHECK(p.at("kind").get<std::string>() == "ranking");
  REQUIRE(p.at("submissions").size() == 2);
  CHECK(p.at("submissions")[0].at("name").get<std::string>() == "alpha");
  CHECK(p.at("submissions")[0].at("kaggle_accuracy_fraction")
            .get<std::string>() == "1/2");
  REQUIRE(p.at("tables").at("kaggle").size() == 2);
  CHECK(p.at("tables").at("kaggle")[0].at("name").get<std::string>() ==
        "beta");
  CHECK(p.at("tables").at("kaggle")[0].at("rank").get<std::size_t>() == 1);
  CHECK(p.at("tables").at("weighted")[0].at("name").get<std::string>() ==
        "alpha");
  REQUIRE(p.at("delta").at("entries").size() == 2);
  CHECK(p.at("delta").at("entries")[0].at("name").get<std::string>() ==
        "alpha");
  CHECK(p.at("delta").at("entries")[0].at("delta").get<long long>() == 1);
  CHECK(p.at("delta").at("spearman").get<double>() == -1.0);
  CHECK(p.at("delta").at("max_riser").get<std::string>() == "alpha");
  CHECK(p.at("delta").at("max_faller").get<std::string>() == "beta");
}

TEST_CASE("reports write and read back through files") {
  const Json doc = report_document("evaluate", {}, {}, WarningLog{},
                                   evaluation_payload(sample_report(false)));
  const std::string path = "/tmp/gweval_test_report.json";
  write_report(path, doc);
  const Json back = read_report(path);
  CHECK(back == doc);
  CHECK_THROWS_AS(read_report("/nonexistent/report.json"), FormatError);
  write_text_file(path, "{ not json");
  CHECK_THROWS_AS(read_report(path), FormatError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/file.txt", "x"),
                  ConfigError);
}
