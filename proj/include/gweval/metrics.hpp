// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/matching.hpp"
#include "gweval/model.hpp"
#include "gweval/rational.hpp"
#include "gweval/stats.hpp"

namespace gweval {

// Per-image evaluation outcome. The accuracy is kept as an exact
// fraction so dataset-level means can be aggregated without rounding;
// `accuracy` is the rounded view of the same value.
struct ImageScore {
  std::string image_id;
  std::string domain;
  Rational accuracy_exact;
  double accuracy = 0.0;
  ThresholdSweep sweep;
};

// Per-domain summary. Error rates use the counts at the sweep's lowest
// threshold (0.5 under the default sweep); a zero denominator yields
// rate 0 with the corresponding `*_defined` flag cleared.
struct DomainAggregate {
  std::string domain;
  std::size_t n = 0;
  Rational mean_exact;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double missed_rate = 0.0;
  double fp_rate = 0.0;
  bool missed_rate_defined = false;
  bool fp_rate_defined = false;
};

// Paired histograms over box side length (sqrt of area): one for every
// reference box, one for the boxes missed at the base threshold. Bins
// share fixed edges spanning [0, p99 of all side lengths]; values past
// the top edge land in the last bin so counts are conserved.
struct SizeHistogram {
  std::vector<double> edges;
  std::vector<std::size_t> all_counts;
  std::vector<std::size_t> missed_counts;
  std::optional<double> median_ratio;
};

inline constexpr std::size_t kHistogramBins = 32;

struct AnovaResult {
  Rational f_exact;
  double f = 0.0;
  std::size_t df_between = 0;
  std::size_t df_within = 0;
  double p_value = 1.0;
  Rational ss_between;
  Rational ss_within;
};

struct EvalOptions {
  std::vector<double> thresholds{kIouThresholds.begin(), kIouThresholds.end()};
  bool retain_pairs = false;
};

struct EvaluationReport {
  std::vector<ImageScore> images;
  std::vector<DomainAggregate> domains;
  Rational kaggle_exact;
  Rational weighted_exact;
  double kaggle_accuracy = 0.0;
  double weighted_accuracy = 0.0;
  std::size_t n = 0;
  std::size_t domain_count = 0;
  std::size_t empty_empty_images = 0;
  std::vector<double> thresholds;
  std::optional<SizeHistogram> histogram;
  WarningLog warnings;
};

namespace detail {

inline const std::string& domain_of(const DomainManifest& domains,
                                    const std::string& image_id) {
  const auto it = domains.domains.find(image_id);
  if (it == domains.domains.end()) {
    throw InputDomainError("image '" + image_id + "' has no domain");
  }
  return it->second;
}

}  // namespace detail

// Global metric: plain mean of per-image accuracies, no weighting.
inline Rational kaggle_accuracy_exact(const std::vector<ImageScore>& scores) {
  if (scores.empty()) {
    throw InputDomainError("cannot average an empty score list");
  }
  Rational sum = 0;
  for (const ImageScore& s : scores) sum += s.accuracy_exact;
  return sum / scores.size();
}

inline double kaggle_accuracy(const std::vector<ImageScore>& scores) {
  return to_double(kaggle_accuracy_exact(scores));
}

// Domain-weighted metric: mean accuracy within each domain, then an
// unweighted mean across domains, so small domains count as much as
// large ones.
inline Rational weighted_accuracy_exact(const std::vector<ImageScore>& scores,
                                        const DomainManifest& domains) {
  if (scores.empty()) {
    throw InputDomainError("cannot average an empty score list");
  }
  std::map<std::string, std::pair<Rational, std::size_t>> per_domain;
  for (const ImageScore& s : scores) {
    auto& [sum, count] = per_domain[detail::domain_of(domains, s.image_id)];
    sum += s.accuracy_exact;
    ++count;
  }
  Rational total = 0;
  for (const auto& [domain, acc] : per_domain) {
    total += acc.first / acc.second;
  }
  return total / per_domain.size();
}

inline double weighted_accuracy(const std::vector<ImageScore>& scores,
                                const DomainManifest& domains) {
  return to_double(weighted_accuracy_exact(scores, domains));
}

// Per-domain aggregates, sorted by domain id. Standard deviation is
// the population form (divide by n); error-rate counts come from the
// first threshold of each image's sweep.
inline std::vector<DomainAggregate> domain_aggregates(
    const std::vector<ImageScore>& scores, const DomainManifest& domains) {
  if (scores.empty()) {
    throw InputDomainError("cannot aggregate an empty score list");
  }
  struct Acc {
    Rational sum;
    std::vector<Rational> values;
    std::size_t tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Acc> by_domain;
  for (const ImageScore& s : scores) {
    Acc& acc = by_domain[detail::domain_of(domains, s.image_id)];
    acc.sum += s.accuracy_exact;
    acc.values.push_back(s.accuracy_exact);
    if (!s.sweep.empty()) {
      acc.tp += s.sweep.front().tp;
      acc.fp += s.sweep.front().fp;
      acc.fn += s.sweep.front().fn;
    }
  }
  std::vector<DomainAggregate> out;
  out.reserve(by_domain.size());
  for (auto& [domain, acc] : by_domain) {
    DomainAggregate d;
    d.domain = domain;
    d.n = acc.values.size();
    d.mean_exact = acc.sum / acc.values.size();
    d.mean = to_double(d.mean_exact);
    Rational ss = 0;
    for (const Rational& v : acc.values) {
      const Rational diff = v - d.mean_exact;
      ss += diff * diff;
    }
    d.stddev = std::sqrt(to_double(ss / acc.values.size()));
    d.tp = acc.tp;
    d.fp = acc.fp;
    d.fn = acc.fn;
    if (acc.tp + acc.fn > 0) {
      d.missed_rate = static_cast<double>(acc.fn) /
                      static_cast<double>(acc.tp + acc.fn);
      d.missed_rate_defined = true;
    }
    if (acc.tp + acc.fp > 0) {
      d.fp_rate =
          static_cast<double>(acc.fp) / static_cast<double>(acc.tp + acc.fp);
      d.fp_rate_defined = true;
    }
    out.push_back(std::move(d));
  }
  return out;
}

// Histograms of reference-box side lengths, all boxes vs the ones
// missed at the base threshold. Requires the matched-pair lists that
// evaluation retains. The median ratio compares the median missed area
// against the median overall area on the side-length scale.
inline SizeHistogram missed_size_histogram(
    const std::vector<ImageScore>& scores, const GroundTruthSet& gt) {
  std::vector<double> all_sides;
  std::vector<double> all_areas;
  std::vector<double> missed_sides;
  std::vector<double> missed_areas;
  for (const ImageScore& s : scores) {
    const auto it = gt.images.find(s.image_id);
    if (it == gt.images.end()) {
      throw InputDomainError("image '" + s.image_id +
                             "' is not in the ground truth set");
    }
    const BoxList& boxes = it->second.boxes;
    for (const BoundingBox& b : boxes) {
      all_areas.push_back(area(b));
      all_sides.push_back(std::sqrt(area(b)));
    }
    if (s.sweep.empty()) continue;
    const MatchResult& base = s.sweep.front();
    std::vector<char> matched(boxes.size(), 0);
    for (const MatchedPair& p : base.pairs) matched[p.gt_index] = 1;
    for (std::size_t g = 0; g < boxes.size(); ++g) {
      if (!matched[g]) {
        missed_areas.push_back(area(boxes[g]));
        missed_sides.push_back(std::sqrt(area(boxes[g])));
      }
    }
  }

  SizeHistogram hist;
  if (all_sides.empty()) return hist;  // no reference boxes, nothing to bin

  const double hi = stats::percentile(all_sides, 0.99);
  hist.edges.resize(kHistogramBins + 1);
  for (std::size_t i = 0; i <= kHistogramBins; ++i) {
    hist.edges[i] =
        hi * static_cast<double>(i) / static_cast<double>(kHistogramBins);
  }
  hist.all_counts.assign(kHistogramBins, 0);
  hist.missed_counts.assign(kHistogramBins, 0);
  const auto bin_of = [&](double side) {
    if (hi <= 0.0) return kHistogramBins - 1;
    const double pos = side / hi * static_cast<double>(kHistogramBins);
    const auto raw = static_cast<std::size_t>(std::max(pos, 0.0));
    return std::min(raw, kHistogramBins - 1);
  };
  for (const double s : all_sides) ++hist.all_counts[bin_of(s)];
  for (const double s : missed_sides) ++hist.missed_counts[bin_of(s)];
  if (!missed_areas.empty()) {
    hist.median_ratio = std::sqrt(stats::median(missed_areas) /
                                  stats::median(all_areas));
  }
  return hist;
}

// One-way fixed-effects ANOVA over pre-grouped exact values. Sums of
// squares and F are exact; only the tail probability is evaluated in
// floating point.
inline AnovaResult anova_groups(const std::vector<std::vector<Rational>>& groups) {
  const std::size_t d = groups.size();
  if (d < 2) {
    throw InputDomainError("ANOVA needs at least 2 domains, got " +
                           std::to_string(d));
  }
  std::size_t n = 0;
  for (const auto& values : groups) {
    if (values.empty()) throw InputDomainError("ANOVA group is empty");
    n += values.size();
  }
  if (n < d + 2) {
    throw InputDomainError("ANOVA needs at least 2 residual degrees of "
                           "freedom, got " +
                           std::to_string(n - d));
  }

  Rational grand_sum = 0;
  for (const auto& values : groups) {
    for (const Rational& v : values) grand_sum += v;
  }
  const Rational grand_mean = grand_sum / n;

  AnovaResult r;
  for (const auto& values : groups) {
    Rational group_sum = 0;
    for (const Rational& v : values) group_sum += v;
    const Rational group_mean = group_sum / values.size();
    const Rational between = group_mean - grand_mean;
    r.ss_between += between * between * values.size();
    for (const Rational& v : values) {
      const Rational within = v - group_mean;
      r.ss_within += within * within;
    }
  }
  r.df_between = d - 1;
  r.df_within = n - d;
  if (r.ss_within == 0) {
    throw DegenerateVarianceError(
        "within-domain variance is exactly zero, F is undefined");
  }
  r.f_exact = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
  r.f = to_double(r.f_exact);
  r.p_value = stats::f_upper_tail(r.f, static_cast<double>(r.df_between),
                                  static_cast<double>(r.df_within));
  return r;
}

// Same test over per-image accuracies grouped by their recorded domain.
inline AnovaResult anova_domains(const std::vector<ImageScore>& scores) {
  std::map<std::string, std::vector<Rational>> by_domain;
  for (const ImageScore& s : scores) {
    by_domain[s.domain].push_back(s.accuracy_exact);
  }
  std::vector<std::vector<Rational>> groups;
  groups.reserve(by_domain.size());
  for (auto& [domain, values] : by_domain) groups.push_back(std::move(values));
  return anova_groups(groups);
}

}  // namespace gweval
