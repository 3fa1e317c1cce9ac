// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/evaluate.hpp"
#include "gweval/metrics.hpp"
#include "gweval/model.hpp"
#include "gweval/rational.hpp"

namespace gweval {

struct SubmissionScore {
  std::string name;
  Rational kaggle_exact;
  Rational weighted_exact;
  double kaggle = 0.0;
  double weighted = 0.0;
};

inline SubmissionScore make_submission_score(std::string name, double kaggle,
                                             double weighted) {
  SubmissionScore s;
  s.name = std::move(name);
  s.kaggle_exact = rational_of(kaggle);
  s.weighted_exact = rational_of(weighted);
  s.kaggle = kaggle;
  s.weighted = weighted;
  return s;
}

enum class MetricChoice { kKaggle, kWeighted };

inline std::string_view to_string(MetricChoice m) {
  return m == MetricChoice::kKaggle ? "kaggle" : "weighted";
}

struct RankEntry {
  std::size_t rank = 0;
  std::string name;
  Rational score_exact;
  double score = 0.0;
};

// Leaderboard under one metric. Ties share the best rank and consume
// the following positions (competition ranking: 1, 2, 2, 4).
struct RankTable {
  MetricChoice metric = MetricChoice::kKaggle;
  std::vector<RankEntry> entries;
};

struct RankDeltaEntry {
  std::string name;
  std::size_t rank_a = 0;
  std::size_t rank_b = 0;
  long long delta = 0;  // rank_a - rank_b; positive = improved under b
};

struct RankDelta {
  std::vector<RankDeltaEntry> entries;  // sorted by name
  std::string max_riser;
  std::string max_faller;
  double spearman = 0.0;
};

// Scores one submission under both metrics.
inline SubmissionScore evaluate_submission(const PredictionSet& p,
                                           const GroundTruthSet& gt,
                                           const DomainManifest& domains) {
  const EvaluationReport report = evaluate_dataset(gt, p, domains);
  SubmissionScore s;
  s.name = p.name;
  s.kaggle_exact = report.kaggle_exact;
  s.weighted_exact = report.weighted_exact;
  s.kaggle = report.kaggle_accuracy;
  s.weighted = report.weighted_accuracy;
  return s;
}

// Builds the leaderboard under the chosen metric. Scores are compared
// exactly, so a tie means truly equal values, never rounding artifacts;
// tied entries are listed alphabetically.
inline RankTable rank_table(const std::vector<SubmissionScore>& scores,
                            MetricChoice metric) {
  if (scores.empty()) {
    throw InputDomainError("cannot rank an empty submission list");
  }
  {
    std::set<std::string> names;
    for (const SubmissionScore& s : scores) {
      if (!names.insert(s.name).second) {
        throw InputDomainError("duplicate submission name '" + s.name + "'");
      }
    }
  }
  RankTable table;
  table.metric = metric;
  table.entries.reserve(scores.size());
  for (const SubmissionScore& s : scores) {
    RankEntry e;
    e.name = s.name;
    e.score_exact =
        metric == MetricChoice::kKaggle ? s.kaggle_exact : s.weighted_exact;
    e.score = metric == MetricChoice::kKaggle ? s.kaggle : s.weighted;
    table.entries.push_back(std::move(e));
  }
  std::sort(table.entries.begin(), table.entries.end(),
            [](const RankEntry& a, const RankEntry& b) {
              if (a.score_exact != b.score_exact) {
                return a.score_exact > b.score_exact;
              }
              return a.name < b.name;
            });
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    if (i > 0 &&
        table.entries[i].score_exact == table.entries[i - 1].score_exact) {
      table.entries[i].rank = table.entries[i - 1].rank;
    } else {
      table.entries[i].rank = i + 1;
    }
  }
  return table;
}

namespace detail {

// Midranks (average position of each tie group, 1-based) keyed by
// name. Exact rationals so correlation extremes stay exact.
inline std::map<std::string, Rational> midranks(const RankTable& t) {
  std::map<std::string, Rational> out;
  std::size_t i = 0;
  while (i < t.entries.size()) {
    std::size_t j = i;
    while (j < t.entries.size() &&
           t.entries[j].score_exact == t.entries[i].score_exact) {
      ++j;
    }
    // positions i+1 .. j, averaged
    const Rational mid = Rational(i + 1 + j) / 2;
    for (std::size_t k = i; k < j; ++k) out[t.entries[k].name] = mid;
    i = j;
  }
  return out;
}

}  // namespace detail

// Signed rank movement per submission between two leaderboards, plus
// summary fields: the biggest riser, the biggest faller (names resolve
// ties alphabetically), and the Spearman correlation of the two
// orderings computed on midranks.
inline RankDelta rank_delta(const RankTable& a, const RankTable& b) {
  std::map<std::string, std::size_t> rank_a, rank_b;
  for (const RankEntry& e : a.entries) rank_a[e.name] = e.rank;
  for (const RankEntry& e : b.entries) rank_b[e.name] = e.rank;
  if (rank_a.size() != rank_b.size() ||
      !std::equal(rank_a.begin(), rank_a.end(), rank_b.begin(),
                  [](const auto& x, const auto& y) {
                    return x.first == y.first;
                  })) {
    std::string diff;
    for (const auto& [name, r] : rank_a) {
      if (!rank_b.count(name)) diff += " -" + name;
    }
    for (const auto& [name, r] : rank_b) {
      if (!rank_a.count(name)) diff += " +" + name;
    }
    throw InputDomainError("tables rank different submissions:" + diff);
  }

  RankDelta d;
  for (const auto& [name, ra] : rank_a) {
    RankDeltaEntry e;
    e.name = name;
    e.rank_a = ra;
    e.rank_b = rank_b[name];
    e.delta = static_cast<long long>(ra) - static_cast<long long>(e.rank_b);
    d.entries.push_back(std::move(e));
  }
  const auto riser = std::max_element(
      d.entries.begin(), d.entries.end(),
      [](const RankDeltaEntry& x, const RankDeltaEntry& y) {
        return x.delta < y.delta || (x.delta == y.delta && x.name > y.name);
      });
  const auto faller = std::min_element(
      d.entries.begin(), d.entries.end(),
      [](const RankDeltaEntry& x, const RankDeltaEntry& y) {
        return x.delta < y.delta || (x.delta == y.delta && x.name < y.name);
      });
  d.max_riser = riser->name;
  d.max_faller = faller->name;

  const auto mids_a = detail::midranks(a);
  const auto mids_b = detail::midranks(b);
  const std::size_t n = mids_a.size();
  Rational mean_a = 0, mean_b = 0;
  for (const auto& [name, r] : mids_a) mean_a += r;
  for (const auto& [name, r] : mids_b) mean_b += r;
  mean_a /= n;
  mean_b /= n;
  Rational sxy = 0, sxx = 0, syy = 0;
  for (const auto& [name, ra] : mids_a) {
    const Rational dx = ra - mean_a;
    const Rational dy = mids_b.at(name) - mean_b;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0 && syy == 0) {
    // Two all-tied leaderboards order nothing, and they order it
    // identically.
    d.spearman = 1.0;
  } else if (sxx == 0 || syy == 0) {
    d.spearman = 0.0;
  } else if (sxy * sxy == sxx * syy) {
    d.spearman = sxy > 0 ? 1.0 : -1.0;  // exact extremes stay exact
  } else {
    d.spearman =
        to_double(sxy) / std::sqrt(to_double(sxx) * to_double(syy));
  }
  return d;
}

}  // namespace gweval
