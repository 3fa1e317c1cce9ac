// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/ranking.hpp"
#include "gweval/rng.hpp"

using namespace gweval;

namespace {

std::vector<SubmissionScore> three_leaders() {
  return {
      make_submission_score("first", 0.6897, 0.61),
      make_submission_score("second", 0.6879, 0.62),
      make_submission_score("third", 0.6839, 0.63),
  };
}

}  // namespace

TEST_CASE("close scores still rank strictly") {
  const RankTable t = rank_table(three_leaders(), MetricChoice::kKaggle);
  REQUIRE(t.entries.size() == 3);
  CHECK(t.entries[0].name == "first");
  CHECK(t.entries[0].rank == 1);
  CHECK(t.entries[0].score == 0.6897);
  CHECK(t.entries[1].name == "second");
  CHECK(t.entries[1].rank == 2);
  CHECK(t.entries[2].name == "third");
  CHECK(t.entries[2].rank == 3);
}

TEST_CASE("the weighted table reverses this leaderboard") {
  const RankTable t = rank_table(three_leaders(), MetricChoice::kWeighted);
  CHECK(t.entries[0].name == "third");
  CHECK(t.entries[1].name == "second");
  CHECK(t.entries[2].name == "first");
}

TEST_CASE("ties share the best rank and consume positions") {
  const std::vector<SubmissionScore> scores{
      make_submission_score("b", 0.5, 0.5),
      make_submission_score("a", 0.5, 0.5),
      make_submission_score("c", 0.25, 0.25),
  };
  const RankTable t = rank_table(scores, MetricChoice::kKaggle);
  // Tied entries list alphabetically and share rank 1; the next
  // distinct score lands at rank 3.
  CHECK(t.entries[0].name == "a");
  CHECK(t.entries[0].rank == 1);
  CHECK(t.entries[1].name == "b");
  CHECK(t.entries[1].rank == 1);
  CHECK(t.entries[2].name == "c");
  CHECK(t.entries[2].rank == 3);
}

TEST_CASE("a single submission ranks first") {
  const RankTable t = rank_table({make_submission_score("only", 0.1, 0.1)},
                                 MetricChoice::kKaggle);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.entries[0].rank == 1);
}

TEST_CASE("ranking is invariant under input permutation") {
  SeededRng rng(901);
  std::vector<SubmissionScore> scores;
  for (int i = 0; i < 12; ++i) {
    scores.push_back(make_submission_score(
        "sub" + std::to_string(i),
        static_cast<double>(rng.uniform_int(8)) / 8.0,
        static_cast<double>(rng.uniform_int(8)) / 8.0));
  }
  const RankTable base = rank_table(scores, MetricChoice::kKaggle);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<SubmissionScore> shuffled = scores;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.uniform_int(i)]);
    }
    const RankTable t = rank_table(shuffled, MetricChoice::kKaggle);
    REQUIRE(t.entries.size() == base.entries.size());
    for (std::size_t i = 0; i < t.entries.size(); ++i) {
      REQUIRE(t.entries[i].name == base.entries[i].name);
      REQUIRE(t.entries[i].rank == base.entries[i].rank);
    }
  }
}

TEST_CASE("rank order is consistent with scores") {
  SeededRng rng(902);
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<SubmissionScore> scores;
    const int n = 2 + static_cast<int>(rng.uniform_int(10));
    for (int i = 0; i < n; ++i) {
      scores.push_back(make_submission_score(
          "s" + std::to_string(i),
          static_cast<double>(rng.uniform_int(5)) / 4.0,
          static_cast<double>(rng.uniform_int(5)) / 4.0));
    }
    const RankTable t = rank_table(scores, MetricChoice::kWeighted);
    for (std::size_t i = 1; i < t.entries.size(); ++i) {
      REQUIRE(t.entries[i - 1].score_exact >= t.entries[i].score_exact);
      if (t.entries[i - 1].score_exact == t.entries[i].score_exact) {
        REQUIRE(t.entries[i - 1].rank == t.entries[i].rank);
      } else {
        REQUIRE(t.entries[i].rank == i + 1);
      }
    }
  }
}

TEST_CASE("duplicate names and empty lists are rejected") {
  CHECK_THROWS_AS(rank_table({}, MetricChoice::kKaggle), InputDomainError);
  const std::vector<SubmissionScore> dup{
      make_submission_score("same", 0.5, 0.5),
      make_submission_score("same", 0.4, 0.4),
  };
  CHECK_THROWS_AS(rank_table(dup, MetricChoice::kKaggle), InputDomainError);
}

TEST_CASE("a table compared with itself is all zeros and correlation one") {
  const RankTable t = rank_table(three_leaders(), MetricChoice::kKaggle);
  const RankDelta d = rank_delta(t, t);
  REQUIRE(d.entries.size() == 3);
  for (const RankDeltaEntry& e : d.entries) {
    CHECK(e.delta == 0);
  }
  CHECK(d.spearman == 1.0);
  // All deltas tie at zero, so the alphabetical first name wins both.
  CHECK(d.max_riser == "first");
  CHECK(d.max_faller == "first");
}

TEST_CASE("a full reversal scores correlation minus one") {
  std::vector<SubmissionScore> scores;
  for (int i = 0; i < 5; ++i) {
    const double up = 0.1 * (i + 1);
    scores.push_back(
        make_submission_score("s" + std::to_string(i), up, 1.0 - up));
  }
  const RankTable k = rank_table(scores, MetricChoice::kKaggle);
  const RankTable w = rank_table(scores, MetricChoice::kWeighted);
  const RankDelta d = rank_delta(k, w);
  CHECK(d.spearman == -1.0);
  // s4 leads the first table and finishes last in the second.
  const auto it = std::find_if(
      d.entries.begin(), d.entries.end(),
      [](const RankDeltaEntry& e) { return e.name == "s4"; });
  REQUIRE(it != d.entries.end());
  CHECK(it->rank_a == 1);
  CHECK(it->rank_b == 5);
  CHECK(it->delta == -4);
  CHECK(d.max_faller == "s4");
  CHECK(d.max_riser == "s0");
}

TEST_CASE("delta is first rank minus second rank") {
  // One submission moves from 9th to 2nd: delta +7.
  std::vector<SubmissionScore> scores;
  for (int i = 0; i < 10; ++i) {
    const std::string name =
        (i < 9 ? "s" + std::to_string(i) : std::string("mover"));
    // Under the first metric "mover" sits 9th; under the second it
    // jumps to 2nd.
    const double first = i < 9 ? 1.0 - 0.05 * i : 1.0 - 0.05 * 7.5;
    const double second = i < 9 ? 1.0 - 0.05 * i : 1.0 - 0.05 * 0.5;
    scores.push_back(make_submission_score(name, first, second));
  }
  const RankTable a = rank_table(scores, MetricChoice::kKaggle);
  const RankTable b = rank_table(scores, MetricChoice::kWeighted);
  const auto find_rank = [](const RankTable& t, const std::string& n) {
    for (const RankEntry& e : t.entries) {
      if (e.name == n) return e.rank;
    }
    return std::size_t{0};
  };
  REQUIRE(find_rank(a, "mover") == 9);
  REQUIRE(find_rank(b, "mover") == 2);
  const RankDelta d = rank_delta(a, b);
  const auto it = std::find_if(
      d.entries.begin(), d.entries.end(),
      [](const RankDeltaEntry& e) { return e.name == "mover"; });
  REQUIRE(it != d.entries.end());
  CHECK(it->delta == 7);
  CHECK(d.max_riser == "mover");
}

TEST_CASE("correlation uses midranks under ties") {
  // First table: a > b = c; second table: a > b > c.
  // Midranks: (1, 2.5, 2.5) against (1, 2, 3).
  const std::vector<SubmissionScore> scores{
      make_submission_score("a", 1.0, 1.0),
      make_submission_score("b", 0.5, 0.75),
      make_submission_score("c", 0.5, 0.5),
  };
  const RankTable k = rank_table(scores, MetricChoice::kKaggle);
  const RankTable w = rank_table(scores, MetricChoice::kWeighted);
  const RankDelta d = rank_delta(k, w);
  // Pearson of (1, 2.5, 2.5) and (1, 2, 3) = 1.5 / sqrt(1.5 * 2).
  CHECK(d.spearman == Catch::Approx(1.5 / std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("tables over different submissions cannot be compared") {
  const RankTable a = rank_table({make_submission_score("x", 0.5, 0.5)},
                                 MetricChoice::kKaggle);
  const RankTable b = rank_table({make_submission_score("y", 0.5, 0.5)},
                                 MetricChoice::kWeighted);
  CHECK_THROWS_WITH(rank_delta(a, b),
                    Catch::Matchers::ContainsSubstring("-x") &&
                        Catch::Matchers::ContainsSubstring("+y"));
}

TEST_CASE("all-tied leaderboards correlate perfectly") {
  const std::vector<SubmissionScore> scores{
      make_submission_score("a", 0.5, 0.7),
      make_submission_score("b", 0.5, 0.7),
  };
  const RankTable k = rank_table(scores, MetricChoice::kKaggle);
  const RankTable w = rank_table(scores, MetricChoice::kWeighted);
  CHECK(rank_delta(k, w).spearman == 1.0);
}

TEST_CASE("one tied side yields zero correlation") {
  const std::vector<SubmissionScore> scores{
      make_submission_score("a", 0.5, 0.9),
      make_submission_score("b", 0.5, 0.1),
  };
  const RankTable k = rank_table(scores, MetricChoice::kKaggle);
  const RankTable w = rank_table(scores, MetricChoice::kWeighted);
  CHECK(rank_delta(k, w).spearman == 0.0);
}
