// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <set>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/rng.hpp"

using namespace gweval;

TEST_CASE("identical seed and stream replay the same sequence") {
  SeededRng a(42, 3);
  SeededRng b(42, 3);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams from one seed diverge immediately") {
  SeededRng a(42, 0);
  SeededRng b(42, 1);
  CHECK(a.next_u64() != b.next_u64());
  SeededRng c(42, 0);
  SeededRng d(43, 0);
  CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("stream draws are independent of interleaving order") {
  std::vector<std::uint64_t> sequential;
  for (std::uint64_t s = 0; s < 4; ++s) {
    SeededRng r(7, s);
    for (int i = 0; i < 8; ++i) sequential.push_back(r.next_u64());
  }
  std::vector<SeededRng> streams;
  for (std::uint64_t s = 0; s < 4; ++s) streams.emplace_back(7, s);
  std::vector<std::uint64_t> interleaved(32);
  for (int i = 0; i < 8; ++i) {
    for (std::size_t s = 0; s < 4; ++s) {
      interleaved[s * 8 + static_cast<std::size_t>(i)] =
          streams[s].next_u64();
    }
  }
  CHECK(sequential == interleaved);
}

TEST_CASE("unit draws stay in the half-open unit interval") {
  SeededRng r(99);
  for (int i = 0; i < 10000; ++i) {
    const double v = r.uniform_unit();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
  }
}

TEST_CASE("bounded integer draws cover exactly their range") {
  SeededRng r(5);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const std::uint64_t v = r.uniform_int(7);
    REQUIRE(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  REQUIRE_THROWS_AS(r.uniform_int(0), InputDomainError);
}

TEST_CASE("bounded integer draws are roughly uniform") {
  SeededRng r(6);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[r.uniform_int(10)];
  for (const int c : counts) {
    CHECK(c > n / 10 - n / 100);
    CHECK(c < n / 10 + n / 100);
  }
}

TEST_CASE("range draws respect their bounds") {
  SeededRng r(8);
  for (int i = 0; i < 5000; ++i) {
    const double v = r.uniform_real(0.25, 0.75);
    REQUIRE(v >= 0.25);
    REQUIRE(v < 0.75);
  }
}

TEST_CASE("bernoulli honors the degenerate probabilities") {
  SeededRng r(11);
  for (int i = 0; i < 1000; ++i) REQUIRE_FALSE(r.bernoulli(0.0));
  for (int i = 0; i < 1000; ++i) REQUIRE(r.bernoulli(1.0));
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += r.bernoulli(0.3) ? 1 : 0;
  CHECK(hits > 28500);
  CHECK(hits < 31500);
}

TEST_CASE("single-argument construction means stream zero") {
  SeededRng a(1234);
  SeededRng b(1234, 0);
  CHECK(a.next_u64() == b.next_u64());
}
