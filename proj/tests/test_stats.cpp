// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/rng.hpp"
#include "gweval/stats.hpp"

using namespace gweval;

TEST_CASE("F upper tail matches high-precision reference values") {
  // Reference values computed with 50-digit arbitrary-precision
  // arithmetic and rounded to double.
  struct Case {
    double f, d1, d2, tail;
  };
  const Case cases[] = {
      {32.0, 1.0, 2.0, 0.029857499854668106},
      {4.0, 3.0, 10.0, 0.041347681036082542},
      {2.5, 2.0, 17.0, 0.11174369931263258},
      {0.3, 4.0, 8.0, 0.87005928677200703},
      {100.0, 1.0, 1.0, 0.063451034861107139},
      {7.2, 6.0, 3.0, 0.066882870147408269},
  };
  for (const auto& c : cases) {
    const double got = stats::f_upper_tail(c.f, c.d1, c.d2);
    CHECK(got == Catch::Approx(c.tail).epsilon(1e-12));
  }
}

TEST_CASE("F upper tail edge behavior") {
  CHECK(stats::f_upper_tail(0.0, 3.0, 5.0) == 1.0);
  CHECK(stats::f_upper_tail(1e9, 2.0, 8.0) < 1e-8);
  CHECK_THROWS_AS(stats::f_upper_tail(-1.0, 2.0, 2.0), InputDomainError);
  CHECK_THROWS_AS(stats::f_upper_tail(1.0, 0.0, 2.0), InputDomainError);
  CHECK_THROWS_AS(stats::f_upper_tail(1.0, 2.0, 0.0), InputDomainError);
}

TEST_CASE("incomplete beta endpoints and symmetry") {
  CHECK(stats::regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(stats::regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
  // I_x(a,a) at the midpoint is exactly one half by symmetry.
  CHECK(stats::regularized_incomplete_beta(4.0, 4.0, 0.5) ==
        Catch::Approx(0.5).epsilon(1e-14));
  SeededRng rng(311);
  for (int i = 0; i < 200; ++i) {
    const double a = 0.5 + 9.5 * rng.uniform_unit();
    const double b = 0.5 + 9.5 * rng.uniform_unit();
    const double x = rng.uniform_unit();
    const double lhs = stats::regularized_incomplete_beta(a, b, x);
    const double rhs = stats::regularized_incomplete_beta(b, a, 1.0 - x);
    REQUIRE(lhs + rhs == Catch::Approx(1.0).epsilon(1e-12));
    REQUIRE(lhs >= 0.0);
    REQUIRE(lhs <= 1.0);
  }
  CHECK_THROWS_AS(stats::regularized_incomplete_beta(0.0, 1.0, 0.5),
                  InputDomainError);
  CHECK_THROWS_AS(stats::regularized_incomplete_beta(1.0, 1.0, 1.5),
                  InputDomainError);
}

TEST_CASE("incomplete beta closed forms for small integer parameters") {
  // I_x(1, 1) = x and I_x(1, 2) = 1 - (1-x)^2 = 2x - x^2.
  SeededRng rng(313);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform_unit();
    CHECK(stats::regularized_incomplete_beta(1.0, 1.0, x) ==
          Catch::Approx(x).margin(1e-14));
    CHECK(stats::regularized_incomplete_beta(1.0, 2.0, x) ==
          Catch::Approx(2.0 * x - x * x).margin(1e-13));
  }
}

TEST_CASE("percentile interpolates between order statistics") {
  const std::vector<double> v{10.0, 20.0, 30.0, 40.0};
  CHECK(stats::percentile(v, 0.0) == 10.0);
  CHECK(stats::percentile(v, 1.0) == 40.0);
  // h = 3 * 0.5 = 1.5, halfway between the 2nd and 3rd values.
  CHECK(stats::percentile(v, 0.5) == Catch::Approx(25.0));
  // h = 3 * 0.99 = 2.97.
  CHECK(stats::percentile(v, 0.99) == Catch::Approx(30.0 + 0.97 * 10.0));
  CHECK(stats::percentile({7.0}, 0.25) == 7.0);
  CHECK_THROWS_AS(stats::percentile({}, 0.5), InputDomainError);
  CHECK_THROWS_AS(stats::percentile({1.0}, 1.5), InputDomainError);
}

TEST_CASE("percentile ignores input order") {
  const std::vector<double> sorted{1.0, 2.0, 3.0, 4.0, 5.0};
  const std::vector<double> shuffled{4.0, 1.0, 5.0, 3.0, 2.0};
  for (const double q : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    CHECK(stats::percentile(sorted, q) == stats::percentile(shuffled, q));
  }
}

TEST_CASE("median of odd and even counts") {
  CHECK(stats::median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(stats::median({4.0, 1.0, 2.0, 3.0}) == Catch::Approx(2.5));
  CHECK(stats::median({5.0}) == 5.0);
}

TEST_CASE("mean and population stddev") {
  CHECK(stats::mean({2.0, 4.0, 6.0}) == Catch::Approx(4.0));
  CHECK_THROWS_AS(stats::mean({}), InputDomainError);
  // Population variance of {2, 4, 4, 4, 5, 5, 7, 9} is 4.
  CHECK(stats::population_stddev({2, 4, 4, 4, 5, 5, 7, 9}) ==
        Catch::Approx(2.0));
  CHECK(stats::population_stddev({3.0, 3.0, 3.0}) == 0.0);
}

TEST_CASE("pearson correlation on exact linear data") {
  const std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  const std::vector<double> up{2.0, 4.0, 6.0, 8.0};
  const std::vector<double> down{8.0, 6.0, 4.0, 2.0};
  CHECK(stats::pearson(xs, up) == Catch::Approx(1.0));
  CHECK(stats::pearson(xs, down) == Catch::Approx(-1.0));
}

TEST_CASE("pearson correlation degenerate and error cases") {
  CHECK(stats::pearson({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(stats::pearson({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}) == 0.0);
  CHECK_THROWS_AS(stats::pearson({1.0}, {2.0}), InputDomainError);
  CHECK_THROWS_AS(stats::pearson({1.0, 2.0}, {1.0}), InputDomainError);
}

TEST_CASE("pearson is invariant under positive affine maps") {
  SeededRng rng(317);
  for (int iter = 0; iter < 50; ++iter) {
    std::vector<double> xs, ys;
    for (int i = 0; i < 20; ++i) {
      xs.push_back(rng.uniform_unit() * 10.0);
      ys.push_back(rng.uniform_unit() * 10.0);
    }
    const double base = stats::pearson(xs, ys);
    std::vector<double> xs2, ys2;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xs2.push_back(3.0 * xs[i] + 7.0);
      ys2.push_back(0.5 * ys[i] - 2.0);
    }
    REQUIRE(stats::pearson(xs2, ys2) == Catch::Approx(base).margin(1e-12));
  }
}
