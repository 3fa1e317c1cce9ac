// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "gweval/csv.hpp"
#include "gweval/rng.hpp"

using namespace gweval;

TEST_CASE("plain rows split on commas") {
  const auto rows = csv::parse("a,b,c\n1,2,3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].fields == std::vector<std::string>{"a", "b", "c"});
  CHECK(rows[1].fields == std::vector<std::string>{"1", "2", "3"});
  CHECK(rows[0].line == 1);
  CHECK(rows[1].line == 2);
}

TEST_CASE("quoted fields keep commas and doubled quotes") {
  const auto rows = csv::parse("\"a,b\",\"say \"\"hi\"\"\"\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].fields == std::vector<std::string>{"a,b", "say \"hi\""});
}

TEST_CASE("quoted fields may span lines") {
  const auto rows = csv::parse("\"one\ntwo\",x\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].fields[0] == "one\ntwo");
  CHECK(rows[0].fields[1] == "x");
}

TEST_CASE("carriage returns and blank lines are tolerated") {
  const auto rows = csv::parse("a,b\r\n\r\n1,2\r\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].fields == std::vector<std::string>{"1", "2"});
  CHECK(rows[1].line == 3);
}

TEST_CASE("file without trailing newline still yields its last row") {
  const auto rows = csv::parse("a,b\n1,2");
  REQUIRE(rows.size() == 2);
  CHECK(rows[1].fields == std::vector<std::string>{"1", "2"});
}

TEST_CASE("stray and unterminated quotes are format errors") {
  REQUIRE_THROWS_AS(csv::parse("a\"b,c\n"), FormatError);
  REQUIRE_THROWS_AS(csv::parse("\"abc\n"), FormatError);
  REQUIRE_THROWS_AS(csv::parse("\"abc\"x,y\n"), FormatError);
}

TEST_CASE("quote errors carry the offending line number") {
  try {
    csv::parse("ok,row\nbad\"row\n");
    FAIL("expected a format error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("numeric field parsing is strict about the whole field") {
  CHECK(csv::parse_double("1.5", 1, "v") == 1.5);
  CHECK(csv::parse_double("-2", 1, "v") == -2.0);
  CHECK(csv::parse_int("42", 1, "v") == 42);
  REQUIRE_THROWS_AS(csv::parse_double("1.5x", 1, "v"), FormatError);
  REQUIRE_THROWS_AS(csv::parse_double("", 1, "v"), FormatError);
  REQUIRE_THROWS_AS(csv::parse_int("3.5", 1, "v"), FormatError);
  REQUIRE_THROWS_AS(csv::parse_int("", 1, "v"), FormatError);
}

TEST_CASE("escape quotes only when needed and round-trips") {
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("with,comma") == "\"with,comma\"");
  CHECK(csv::escape("with\"quote") == "\"with\"\"quote\"");
  CHECK(csv::escape("with\nnewline") == "\"with\nnewline\"");

  SeededRng rng(33);
  const char alphabet[] = {'a', 'b', ',', '"', '\n', ' ', '7'};
  for (int i = 0; i < 300; ++i) {
    std::string field;
    const std::size_t len = rng.uniform_int(12);
    for (std::size_t k = 0; k < len; ++k) {
      field += alphabet[rng.uniform_int(sizeof(alphabet))];
    }
    const std::string text = csv::escape(field) + ",x\n";
    const auto rows = csv::parse(text);
    REQUIRE(rows.size() == 1);
    REQUIRE(rows[0].fields.size() == 2);
    CHECK(rows[0].fields[0] == field);
  }
}
