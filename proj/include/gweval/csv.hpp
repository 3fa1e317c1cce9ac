// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "gweval/errors.hpp"

namespace gweval::csv {

// One parsed record plus the 1-based line it started on (for error
// reporting; quoted fields may span lines).
struct Row {
  std::size_t line = 0;
  std::vector<std::string> fields;
};

namespace detail {

inline bool consume_eol(std::string_view text, std::size_t& pos,
                        std::size_t& line) {
  if (pos >= text.size()) return false;
  if (text[pos] == '\n') {
    ++pos;
    ++line;
    return true;
  }
  if (text[pos] == '\r') {
    ++pos;
    if (pos < text.size() && text[pos] == '\n') ++pos;
    ++line;
    return true;
  }
  return false;
}

}  // namespace detail

// Splits CSV text into rows of fields. Handles quoted fields with
// embedded commas, escaped quotes ("") and newlines; accepts LF and
// CRLF line endings; skips blank lines. Throws FormatError on a stray
// quote inside an unquoted field or an unterminated quoted field.
inline std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  std::size_t pos = 0;
  std::size_t line = 1;
  while (pos < text.size()) {
    if (detail::consume_eol(text, pos, line)) continue;  // blank line
    Row row;
    row.line = line;
    bool done = false;
    while (!done) {
      std::string field;
      if (pos < text.size() && text[pos] == '"') {
        const std::size_t open_line = line;
        ++pos;
        bool closed = false;
        while (pos < text.size()) {
          const char c = text[pos];
          if (c == '"') {
            if (pos + 1 < text.size() && text[pos + 1] == '"') {
              field.push_back('"');
              pos += 2;
              continue;
            }
            ++pos;
            closed = true;
            break;
          }
          if (c == '\n') ++line;
          if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') {
            field.push_back('\n');
            pos += 2;
            ++line;
            continue;
          }
          field.push_back(c);
          ++pos;
        }
        if (!closed) {
          throw FormatError(open_line, "unterminated quoted field");
        }
        if (pos < text.size() && text[pos] != ',' && text[pos] != '\n' &&
            text[pos] != '\r') {
          throw FormatError(line, "unexpected character after closing quote");
        }
      } else {
        while (pos < text.size() && text[pos] != ',' && text[pos] != '\n' &&
               text[pos] != '\r') {
          if (text[pos] == '"') {
            throw FormatError(line, "quote inside unquoted field");
          }
          field.push_back(text[pos]);
          ++pos;
        }
      }
      row.fields.push_back(std::move(field));
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      done = true;
    }
    if (!detail::consume_eol(text, pos, line) && pos < text.size()) {
      throw FormatError(line, "malformed row");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FormatError("read failure on '" + path + "'");
  return std::move(buf).str();
}

inline std::vector<Row> parse_file(const std::string& path) {
  return parse(read_file(path));
}

// Strict numeric field parsers. The whole field must be consumed;
// surrounding whitespace is rejected so malformed data cannot slip
// through as a truncated number.
inline double parse_double(std::string_view field, std::size_t line,
                           std::string_view what) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw FormatError(line, "bad " + std::string(what) + " '" +
                                std::string(field) + "'");
  }
  return value;
}

inline long long parse_int(std::string_view field, std::size_t line,
                           std::string_view what) {
  long long value = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || field.empty()) {
    throw FormatError(line, "bad " + std::string(what) + " '" +
                                std::string(field) + "'");
  }
  return value;
}

// Quotes a field only when needed (comma, quote, CR or LF present).
inline std::string escape(std::string_view field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quotes) return std::string(field);
  std::string out;
  out.reserve(field.size() + 2);
  out.push_back('"');
  for (const char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace gweval::csv
