// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "gweval/errors.hpp"
#include "gweval/geometry.hpp"
#include "gweval/model.hpp"

namespace gweval {

// One training image with its annotations: row-major 8-bit RGB.
struct Sample {
  CanvasSize size;
  std::vector<std::uint8_t> pixels;
  BoxList boxes;

  Sample() = default;
  Sample(CanvasSize s, std::vector<std::uint8_t> px, BoxList b = {})
      : size(s), pixels(std::move(px)), boxes(std::move(b)) {
    check();
  }

  void check() const {
    const std::size_t expected = static_cast<std::size_t>(size.width) *
                                 static_cast<std::size_t>(size.height) * 3;
    if (pixels.size() != expected) {
      throw InputDomainError("pixel buffer holds " +
                             std::to_string(pixels.size()) + " bytes, " +
                             std::to_string(expected) + " expected");
    }
    for (const BoundingBox& b : boxes) {
      if (!b.within(size)) {
        throw InputDomainError("annotation box lies outside the canvas");
      }
    }
  }

  std::uint8_t& at(int x, int y, int c) {
    return pixels[(static_cast<std::size_t>(y) * size.width + x) * 3 + c];
  }
  std::uint8_t at(int x, int y, int c) const {
    return pixels[(static_cast<std::size_t>(y) * size.width + x) * 3 + c];
  }

  friend bool operator==(const Sample&, const Sample&) = default;
};

namespace detail {

// Reads one whitespace-delimited header token, skipping '#' comments.
inline std::string ppm_token(std::string_view data, std::size_t& pos) {
  for (;;) {
    while (pos < data.size() &&
           std::isspace(static_cast<unsigned char>(data[pos]))) {
      ++pos;
    }
    if (pos < data.size() && data[pos] == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
      continue;
    }
    break;
  }
  const std::size_t start = pos;
  while (pos < data.size() &&
         !std::isspace(static_cast<unsigned char>(data[pos]))) {
    ++pos;
  }
  if (pos == start) throw FormatError("truncated image header");
  return std::string(data.substr(start, pos - start));
}

inline int ppm_int(std::string_view data, std::size_t& pos,
                   std::string_view what) {
  const std::string tok = ppm_token(data, pos);
  int value = 0;
  for (const char c : tok) {
    if (c < '0' || c > '9') {
      throw FormatError("bad " + std::string(what) + " '" + tok + "'");
    }
    if (value > 214748363) throw FormatError(std::string(what) + " too large");
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace detail

// Parses a binary PPM (magic P6, maxval 255).
inline Sample parse_ppm(std::string_view data) {
  std::size_t pos = 0;
  if (detail::ppm_token(data, pos) != "P6") {
    throw FormatError("not a P6 image");
  }
  const int width = detail::ppm_int(data, pos, "width");
  const int height = detail::ppm_int(data, pos, "height");
  const int maxval = detail::ppm_int(data, pos, "maxval");
  if (width < 1 || height < 1) {
    throw FormatError("image dimensions must be >= 1");
  }
  if (maxval != 255) {
    throw FormatError("only maxval 255 is supported, got " +
                      std::to_string(maxval));
  }
  ++pos;  // single whitespace byte after maxval
  const std::size_t need = static_cast<std::size_t>(width) *
                           static_cast<std::size_t>(height) * 3;
  if (pos > data.size() || data.size() - pos < need) {
    throw FormatError("pixel payload truncated");
  }
  std::vector<std::uint8_t> pixels(need);
  std::copy_n(reinterpret_cast<const std::uint8_t*>(data.data()) + pos, need,
              pixels.begin());
  return Sample(CanvasSize(width, height), std::move(pixels));
}

inline std::string serialize_ppm(const Sample& s) {
  s.check();
  std::string out = "P6\n" + std::to_string(s.size.width) + " " +
                    std::to_string(s.size.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(s.pixels.data()), s.pixels.size());
  return out;
}

inline Sample read_ppm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open image '" + path + "'");
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw FormatError("read failure on image '" + path + "'");
  try {
    return parse_ppm(data);
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + " in '" + path + "'");
  }
}

inline void write_ppm(const std::string& path, const Sample& s) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot create image '" + path + "'");
  const std::string data = serialize_ppm(s);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw FormatError("write failure on image '" + path + "'");
}

}  // namespace gweval
