// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "gweval/errors.hpp"

namespace gweval {

// Deterministic counter-style generator built on the splitmix64
// finalizer. A stream is fully determined by (seed, stream id), so a
// per-sample stream draws the same sequence no matter which thread
// runs it or in what order samples are processed; std::mt19937 and
// friends are avoided because distribution output is not pinned across
// standard library implementations.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream)
      : state_(mix(seed ^ 0x8e9c4f1a627b3d05ULL) ^
               mix(stream + 0x1f83d9abfb41bd6bULL)) {}

  explicit SeededRng(std::uint64_t seed) : SeededRng(seed, 0) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits, the full double mantissa.
  double uniform_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on [lo, hi). Degenerate range returns lo.
  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform_unit();
  }

  // Uniform integer on [0, n). Rejection keeps the result unbiased for
  // every n, not just powers of two.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw InputDomainError("uniform_int needs n >= 1");
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // True with probability p. p <= 0 never fires, p >= 1 always does
  // (uniform_unit never returns 1.0).
  bool bernoulli(double p) { return uniform_unit() < p; }

 private:
  static constexpr std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t state_;
};

}  // namespace gweval
