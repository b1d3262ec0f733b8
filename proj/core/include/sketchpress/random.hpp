#pragma once

#include <sketchpress/types.hpp>

#include <cstdint>

namespace sketchpress {

/// Counter-based generator: every draw is a pure function of (seed, stream,
/// counter), so results do not depend on call order or on the standard
/// library's distribution implementations.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const;

  /// Uniform in the open interval (0, 1).
  double uniform(std::uint64_t counter) const;

  /// Standard normal via Box-Muller on two uniforms derived from `counter`.
  double normal(std::uint64_t counter) const;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

/// rows x cols matrix of i.i.d. N(0,1) entries; entry (i, j) depends only on
/// (seed, stream, i, j).
Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace sketchpress
