#include <sketchpress/random.hpp>

#include <cmath>
#include <numbers>

namespace sketchpress {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(splitmix64(seed_ ^ splitmix64(stream_)) ^ counter);
}

double CounterRng::uniform(std::uint64_t counter) const {
  // 53 random mantissa bits, shifted off zero
  const std::uint64_t b = bits(counter) >> 11;
  return (static_cast<double>(b) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t counter) const {
  const double u1 = uniform(2 * counter);
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed, std::uint64_t stream) {
  const CounterRng rng(seed, stream);
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const auto counter = static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(cols) +
                           static_cast<std::uint64_t>(j);
      out(i, j) = rng.normal(counter);
    }
  }
  return out;
}

}  // namespace sketchpress
