#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace sqlreward::mutate::detail {

// Draws that depend only on the mt19937_64 output stream, so sequences are
// identical across standard libraries.

// Uniform in [0, n), rejection sampling without modulo bias. n > 0.
inline std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t bound = n;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

// Uniform in [0, 1) with 53 random bits.
inline double draw_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Index drawn proportionally to `weights` (non-negative, positive sum).
inline std::size_t draw_weighted(std::mt19937_64& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double target = draw_unit(rng) * total;
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last = i;
    if (target < acc) return i;
  }
  return last;
}

}  // namespace sqlreward::mutate::detail
