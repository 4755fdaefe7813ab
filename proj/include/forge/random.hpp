#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace forge {

// Unbiased draw in [0, bound) from the raw 64-bit engine output. The engine
// sequence is fixed by the standard, so results are portable; the standard
// distributions are not.
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

template <typename T>
void shuffle_in_place(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::swap(items[i - 1], items[uniform_below(rng, i)]);
  }
}

template <typename T = std::int32_t>
std::vector<T> iota_vector(std::size_t n) {
  std::vector<T> v(n);
  std::iota(v.begin(), v.end(), T{0});
  return v;
}

}  // namespace forge
