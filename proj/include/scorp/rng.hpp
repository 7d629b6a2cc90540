#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "scorp/util.hpp"

namespace scorp {

// Deterministic RNG. Uses the mt19937_64 engine directly (its output stream
// is fixed by the standard); distributions are hand-rolled because the
// std:: ones are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // [0, n)
  std::size_t below(std::size_t n) {
    if (n == 0) return 0;
    auto r = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return r >= n ? n - 1 : r;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 eng_;
};

// Named sub-seeds so each consumer of randomness (split, init, shuffle,
// dropout) can be reproduced in isolation from one master seed.
inline std::uint64_t sub_seed(std::uint64_t master, std::string_view name) {
  return mix64(master, fnv1a64(name));
}

inline std::uint64_t sub_seed(std::uint64_t master, std::string_view name,
                              std::uint64_t index) {
  return mix64(sub_seed(master, name), index);
}

}  // namespace scorp
