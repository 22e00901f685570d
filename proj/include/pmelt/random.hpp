#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace pmelt {

/// Seeded generator whose output sequence is identical on every platform.
/// std::mt19937_64 is fully specified by the standard; the distributions in
/// <random> are not, so the few we need are written out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0,1], 53-bit resolution.
  double uniform01() {
    constexpr double kMax = static_cast<double>((std::uint64_t{1} << 53) - 1);
    return static_cast<double>(engine_() >> 11) / kMax;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[static_cast<std::size_t>(below(i))]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pmelt
