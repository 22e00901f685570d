#pragma once

#include <array>
#include <cstddef>

#include "pmelt/persistence.hpp"

namespace pmelt {

/// Persistence landscape sampled for H0 and H1, four levels, eight grid
/// points on [0,1] (endpoints included). Flat layout: [dim][level][point].
struct Landscape64 {
  static constexpr int kLevels = 4;
  static constexpr int kGridPoints = 8;
  static constexpr std::size_t kSize = 2 * kLevels * kGridPoints;

  std::array<double, kSize> values{};

  static constexpr std::size_t offset(int dim, int level, int point) {
    return static_cast<std::size_t>((dim * kLevels + level) * kGridPoints + point);
  }
  /// `level` is zero-based (level 0 is the top landscape function).
  double at(int dim, int level, int point) const { return values[offset(dim, level, point)]; }
  static constexpr double grid_point(int point) {
    return static_cast<double>(point) / (kGridPoints - 1);
  }
};

struct Summary5 {
  int n_h0 = 0;
  int n_h1 = 0;
  double max_pi_h1 = 0.0;
  double sum_pi_h1 = 0.0;
  double max_pi_h0 = 0.0;

  static constexpr std::size_t kSize = 5;
  std::array<double, kSize> as_array() const {
    return {static_cast<double>(n_h0), static_cast<double>(n_h1), max_pi_h1, sum_pi_h1,
            max_pi_h0};
  }
};

Landscape64 landscape(const Diagram& d);
Summary5 summary5(const Diagram& d);

}  // namespace pmelt
