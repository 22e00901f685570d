#include "pmelt/descriptors.hpp"

#include <algorithm>
#include <functional>
#include <vector>

namespace pmelt {

Landscape64 landscape(const Diagram& d) {
  constexpr int L = Landscape64::kLevels;
  Landscape64 out;
  for (int point = 0; point < Landscape64::kGridPoints; ++point) {
    const double s = Landscape64::grid_point(point);
    // Running top-L tent heights per dimension, descending.
    std::array<std::array<double, L>, 2> top{};
    for (const auto& p : d.pairs) {
      const double tent = std::max(0.0, std::min(s - p.birth, p.death - s));
      auto& levels = top[static_cast<std::size_t>(p.dim)];
      if (tent <= levels[L - 1]) continue;
      auto it = std::upper_bound(levels.begin(), levels.end(), tent, std::greater<>());
      std::move_backward(it, levels.end() - 1, levels.end());
      *it = tent;
    }
    for (int dim = 0; dim < 2; ++dim)
      for (int level = 0; level < L; ++level)
        out.values[Landscape64::offset(dim, level, point)] =
            top[static_cast<std::size_t>(dim)][static_cast<std::size_t>(level)];
  }
  return out;
}

Summary5 summary5(const Diagram& d) {
  Summary5 s;
  std::vector<double> h1;
  for (const auto& p : d.pairs) {
    const double pi = p.persistence();
    if (p.dim == 0) {
      ++s.n_h0;
      s.max_pi_h0 = std::max(s.max_pi_h0, pi);
    } else {
      ++s.n_h1;
      s.max_pi_h1 = std::max(s.max_pi_h1, pi);
      h1.push_back(pi);
    }
  }
  // Summing in sorted order keeps the result independent of pair order.
  std::sort(h1.begin(), h1.end());
  for (double pi : h1) s.sum_pi_h1 += pi;
  return s;
}

}  // namespace pmelt
