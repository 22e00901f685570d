#include "pmelt/topo_metrics.hpp"

#include <algorithm>

#include "pmelt/errors.hpp"

namespace pmelt {

ComponentLabels label_components(const BinaryMask& mask, bool value, Connectivity conn) {
  const int h = mask.height(), w = mask.width();
  ComponentLabels out;
  out.label.assign(mask.size(), -1);

  static constexpr int kDr8[8] = {-1, 0, 0, 1, -1, -1, 1, 1};
  static constexpr int kDc8[8] = {0, -1, 1, 0, -1, 1, -1, 1};
  const int n_nbrs = conn == Connectivity::Four ? 4 : 8;

  std::vector<Pixel> stack;
  for (int r0 = 0; r0 < h; ++r0) {
    for (int c0 = 0; c0 < w; ++c0) {
      if (mask.at(r0, c0) != value || out.label[mask.index(r0, c0)] >= 0) continue;
      const int id = out.count();
      int area = 0;
      bool border = false;
      out.label[mask.index(r0, c0)] = id;
      stack.push_back({r0, c0});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        ++area;
        if (p.row == 0 || p.col == 0 || p.row == h - 1 || p.col == w - 1) border = true;
        for (int i = 0; i < n_nbrs; ++i) {
          const int r = p.row + kDr8[i], c = p.col + kDc8[i];
          if (!mask.contains(r, c) || mask.at(r, c) != value) continue;
          int& l = out.label[mask.index(r, c)];
          if (l >= 0) continue;
          l = id;
          stack.push_back({r, c});
        }
      }
      out.area.push_back(area);
      out.touches_border.push_back(border);
    }
  }
  return out;
}

BettiCount oracle_betti(const BinaryMask& mask) {
  const auto fg = label_components(mask, true, Connectivity::Eight);
  const auto bg = label_components(mask, false, Connectivity::Four);
  BettiCount b;
  b.beta0 = fg.count();
  b.beta1 = static_cast<int>(
      std::count(bg.touches_border.begin(), bg.touches_border.end(), false));
  return b;
}

int measure_beta1(const GrayImage& x, double bin_threshold, int min_area) {
  const auto bg = label_components(binarize(x, bin_threshold), false, Connectivity::Four);
  int holes = 0;
  for (int i = 0; i < bg.count(); ++i)
    if (!bg.touches_border[i] && bg.area[i] >= min_area) ++holes;
  return holes;
}

double match_rate(std::span<const EvalRecord> records) {
  if (records.empty()) throw DomainError("match_rate: empty record list");
  const auto hits = std::count_if(records.begin(), records.end(),
                                  [](const EvalRecord& r) { return r.matched; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

}  // namespace pmelt
