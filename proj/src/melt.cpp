#include "pmelt/melt.hpp"

#include <algorithm>
#include <numeric>

#include "pmelt/errors.hpp"
#include "pmelt/topo_metrics.hpp"

namespace pmelt {

namespace {

std::string describe(Pixel p) {
  return "(" + std::to_string(p.row) + "," + std::to_string(p.col) + ")";
}

BinaryMask component_mask(const ComponentLabels& labels, int id, int h, int w) {
  BinaryMask m(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c)
      if (labels.label[m.index(r, c)] == id) m.set(r, c, true);
  return m;
}

}  // namespace

BinaryMask extract_region(const GrayImage& x, Pixel death_cell, double threshold) {
  if (!x.contains(death_cell.row, death_cell.col)) {
    throw DomainError("death cell " + describe(death_cell) + " outside image");
  }
  // Sub-threshold pixels form the "background" of the ink mask.
  const BinaryMask ink = binarize(x, threshold);
  const auto labels = label_components(ink, false, Connectivity::Four);
  const auto label_at = [&](int r, int c) { return labels.label[x.index(r, c)]; };

  int chosen = -1;
  if (!ink.at(death_cell)) {
    const int id = label_at(death_cell.row, death_cell.col);
    if (!labels.touches_border[id]) chosen = id;
  } else {
    std::vector<int> candidates;
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int r = death_cell.row + dr, c = death_cell.col + dc;
        if ((dr == 0 && dc == 0) || !x.contains(r, c)) continue;
        const int id = label_at(r, c);
        if (id < 0 || labels.touches_border[id]) continue;
        if (std::find(candidates.begin(), candidates.end(), id) == candidates.end())
          candidates.push_back(id);
      }
    }
    if (candidates.size() == 1) chosen = candidates.front();
  }
  if (chosen < 0) {
    throw FeatureLocalizationError(
        "no enclosed sub-threshold region for death cell " + describe(death_cell), death_cell);
  }
  return component_mask(labels, chosen, x.height(), x.width());
}

MeltSchedule::MeltSchedule(GrayImage source, std::vector<MeltFeature> features,
                           std::vector<std::string> warnings)
    : source_(std::move(source)), features_(std::move(features)), warnings_(std::move(warnings)) {
  double mass = 0.0;
  for (auto& f : features_) {
    if (f.region.height() != source_.height() || f.region.width() != source_.width()) {
      throw DomainError("melt feature region shape differs from source image");
    }
    f.cumulative_mass_before = mass;
    mass += f.mass();
  }
  total_mass_ = mass;
}

MeltSchedule build_schedule(const GrayImage& x, double threshold, double min_persistence) {
  const auto features = h1_features(compute_diagram(invert(x)), min_persistence);

  // Most persistent features claim their interiors first.
  std::vector<std::string> warnings;
  std::vector<bool> keep(features.size(), false);
  std::vector<BinaryMask> regions(features.size());
  for (std::size_t k = features.size(); k-- > 0;) {
    const auto& pair = features[k];
    try {
      regions[k] = extract_region(x, pair.death_cell, threshold);
    } catch (const FeatureLocalizationError& e) {
      warnings.push_back(std::string("dropped feature: ") + e.what());
      continue;
    }
    bool overlaps = false;
    for (std::size_t j = k + 1; j < features.size() && !overlaps; ++j)
      overlaps = keep[j] && regions[j].intersects(regions[k]);
    if (overlaps) {
      warnings.push_back("dropped feature at " + describe(pair.death_cell) +
                         ": region already claimed by a more persistent feature");
      continue;
    }
    keep[k] = true;
  }

  std::vector<MeltFeature> kept;
  for (std::size_t k = 0; k < features.size(); ++k)
    if (keep[k]) kept.push_back({features[k], std::move(regions[k]), 0.0});
  return MeltSchedule(x, std::move(kept), std::move(warnings));
}

double amplitude(const MeltSchedule& s, std::size_t k, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("melt time " + std::to_string(t) + " outside [0,1]");
  }
  if (k >= s.size()) throw DomainError("feature index out of range");
  const auto& f = s.features()[k];
  const double filled = t * s.total_mass();
  // The explicit bounds make fills strictly sequential under rounding.
  if (filled <= f.cumulative_mass_before) return 0.0;
  if (filled >= f.cumulative_mass_after()) return 1.0;
  return std::clamp((filled - f.cumulative_mass_before) / f.mass(), 0.0, 1.0);
}

GrayImage melt(const MeltSchedule& s, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw DomainError("melt time " + std::to_string(t) + " outside [0,1]");
  }
  GrayImage out = s.source();
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double a = amplitude(s, k, t);
    if (a <= 0.0) continue;
    const auto& region = s.features()[k].region;
    for (int r = 0; r < out.height(); ++r)
      for (int c = 0; c < out.width(); ++c)
        if (region.at(r, c) && out.at(r, c) < a) out.set(r, c, a);
  }
  return out;
}

std::vector<std::pair<double, int>> beta1_progression(const MeltSchedule& s,
                                                      std::span<const double> t_grid,
                                                      int min_area) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw DomainError("beta1_progression: time grid must be ascending");
  }
  std::vector<std::pair<double, int>> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.emplace_back(t, measure_beta1(melt(s, t), kDefaultBinThreshold, min_area));
  return out;
}

std::vector<double> uniform_grid(int n) {
  if (n < 2) throw DomainError("time grid needs at least 2 points");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) grid[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n - 1);
  return grid;
}

}  // namespace pmelt
