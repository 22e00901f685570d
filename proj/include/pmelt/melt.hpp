#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pmelt/image.hpp"
#include "pmelt/persistence.hpp"
#include "pmelt/topo_metrics.hpp"

namespace pmelt {

inline constexpr double kRegionThreshold = 0.5;
inline constexpr double kMinFeaturePersistence = 0.05;

/// No enclosed sub-threshold region could be associated with an H1 death cell.
class FeatureLocalizationError : public std::runtime_error {
 public:
  FeatureLocalizationError(const std::string& what, Pixel death_cell)
      : std::runtime_error(what), death_cell_(death_cell) {}

  Pixel death_cell() const noexcept { return death_cell_; }

 private:
  Pixel death_cell_;
};

/// The 4-connected component of {x < threshold} enclosed by the loop whose
/// death cell is `death_cell`. If the death cell itself is sub-threshold its
/// component is used; otherwise the single enclosed sub-threshold component
/// among its 8 neighbours. The result never touches the image border.
BinaryMask extract_region(const GrayImage& x, Pixel death_cell, double threshold);

struct MeltFeature {
  PersistencePair pair;
  BinaryMask region;
  double cumulative_mass_before = 0.0;

  double mass() const noexcept { return pair.persistence(); }
  double cumulative_mass_after() const noexcept { return cumulative_mass_before + mass(); }
};

/// H1 features of an image in fill order together with their interiors.
/// Immutable once built; safe to share across threads.
class MeltSchedule {
 public:
  MeltSchedule(GrayImage source, std::vector<MeltFeature> features,
               std::vector<std::string> warnings);

  const GrayImage& source() const noexcept { return source_; }
  std::span<const MeltFeature> features() const noexcept { return features_; }
  std::size_t size() const noexcept { return features_.size(); }
  double total_mass() const noexcept { return total_mass_; }
  /// Features dropped during construction, one message each.
  std::span<const std::string> warnings() const noexcept { return warnings_; }

 private:
  GrayImage source_;
  std::vector<MeltFeature> features_;
  std::vector<std::string> warnings_;
  double total_mass_ = 0.0;
};

/// Diagram of invert(x) -> H1 features above `min_persistence` -> regions.
/// Features whose region cannot be localized, or whose region was already
/// claimed by a more persistent feature, are dropped with a warning.
MeltSchedule build_schedule(const GrayImage& x, double threshold = kRegionThreshold,
                            double min_persistence = kMinFeaturePersistence);

/// Fill level of feature k at time t: clip((t*total - before_k) / mass_k, 0, 1).
/// Throws DomainError for t outside [0,1] or k out of range.
double amplitude(const MeltSchedule& s, std::size_t k, double t);

/// x_t = x max (max_k amplitude_k(t) * 1[region_k]).
GrayImage melt(const MeltSchedule& s, double t);

/// (t, measured beta1 of melt(s, t)) for each t of an ascending grid in [0,1].
std::vector<std::pair<double, int>> beta1_progression(const MeltSchedule& s,
                                                      std::span<const double> t_grid,
                                                      int min_area = kDefaultMinArea);

/// n evenly spaced points on [0,1], endpoints included.
std::vector<double> uniform_grid(int n);

}  // namespace pmelt
