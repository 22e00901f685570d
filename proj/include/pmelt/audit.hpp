#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pmelt/image.hpp"
#include "pmelt/melt.hpp"

namespace pmelt {

/// The melt operator under audit; defaults to pmelt::melt.
using MeltOperator = std::function<GrayImage(const MeltSchedule&, double)>;

struct AuditOptions {
  int grid_points = 21;
  double region_threshold = kRegionThreshold;
  double min_persistence = kMinFeaturePersistence;
  double mass_tolerance = 1e-9;
};

struct AuditCheck {
  std::string image;
  std::string property;
  bool passed = true;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditCheck> checks;
  std::size_t images = 0;

  std::size_t violations() const;
  /// One row per check plus a trailing '#' summary line.
  std::string csv() const;
};

/// Checks one image against the melt properties: beta1 non-increasing over the
/// grid, melt(0) == x, beta1(melt(1)) == 0, pixelwise monotone in t, mass
/// accounting, sequential fill, and disjoint regions.
std::vector<AuditCheck> audit_image(const GrayImage& x, const std::string& name,
                                    const AuditOptions& opts, const MeltOperator& op = melt);

struct NamedImage {
  std::string name;
  GrayImage image;
};

AuditReport audit_corpus(std::span<const NamedImage> corpus, const AuditOptions& opts,
                         const MeltOperator& op = melt);

}  // namespace pmelt
