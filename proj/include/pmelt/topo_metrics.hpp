#pragma once

#include <span>
#include <vector>

#include "pmelt/image.hpp"

namespace pmelt {

struct BettiCount {
  int beta0 = 0;
  int beta1 = 0;

  friend bool operator==(const BettiCount&, const BettiCount&) = default;
};

enum class Connectivity { Four = 4, Eight = 8 };

/// Connected components of the pixels whose mask bit equals `value`.
struct ComponentLabels {
  /// Per pixel: component id, or -1 for pixels not of the selected value.
  std::vector<int> label;
  std::vector<int> area;
  std::vector<bool> touches_border;

  int count() const noexcept { return static_cast<int>(area.size()); }
};

/// Flood-fill labelling. Component ids follow raster order of first pixel.
ComponentLabels label_components(const BinaryMask& mask, bool value, Connectivity conn);

/// Betti numbers of a binary image: beta0 counts 8-connected foreground
/// components, beta1 counts 4-connected background components that do not
/// touch the border.
BettiCount oracle_betti(const BinaryMask& mask);

inline constexpr double kDefaultBinThreshold = 0.5;
inline constexpr int kDefaultMinArea = 3;

/// Number of enclosed holes: 4-connected background components of the
/// binarized image that avoid the border and have at least `min_area` pixels.
int measure_beta1(const GrayImage& x, double bin_threshold = kDefaultBinThreshold,
                  int min_area = kDefaultMinArea);

struct EvalRecord {
  int target_beta1 = 0;
  int measured_beta1 = 0;
  bool matched = false;

  static EvalRecord make(int target, int measured) {
    return {target, measured, target == measured};
  }
};

/// Fraction of matched records. Throws DomainError on an empty list.
double match_rate(std::span<const EvalRecord> records);

}  // namespace pmelt
