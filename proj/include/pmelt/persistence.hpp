#pragma once

#include <vector>

#include "pmelt/image.hpp"

namespace pmelt {

/// One interval of the sublevel-set persistence diagram of an image.
///
/// For H1 pairs `death_cell` is the pixel whose inclusion fills the enclosed
/// region (the last pixel of the hole to enter the filtration). For H0 pairs it
/// is the pixel whose inclusion merges the component into an older one; for the
/// essential H0 class it is the pixel where the class is born.
struct PersistencePair {
  double birth = 0.0;
  double death = 0.0;
  int dim = 0;
  Pixel death_cell{};
  /// True for the class that never dies; its death is capped at 1.0.
  bool essential = false;

  double persistence() const noexcept { return death - birth; }
  /// Whether the class is present in the sublevel set at `level`.
  bool alive_at(double level) const noexcept {
    return birth <= level && (essential || level < death);
  }

  friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

struct Diagram {
  std::vector<PersistencePair> pairs;
  int height = 0;
  int width = 0;

  int count(int dim) const;
  /// Number of pairs of dimension `dim` alive at `level`.
  int betti_at(int dim, double level) const;
};

/// Persistence of the sublevel filtration {x <= v} of the cubical complex
/// whose top cells are the pixels of `x` (lower cells take the minimum of their
/// cofaces). Sublevel sets are 8-connected; their complements 4-connected.
///
/// Equal intensities are ordered by (value, row, col). Zero-persistence pairs
/// are omitted. Callers wanting ink at low values pass invert(image).
Diagram compute_diagram(const GrayImage& x);

/// H1 pairs with persistence >= min_persistence, ascending by
/// (persistence, birth, death row, death col).
std::vector<PersistencePair> h1_features(const Diagram& d, double min_persistence);

}  // namespace pmelt
