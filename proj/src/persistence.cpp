#include "pmelt/persistence.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "pmelt/errors.hpp"

namespace pmelt {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // Returns the surviving root.
  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return a;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

// Filtration order shared by both sweeps: (value, row, col) ascending.
std::vector<std::size_t> filtration_order(const GrayImage& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto values = x.data();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (values[a] != values[b]) return values[a] < values[b];
    return a < b;
  });
  return order;
}

Pixel pixel_of(const GrayImage& x, std::size_t i) {
  return {static_cast<int>(i / static_cast<std::size_t>(x.width())),
          static_cast<int>(i % static_cast<std::size_t>(x.width()))};
}

// H0: components of the sublevel set grow by adding pixels in filtration order.
// Components are 8-connected because pixels sharing a corner share a vertex.
void sweep_h0(const GrayImage& x, const std::vector<std::size_t>& order,
              const std::vector<std::size_t>& position, Diagram& out) {
  const std::size_t n = x.size();
  UnionFind uf(n);
  // Oldest pixel (smallest filtration position) in each root's component.
  std::vector<std::size_t> oldest(n);
  const auto values = x.data();

  std::vector<std::size_t> roots;
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t p = order[step];
    const Pixel px = pixel_of(x, p);
    roots.clear();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) continue;
        const int r = px.row + dr, c = px.col + dc;
        if (!x.contains(r, c)) continue;
        const std::size_t q = x.index(r, c);
        if (position[q] >= step) continue;
        const std::size_t root = uf.find(q);
        if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
      }
    }
    if (roots.empty()) {
      oldest[p] = p;
      continue;
    }
    const auto eldest = *std::min_element(roots.begin(), roots.end(), [&](auto a, auto b) {
      return position[oldest[a]] < position[oldest[b]];
    });
    const std::size_t keep = oldest[eldest];
    for (std::size_t root : roots) {
      if (root == eldest) continue;
      const double birth = values[oldest[root]];
      if (birth < values[p]) out.pairs.push_back({birth, values[p], 0, px, false});
    }
    std::size_t merged = p;
    for (std::size_t root : roots) merged = uf.unite(merged, root);
    oldest[merged] = keep;
  }

  const std::size_t first = order.front();
  out.pairs.push_back({values[first], 1.0, 0, pixel_of(x, first), true});
}

// H1 by duality: a hole of the sublevel set at level v is a 4-connected
// component of {x > v} that does not reach the border. Sweeping pixels in
// reverse filtration order grows these complement components; the region
// outside the grid is the eldest component and absorbs any that touch the
// border. A component dies (as a hole, it is born) when it merges.
void sweep_h1(const GrayImage& x, const std::vector<std::size_t>& order,
              const std::vector<std::size_t>& position, Diagram& out) {
  const std::size_t n = x.size();
  const std::size_t outside = n;
  UnionFind uf(n + 1);
  // Newest pixel (largest filtration position) in each root's component.
  std::vector<std::size_t> newest(n + 1);
  newest[outside] = outside;
  const auto values = x.data();
  const auto rank_of = [&](std::size_t node) {
    return node == outside ? std::numeric_limits<std::size_t>::max() : position[node];
  };

  constexpr int kDr[4] = {-1, 0, 0, 1};
  constexpr int kDc[4] = {0, -1, 1, 0};
  std::vector<std::size_t> roots;
  for (std::size_t k = n; k-- > 0;) {
    const std::size_t p = order[k];
    const Pixel px = pixel_of(x, p);
    roots.clear();
    bool on_border = false;
    for (int i = 0; i < 4; ++i) {
      const int r = px.row + kDr[i], c = px.col + kDc[i];
      if (!x.contains(r, c)) {
        on_border = true;
        continue;
      }
      const std::size_t q = x.index(r, c);
      if (position[q] <= k) continue;
      const std::size_t root = uf.find(q);
      if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
    }
    if (on_border) {
      const std::size_t root = uf.find(outside);
      if (std::find(roots.begin(), roots.end(), root) == roots.end()) roots.push_back(root);
    }
    if (roots.empty()) {
      newest[p] = p;
      continue;
    }
    const auto eldest = *std::max_element(roots.begin(), roots.end(), [&](auto a, auto b) {
      return rank_of(newest[a]) < rank_of(newest[b]);
    });
    const std::size_t keep = newest[eldest];
    for (std::size_t root : roots) {
      if (root == eldest) continue;
      const std::size_t cell = newest[root];
      const double death = values[cell];
      if (values[p] < death) out.pairs.push_back({values[p], death, 1, pixel_of(x, cell), false});
    }
    std::size_t merged = p;
    for (std::size_t root : roots) merged = uf.unite(merged, root);
    newest[merged] = keep;
  }
}

}  // namespace

int Diagram::count(int dim) const {
  return static_cast<int>(
      std::count_if(pairs.begin(), pairs.end(), [dim](const auto& p) { return p.dim == dim; }));
}

int Diagram::betti_at(int dim, double level) const {
  return static_cast<int>(std::count_if(pairs.begin(), pairs.end(), [&](const auto& p) {
    return p.dim == dim && p.alive_at(level);
  }));
}

Diagram compute_diagram(const GrayImage& x) {
  if (x.empty()) throw DomainError("compute_diagram: image must be at least 1x1");
  Diagram d;
  d.height = x.height();
  d.width = x.width();
  const auto order = filtration_order(x);
  std::vector<std::size_t> position(x.size());
  for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
  sweep_h0(x, order, position, d);
  sweep_h1(x, order, position, d);
  return d;
}

std::vector<PersistencePair> h1_features(const Diagram& d, double min_persistence) {
  std::vector<PersistencePair> out;
  for (const auto& p : d.pairs)
    if (p.dim == 1 && p.persistence() >= min_persistence) out.push_back(p);
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.persistence() != b.persistence()) return a.persistence() < b.persistence();
    if (a.birth != b.birth) return a.birth < b.birth;
    return a.death_cell < b.death_cell;
  });
  return out;
}

}  // namespace pmelt
