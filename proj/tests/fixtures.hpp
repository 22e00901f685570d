#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "pmelt/image.hpp"
#include "pmelt/mnist.hpp"
#include "pmelt/random.hpp"

namespace pmelt::testing {

inline std::string data_path(const std::string& name) {
  return std::string(PMELT_DATA_DIR) + "/" + name;
}

inline std::vector<LabeledImage> mnist_corpus() {
  static const auto corpus = load_mnist(data_path("mnist/mnist5k-images-idx3-ubyte"),
                                        data_path("mnist/mnist5k-labels-idx1-ubyte"));
  return corpus;
}

/// First image of the given digit in the corpus.
inline GrayImage mnist_digit(int digit, int occurrence = 0) {
  for (const auto& li : mnist_corpus())
    if (li.label == digit && occurrence-- == 0) return li.image;
  throw std::runtime_error("digit not found");
}

/// 5x5 image, ink (1.0) on the 8 pixels around the centre, 0 elsewhere.
inline GrayImage ring5() {
  GrayImage x(5, 5, 0.0);
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c)
      if (r != 2 || c != 2) x.set(r, c, 1.0);
  return x;
}

/// Square ink frames (value `ink`) around single-pixel holes at the given centres.
inline GrayImage frames(int h, int w, const std::vector<Pixel>& centres, double ink = 1.0) {
  GrayImage x(h, w, 0.0);
  for (const Pixel& p : centres)
    for (int dr = -1; dr <= 1; ++dr)
      for (int dc = -1; dc <= 1; ++dc)
        if (dr != 0 || dc != 0) x.set(p.row + dr, p.col + dc, ink);
  return x;
}

/// Image whose pixels take one of `levels` evenly spaced values in [0,1].
inline GrayImage random_levels(Rng& rng, int h, int w, int levels) {
  std::vector<double> data(static_cast<std::size_t>(h * w));
  for (double& v : data) v = static_cast<double>(rng.below(static_cast<std::uint64_t>(levels))) / (levels - 1);
  return GrayImage(h, w, std::move(data));
}

/// Mask of the sublevel set {x <= level}.
inline BinaryMask sublevel(const GrayImage& x, double level) {
  BinaryMask m(x.height(), x.width());
  for (int r = 0; r < x.height(); ++r)
    for (int c = 0; c < x.width(); ++c) m.set(r, c, x.at(r, c) <= level);
  return m;
}

}  // namespace pmelt::testing
