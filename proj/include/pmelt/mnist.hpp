#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "pmelt/image.hpp"

namespace pmelt {

inline constexpr std::uint32_t kIdxImagesMagic = 2051;
inline constexpr std::uint32_t kIdxLabelsMagic = 2049;
inline constexpr int kMnistSide = 28;

struct LabeledImage {
  GrayImage image;
  int label = 0;
};

/// IDX3 unsigned-byte images, intensities byte/255. Throws ParseError.
std::vector<GrayImage> parse_idx_images(std::span<const std::uint8_t> bytes);
/// IDX1 unsigned-byte labels. Throws ParseError.
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

/// Inverse of parse_idx_images for images whose values are multiples of 1/255.
std::vector<std::uint8_t> serialize_idx_images(std::span<const GrayImage> images);

/// Pairs an images file with its labels file. Images must be 28x28 and labels
/// digits; counts must agree.
std::vector<LabeledImage> load_mnist(const std::string& images_path,
                                     const std::string& labels_path);

/// Order-preserving filter.
std::vector<LabeledImage> filter_classes(std::span<const LabeledImage> data,
                                         const std::set<int>& classes);

/// Up to `per_class` images of each requested class, returned in file order.
/// Without a seed the first ones in file order are taken; a seed selects a
/// reproducible random subset instead.
std::vector<LabeledImage> subsample_per_class(std::span<const LabeledImage> data,
                                              const std::set<int>& classes, int per_class,
                                              std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace pmelt
