#include "pmelt/mnist.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pmelt/errors.hpp"
#include "pmelt/random.hpp"

namespace pmelt {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) throw ParseError("truncated IDX header", bytes.size());
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void check_magic(std::span<const std::uint8_t> bytes, std::uint32_t expected) {
  const auto magic = read_be32(bytes, 0);
  if (magic != expected) {
    throw ParseError("IDX magic " + std::to_string(magic) + ", expected " +
                         std::to_string(expected),
                     0);
  }
}

void check_payload(std::span<const std::uint8_t> bytes, std::size_t header, std::size_t need) {
  const std::size_t have = bytes.size() - header;
  if (have < need) {
    throw ParseError("truncated IDX payload: need " + std::to_string(need) + " bytes, have " +
                         std::to_string(have),
                     bytes.size());
  }
  if (have > need) {
    throw ParseError("IDX payload longer than header declares", header + need);
  }
}

}  // namespace

std::vector<GrayImage> parse_idx_images(std::span<const std::uint8_t> bytes) {
  check_magic(bytes, kIdxImagesMagic);
  const std::size_t count = read_be32(bytes, 4);
  const std::uint32_t rows = read_be32(bytes, 8);
  const std::uint32_t cols = read_be32(bytes, 12);
  if (rows == 0 || cols == 0 || rows > 65536 || cols > 65536) {
    throw ParseError("invalid IDX image dimensions " + std::to_string(rows) + "x" +
                         std::to_string(cols),
                     8);
  }
  constexpr std::size_t header = 16;
  const std::size_t per_image = std::size_t{rows} * cols;
  check_payload(bytes, header, count * per_image);

  std::vector<GrayImage> images;
  images.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<double> data(per_image);
    const std::size_t base = header + i * per_image;
    for (std::size_t j = 0; j < per_image; ++j) data[j] = bytes[base + j] / 255.0;
    images.emplace_back(static_cast<int>(rows), static_cast<int>(cols), std::move(data));
  }
  return images;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  check_magic(bytes, kIdxLabelsMagic);
  const std::size_t count = read_be32(bytes, 4);
  constexpr std::size_t header = 8;
  check_payload(bytes, header, count);
  return {bytes.begin() + header, bytes.end()};
}

std::vector<std::uint8_t> serialize_idx_images(std::span<const GrayImage> images) {
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxImagesMagic);
  put_be32(out, static_cast<std::uint32_t>(images.size()));
  const int rows = images.empty() ? 0 : images.front().height();
  const int cols = images.empty() ? 0 : images.front().width();
  put_be32(out, static_cast<std::uint32_t>(rows));
  put_be32(out, static_cast<std::uint32_t>(cols));
  for (const auto& img : images) {
    if (img.height() != rows || img.width() != cols) {
      throw DomainError("serialize_idx_images: images differ in shape");
    }
    for (double v : img.data()) out.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
  }
  return out;
}

std::vector<LabeledImage> load_mnist(const std::string& images_path,
                                     const std::string& labels_path) {
  auto images = parse_idx_images(read_file(images_path));
  const auto labels = parse_idx_labels(read_file(labels_path));
  if (images.size() != labels.size()) {
    throw ParseError(images_path + " holds " + std::to_string(images.size()) + " images but " +
                         labels_path + " holds " + std::to_string(labels.size()) + " labels",
                     4);
  }
  std::vector<LabeledImage> out;
  out.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].height() != kMnistSide || images[i].width() != kMnistSide) {
      throw ParseError(images_path + ": expected 28x28 images", 8);
    }
    if (labels[i] > 9) {
      throw ParseError(labels_path + ": label " + std::to_string(labels[i]) + " is not a digit",
                       8 + i);
    }
    out.push_back({std::move(images[i]), labels[i]});
  }
  return out;
}

std::vector<LabeledImage> filter_classes(std::span<const LabeledImage> data,
                                         const std::set<int>& classes) {
  std::vector<LabeledImage> out;
  std::copy_if(data.begin(), data.end(), std::back_inserter(out),
               [&](const LabeledImage& li) { return classes.contains(li.label); });
  return out;
}

std::vector<LabeledImage> subsample_per_class(std::span<const LabeledImage> data,
                                              const std::set<int>& classes, int per_class,
                                              std::optional<std::uint64_t> seed) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < data.size(); ++i)
    if (classes.contains(data[i].label)) by_class[data[i].label].push_back(i);

  std::vector<std::size_t> picked;
  for (auto& [label, indices] : by_class) {
    if (seed) {
      Rng rng(*seed + static_cast<std::uint64_t>(label));
      rng.shuffle(indices);
    }
    const auto take = std::min(indices.size(), static_cast<std::size_t>(std::max(per_class, 0)));
    picked.insert(picked.end(), indices.begin(), indices.begin() + static_cast<long>(take));
  }
  std::sort(picked.begin(), picked.end());

  std::vector<LabeledImage> out;
  out.reserve(picked.size());
  for (std::size_t i : picked) out.push_back(data[i]);
  return out;
}

}  // namespace pmelt
