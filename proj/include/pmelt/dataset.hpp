#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pmelt/image.hpp"
#include "pmelt/mnist.hpp"
#include "pmelt/random.hpp"

namespace pmelt {

// ---------------------------------------------------------------------------
// Container format
//
//   line 1   JSON header, e.g.
//            {"version":1,"kind":"train","n":2,"h":28,"w":28,
//             "tensors":["x0","t","xt",...],"shapes":{"x0":[2,28,28],...},...}
//   '\n'
//   payload  tensors in header order, each little-endian float32, row-major.
//
// Header keys are emitted in sorted order, so equal content gives equal bytes.

struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<float> data;

  std::size_t element_count() const;
};

class DatasetFile {
 public:
  static constexpr int kVersion = 1;

  DatasetFile() = default;
  DatasetFile(std::string kind, int n, int height, int width);

  const std::string& kind() const noexcept { return kind_; }
  int n() const noexcept { return n_; }
  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }

  /// Extra header fields. Reserved keys are overwritten on encode.
  nlohmann::json& flags() noexcept { return flags_; }
  const nlohmann::json& flags() const noexcept { return flags_; }

  /// Appends a tensor; throws DomainError on a duplicate name or size mismatch.
  void add(std::string name, Tensor tensor);
  bool has(const std::string& name) const;
  const Tensor& get(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Image `i` of an [n, h, w] tensor.
  GrayImage image(const std::string& name, std::size_t i) const;

  std::vector<std::uint8_t> encode() const;
  /// Throws ParseError with the byte offset of the first inconsistency.
  static DatasetFile decode(std::span<const std::uint8_t> bytes);

 private:
  std::string kind_;
  int n_ = 0;
  int height_ = 0;
  int width_ = 0;
  nlohmann::json flags_ = nlohmann::json::object();
  std::vector<std::pair<std::string, Tensor>> tensors_;
};

/// Packs same-shaped images into an [n, h, w] tensor.
Tensor stack_images(std::span<const GrayImage> images);

// ---------------------------------------------------------------------------
// Emission

/// Uniform melt time on [0,1].
double sample_time(Rng& rng);

struct TrainingSetOptions {
  int samples_per_image = 4;
  std::uint64_t seed = 0;
  double region_threshold = 0.5;
  double min_persistence = 0.05;
  /// Worker threads; 0 picks the hardware concurrency. Output does not depend on it.
  unsigned threads = 0;
};

/// (x0, t, xt) triples plus per-image descriptor sidecars.
///
/// Tensors: x0 [n,h,w], t [n], xt [n,h,w], image_index [n],
/// landscape [m,64], summary [m,5] where m is the number of source images.
/// Images whose schedule cannot be built are skipped and listed under
/// the "skipped" header key.
DatasetFile emit_training_set(std::span<const GrayImage> images, const TrainingSetOptions& opts);

struct ClassPair {
  int source = 0;
  int target = 0;

  std::string label() const { return std::to_string(source) + "->" + std::to_string(target); }
  friend bool operator==(const ClassPair&, const ClassPair&) = default;
};

/// Parses "8:1,0:1" or "8->1,0->1".
std::vector<ClassPair> parse_pairs(const std::string& spec);

enum class ConditioningMode { InDistribution, OutOfDistribution };

/// Hole count a clean exemplar of the digit has, if it is one of the
/// benchmark digits {0, 1, 8}.
std::optional<int> canonical_beta1(int digit);

struct ConditioningOptions {
  ConditioningMode mode = ConditioningMode::InDistribution;
  std::set<int> classes{0, 1, 8};
  std::vector<ClassPair> pairs{{8, 1}, {0, 1}, {1, 8}, {1, 0}};
  /// Per class (in-distribution) or per pair (out-of-distribution); 0 picks
  /// 50 or 30 respectively.
  int n = 0;
  /// Subsampling seed; absent means first eligible images in file order.
  std::optional<std::uint64_t> seed;
  /// Skip sources whose measured beta1 differs from their digit's canonical count.
  bool require_canonical_beta1 = true;
  double region_threshold = 0.5;
  double min_persistence = 0.05;
};

struct ManifestRow {
  std::size_t index = 0;
  std::size_t source_position = 0;
  int source_class = 0;
  int source_beta1 = 0;
  std::string pair;
};

struct ConditioningSet {
  DatasetFile file;
  std::vector<ManifestRow> manifest;
};

/// Terminal states x_T = melt(source, 1) with the source's measured beta1.
///
/// Tensors: xT [n,h,w], x0 [n,h,w], source_beta1 [n], source_class [n],
/// pair_index [n] (-1 in-distribution), landscape [n,64], summary [n,5].
/// Throws ConfigError when a class has too few eligible images.
ConditioningSet emit_conditioning_set(std::span<const LabeledImage> data,
                                      const ConditioningOptions& opts);

std::string manifest_csv(std::span<const ManifestRow> rows);

}  // namespace pmelt
