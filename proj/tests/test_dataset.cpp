#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "pmelt/dataset.hpp"
#include "pmelt/descriptors.hpp"
#include "pmelt/errors.hpp"
#include "pmelt/melt.hpp"
#include "pmelt/persistence.hpp"
#include "pmelt/topo_metrics.hpp"

using namespace pmelt;

namespace {

std::vector<GrayImage> digits(int per_class) {
  std::vector<GrayImage> out;
  for (int k = 0; k < per_class; ++k)
    for (int d : {0, 1, 8}) out.push_back(testing::mnist_digit(d, k));
  return out;
}

}  // namespace

TEST_CASE("sample_time") {
  Rng a(5), b(5);
  const double a1 = sample_time(a), a2 = sample_time(a);
  CHECK(a1 == sample_time(b));
  CHECK(a2 == sample_time(b));

  Rng rng(1234);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = sample_time(rng);
    REQUIRE(t >= 0.0);
    REQUIRE(t <= 1.0);
    sum += t;
  }
  CHECK(std::abs(sum / 10000 - 0.5) <= 0.02);
}

TEST_CASE("training set layout") {
  TrainingSetOptions opts;
  opts.samples_per_image = 2;
  opts.seed = 1;
  const std::vector<GrayImage> one{testing::mnist_digit(0)};
  const DatasetFile file = emit_training_set(one, opts);
  CHECK(file.n() == 2);
  CHECK(file.kind() == "train");
  CHECK(file.get("x0").shape == std::vector<std::size_t>{2, 28, 28});
  CHECK(file.get("t").shape == std::vector<std::size_t>{2});
  CHECK(file.get("landscape").shape == std::vector<std::size_t>{1, 64});
  CHECK(file.get("summary").shape == std::vector<std::size_t>{1, 5});

  const auto bytes = file.encode();
  const auto newline = std::find(bytes.begin(), bytes.end(), '\n');
  const auto header = nlohmann::json::parse(std::string(bytes.begin(), newline));
  CHECK(header["version"] == 1);
  CHECK(header["n"] == 2);
  CHECK(header["h"] == 28);
  CHECK(header["w"] == 28);
  CHECK(header["tensors"] ==
        nlohmann::json({"x0", "t", "xt", "image_index", "landscape", "summary"}));
  const std::size_t payload = static_cast<std::size_t>(bytes.end() - newline - 1);
  CHECK(payload == (2 * 784 * 2 + 2 + 2 + 64 + 5) * 4);
}

TEST_CASE("training set is deterministic and independent of thread count") {
  const auto images = digits(4);
  TrainingSetOptions opts;
  opts.seed = 77;
  opts.threads = 1;
  const auto a = emit_training_set(images, opts).encode();
  const auto b = emit_training_set(images, opts).encode();
  opts.threads = 4;
  const auto c = emit_training_set(images, opts).encode();
  CHECK(a == b);
  CHECK(a == c);
  opts.seed = 78;
  CHECK(emit_training_set(images, opts).encode() != a);
}

TEST_CASE("stored triples re-melt and sidecars recompute") {
  const auto images = digits(3);
  TrainingSetOptions opts;
  opts.samples_per_image = 3;
  opts.seed = 3;
  const DatasetFile file = DatasetFile::decode(emit_training_set(images, opts).encode());
  REQUIRE(file.n() == 27);
  const auto& t = file.get("t").data;
  const auto& index = file.get("image_index").data;
  const auto& lands = file.get("landscape").data;
  for (std::size_t i = 0; i < 27; ++i) {
    const GrayImage x0 = file.image("x0", i);
    const GrayImage stored = file.image("xt", i);
    const GrayImage again = melt(build_schedule(x0), static_cast<double>(t[i]));
    for (std::size_t p = 0; p < x0.size(); ++p)
      REQUIRE(std::abs(stored.data()[p] - again.data()[p]) <= 1e-6);

    const Landscape64 l = landscape(compute_diagram(invert(x0)));
    const std::size_t img = static_cast<std::size_t>(index[i]);
    for (std::size_t k = 0; k < Landscape64::kSize; ++k)
      REQUIRE(std::abs(lands[img * 64 + k] - l.values[k]) <= 1e-6);
  }
}

TEST_CASE("decode rejects inconsistent files") {
  TrainingSetOptions opts;
  const std::vector<GrayImage> one{testing::mnist_digit(1)};
  auto bytes = emit_training_set(one, opts).encode();
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(DatasetFile::decode(truncated), ParseError);
  auto extended = bytes;
  extended.push_back(0);
  CHECK_THROWS_AS(DatasetFile::decode(extended), ParseError);
  const std::string junk = "{\"version\":2}\n";
  CHECK_THROWS_AS(DatasetFile::decode(std::vector<std::uint8_t>(junk.begin(), junk.end())),
                  ParseError);
  const std::string noline = "{\"version\":1";
  CHECK_THROWS_AS(DatasetFile::decode(std::vector<std::uint8_t>(noline.begin(), noline.end())),
                  ParseError);
}

TEST_CASE("float32 payload is little-endian") {
  DatasetFile f("test", 1, 1, 1);
  f.add("v", {{1}, {1.0f}});
  const auto bytes = f.encode();
  const std::vector<std::uint8_t> tail(bytes.end() - 4, bytes.end());
  CHECK(tail == std::vector<std::uint8_t>{0x00, 0x00, 0x80, 0x3f});
  CHECK_THROWS_AS(f.add("v", {{1}, {2.0f}}), DomainError);
  CHECK_THROWS_AS(f.add("w", {{2}, {2.0f}}), DomainError);
}

TEST_CASE("parse_pairs") {
  CHECK(parse_pairs("8:1,0:1") == std::vector<ClassPair>{{8, 1}, {0, 1}});
  CHECK(parse_pairs("1->8") == std::vector<ClassPair>{{1, 8}});
  CHECK_THROWS_AS(parse_pairs("8-1"), ConfigError);
  CHECK_THROWS_AS(parse_pairs("a:1"), ConfigError);
  CHECK_THROWS_AS(parse_pairs(""), ConfigError);
  CHECK(ClassPair{8, 1}.label() == "8->1");
}

TEST_CASE("in-distribution conditioning set") {
  const auto corpus = testing::mnist_corpus();
  ConditioningOptions opts;
  opts.n = 50;
  const ConditioningSet set = emit_conditioning_set(corpus, opts);
  CHECK(set.file.n() == 150);
  CHECK(set.manifest.size() == 150);
  const auto& beta = set.file.get("source_beta1").data;
  const auto& cls = set.file.get("source_class").data;
  for (std::size_t i = 0; i < 150; ++i) {
    CHECK(measure_beta1(set.file.image("xT", i)) == 0);
    CHECK(beta[i] == static_cast<float>(*canonical_beta1(static_cast<int>(cls[i]))));
    CHECK(corpus[set.manifest[i].source_position].label == set.manifest[i].source_class);
  }
  CHECK(manifest_csv(set.manifest).rfind("index,source_position,source_class,source_beta1,pair\n", 0) == 0);
}

TEST_CASE("out-of-distribution conditioning set") {
  ConditioningOptions opts;
  opts.mode = ConditioningMode::OutOfDistribution;
  opts.pairs = {{8, 1}};
  opts.n = 30;
  const ConditioningSet set = emit_conditioning_set(testing::mnist_corpus(), opts);
  REQUIRE(set.file.n() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(set.file.get("source_beta1").data[i] == 2.0f);
    CHECK(set.manifest[i].pair == "8->1");
    CHECK(measure_beta1(set.file.image("xT", i)) == 0);
  }
  CHECK(set.file.flags()["pairs"] == nlohmann::json({"8->1"}));
}

TEST_CASE("conditioning set errors and seeding") {
  ConditioningOptions opts;
  opts.classes = {8};
  opts.n = 600;
  CHECK_THROWS_AS(emit_conditioning_set(testing::mnist_corpus(), opts), ConfigError);

  opts.n = 5;
  opts.seed = 11;
  const auto a = emit_conditioning_set(testing::mnist_corpus(), opts);
  const auto b = emit_conditioning_set(testing::mnist_corpus(), opts);
  CHECK(a.file.encode() == b.file.encode());
  opts.seed = 12;
  const auto c = emit_conditioning_set(testing::mnist_corpus(), opts);
  CHECK(a.manifest[0].source_position != c.manifest[0].source_position);
}
