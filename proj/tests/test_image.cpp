#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "pmelt/errors.hpp"
#include "pmelt/image.hpp"
#include "pmelt/topo_metrics.hpp"

using namespace pmelt;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& header, std::vector<std::uint8_t> raster) {
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), raster.begin(), raster.end());
  return out;
}

}  // namespace

TEST_CASE("GrayImage validates shape and range") {
  CHECK_THROWS_AS(GrayImage(0, 3), DomainError);
  CHECK_THROWS_AS(GrayImage(2, 2, std::vector<double>{0, 0, 0}), DomainError);
  CHECK_THROWS_AS(GrayImage(1, 1, std::vector<double>{1.5}), DomainError);
  GrayImage x(2, 2);
  CHECK_THROWS_AS(x.set(0, 0, -0.1), DomainError);
}

TEST_CASE("invert") {
  const GrayImage zeros(2, 2, 0.0);
  CHECK(invert(zeros) == GrayImage(2, 2, 1.0));

  GrayImage x(1, 1, 0.3);
  CHECK(invert(x).at(0, 0) == doctest::Approx(0.7).epsilon(1e-15));

  const GrayImage dyadic(1, 4, std::vector<double>{0.0, 0.25, 0.5, 1.0});
  CHECK(invert(invert(dyadic)) == dyadic);
}

TEST_CASE("binarize") {
  const GrayImage x(1, 3, std::vector<double>{0.2, 0.5, 0.9});
  const BinaryMask m = binarize(x, 0.5);
  CHECK_FALSE(m.at(0, 0));
  CHECK(m.at(0, 1));
  CHECK(m.at(0, 2));
  CHECK(binarize(x, 0.0).count() == 3);
  CHECK_THROWS_AS(binarize(x, 1.01), DomainError);
  CHECK_THROWS_AS(binarize(x, -0.01), DomainError);
}

TEST_CASE("binarize is monotone in the threshold") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const GrayImage x = testing::random_levels(rng, 6, 7, 9);
    const double lo = rng.uniform01(), hi = rng.uniform01();
    const BinaryMask a = binarize(x, std::min(lo, hi)), b = binarize(x, std::max(lo, hi));
    for (int r = 0; r < x.height(); ++r)
      for (int c = 0; c < x.width(); ++c) CHECK((!b.at(r, c) || a.at(r, c)));
  }
}

TEST_CASE("binarized MNIST zero encloses exactly one background component") {
  const BinaryMask m = binarize(testing::mnist_digit(0), 0.5);
  CHECK(oracle_betti(m).beta1 == 1);
}

TEST_CASE("read_pgm") {
  SUBCASE("extremes") {
    CHECK(read_pgm(bytes_of("P5\n1 1\n255\n", {255})).at(0, 0) == 1.0);
    CHECK(read_pgm(bytes_of("P5\n1 1\n255\n", {0})).at(0, 0) == 0.0);
  }
  SUBCASE("comments and layout") {
    const GrayImage x = read_pgm(bytes_of("P5 # note\n3 2 255\n", {0, 51, 102, 153, 204, 255}));
    CHECK(x.height() == 2);
    CHECK(x.width() == 3);
    CHECK(x.at(1, 0) == doctest::Approx(0.6));
  }
  SUBCASE("errors carry offsets") {
    CHECK_THROWS_AS(read_pgm(bytes_of("P2\n1 1\n255\n", {0})), ParseError);
    try {
      read_pgm(bytes_of("P5\n1 1\n65535\n", {0, 0}));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 7);
    }
    try {
      read_pgm(bytes_of("P5\n2 2\n255\n", {1, 2, 3}));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.offset() == 14);
      CHECK(std::string(e.what()).find("truncated") != std::string::npos);
    }
    CHECK_THROWS_AS(read_pgm(bytes_of("P5\nx 1\n255\n", {0})), ParseError);
  }
}

TEST_CASE("write_pgm reproduces a canonical file byte for byte") {
  const auto file = bytes_of("P5\n3 2\n255\n", {0, 1, 127, 128, 254, 255});
  CHECK(write_pgm(read_pgm(file)) == file);
}

TEST_CASE("PGM round trip quantizes once") {
  Rng rng(11);
  std::vector<double> data(40);
  for (double& v : data) v = rng.uniform01();
  const GrayImage x(5, 8, data);
  const GrayImage once = read_pgm(write_pgm(x));
  for (std::size_t i = 0; i < data.size(); ++i) CHECK(std::abs(once.data()[i] - data[i]) <= 0.5 / 255 + 1e-12);
  CHECK(read_pgm(write_pgm(once)) == once);
}
