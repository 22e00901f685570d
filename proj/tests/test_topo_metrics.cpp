#include <doctest.h>

#include "fixtures.hpp"
#include "pmelt/errors.hpp"
#include "pmelt/persistence.hpp"
#include "pmelt/topo_metrics.hpp"

using namespace pmelt;

TEST_CASE("oracle_betti on basic masks") {
  CHECK(oracle_betti(BinaryMask(4, 4, false)) == BettiCount{0, 0});
  CHECK(oracle_betti(BinaryMask(4, 4, true)) == BettiCount{1, 0});
  CHECK(oracle_betti(binarize(testing::ring5(), 0.5)) == BettiCount{1, 1});
}

TEST_CASE("oracle_betti connectivity conventions") {
  // Checkerboard 2x2 block: diagonal ink is one component (8-connected).
  BinaryMask m(4, 4, false);
  m.set(1, 1, true);
  m.set(2, 2, true);
  CHECK(oracle_betti(m) == BettiCount{1, 0});

  // Diamond around (2,2): the centre is enclosed since background is 4-connected.
  BinaryMask d(5, 5, false);
  d.set(1, 2, true);
  d.set(2, 1, true);
  d.set(2, 3, true);
  d.set(3, 2, true);
  CHECK(oracle_betti(d) == BettiCount{1, 1});
}

TEST_CASE("measure_beta1") {
  CHECK(measure_beta1(GrayImage(6, 6, 0.0)) == 0);
  // The ring's hole is a single pixel: counted by the oracle, filtered as
  // noise under the default 3-pixel floor.
  CHECK(measure_beta1(testing::ring5(), 0.5, 1) == 1);
  CHECK(measure_beta1(testing::ring5()) == 0);
  CHECK(measure_beta1(testing::frames(7, 7, {{3, 3}}, 1.0), 0.5, 1) == 1);
}

TEST_CASE("measure_beta1 area filter") {
  // Ring around a 1-pixel hole and ring around a 2x2 hole.
  GrayImage x(8, 12, 0.0);
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c) x.set(r, c, 1.0);
  x.set(2, 2, 0.0);
  for (int r = 2; r <= 5; ++r)
    for (int c = 6; c <= 9; ++c) x.set(r, c, 1.0);
  x.set(3, 7, 0.0);
  x.set(3, 8, 0.0);
  x.set(4, 7, 0.0);
  x.set(4, 8, 0.0);
  CHECK(measure_beta1(x, 0.5, 1) == 2);
  CHECK(measure_beta1(x, 0.5, 2) == 1);
  CHECK(measure_beta1(x, 0.5, 3) == 1);
  CHECK(measure_beta1(x, 0.5, 5) == 0);
}

TEST_CASE("measure_beta1 with min_area 1 equals the oracle on binary images") {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const GrayImage x = testing::random_levels(rng, 1 + static_cast<int>(rng.below(9)),
                                               1 + static_cast<int>(rng.below(9)), 2);
    CHECK(measure_beta1(x, 0.5, 1) == oracle_betti(binarize(x, 0.5)).beta1);
  }
}

TEST_CASE("measure_beta1 depends only on the threshold partition") {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const GrayImage x = testing::random_levels(rng, 9, 9, 5);
    // Monotone remap fixing which side of 0.5 each pixel is on.
    GrayImage y(9, 9);
    for (int r = 0; r < 9; ++r)
      for (int c = 0; c < 9; ++c) {
        const double v = x.at(r, c);
        y.set(r, c, v >= 0.5 ? 0.5 + (v - 0.5) * 0.3 : v * 0.9);
      }
    CHECK(measure_beta1(x) == measure_beta1(y));
  }
}

TEST_CASE("MNIST digits measure their class hole count") {
  CHECK(measure_beta1(testing::mnist_digit(1)) == 0);
  CHECK(measure_beta1(testing::mnist_digit(0)) == 1);
  CHECK(measure_beta1(testing::mnist_digit(8)) == 2);
}

TEST_CASE("diagram agrees with the metric on MNIST {0,1,8}") {
  const auto digits = filter_classes(testing::mnist_corpus(), {0, 1, 8});
  int exact = 0, consistent = 0;
  for (const auto& li : digits) {
    const Diagram d = compute_diagram(invert(li.image));
    if (d.betti_at(1, kDefaultBinThreshold) == measure_beta1(li.image, kDefaultBinThreshold, 1))
      ++exact;
    int alive = 0;
    for (const auto& p : h1_features(d, 0.05))
      if (p.alive_at(kDefaultBinThreshold)) ++alive;
    if (alive == measure_beta1(li.image)) ++consistent;
  }
  const double n = static_cast<double>(digits.size());
  CHECK(exact == static_cast<int>(digits.size()));
  CHECK(consistent / n >= 0.95);
}

TEST_CASE("match_rate") {
  const std::vector<EvalRecord> all{EvalRecord::make(1, 1), EvalRecord::make(2, 2)};
  CHECK(match_rate(all) == 1.0);
  const std::vector<EvalRecord> none{EvalRecord::make(1, 0), EvalRecord::make(2, 1)};
  CHECK(match_rate(none) == 0.0);
  const std::vector<EvalRecord> three{EvalRecord::make(0, 0), EvalRecord::make(1, 1),
                                      EvalRecord::make(2, 2), EvalRecord::make(2, 1)};
  CHECK(match_rate(three) == 0.75);
  CHECK_THROWS_AS(match_rate(std::vector<EvalRecord>{}), DomainError);
  CHECK_FALSE(EvalRecord::make(2, 1).matched);
}
