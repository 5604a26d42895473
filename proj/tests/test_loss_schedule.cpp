#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>
#include <random>
#include <sstream>

#include "pcstruct/config_io.hpp"
#include "pcstruct/loss_schedule.hpp"

using namespace pcstruct;

TEST_CASE("default_weights") {
  const LossWeights w = default_weights();
  CHECK(w.alpha == 0.5);
  CHECK(w.beta == 10.0);
  CHECK(w.gamma == 5.0);
  CHECK(w.lambda == 2.4);
  CHECK(w.pc_start_epoch == 160);
}

TEST_CASE("total_loss") {
  const LossWeights w = default_weights();

  SUBCASE("all-zero components") {
    CHECK(total_loss({}, w, 0) == 0.0);
    CHECK(total_loss({}, w, 500) == 0.0);
  }
  SUBCASE("unit components at default weights") {
    LossComponents c{1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
    CHECK(total_loss(c, w, 200) == doctest::Approx(33.9).epsilon(1e-12));
    CHECK(total_loss(c, w, 160) == doctest::Approx(33.9).epsilon(1e-12));
    CHECK(total_loss(c, w, 100) == doctest::Approx(28.9).epsilon(1e-12));
    CHECK(total_loss(c, w, 159) == doctest::Approx(28.9).epsilon(1e-12));
  }
  SUBCASE("pc term is gated off below the start epoch") {
    LossComponents a, b;
    a.pc = 0.0;
    b.pc = 123.0;
    CHECK(total_loss(a, w, 10) == total_loss(b, w, 10));
  }
  SUBCASE("all-zero weights leave only the unweighted dir term") {
    LossWeights zero{0.0, 0.0, 0.0, 0.0, 0};
    LossComponents c;
    c.dir = 0.7;
    c.gan = c.cyc = c.excyc = c.iden_d = c.pc = c.normal = 9.0;
    CHECK(total_loss(c, zero, 0) == 0.7);
  }
  SUBCASE("linearity in each component") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      LossComponents c{dist(rng), dist(rng), dist(rng), dist(rng),
                       dist(rng), dist(rng), dist(rng)};
      const int epoch = trial % 2 == 0 ? 200 : 10;
      const double base = total_loss(c, w, epoch);
      LossComponents scaled = c;
      scaled.cyc *= 3.0;
      CHECK(total_loss(scaled, w, epoch) - base ==
            doctest::Approx(w.beta * 2.0 * c.cyc).epsilon(1e-10));
      LossComponents shifted = c;
      shifted.normal += 1.0;
      CHECK(total_loss(shifted, w, epoch) - base ==
            doctest::Approx(w.lambda).epsilon(1e-10));
    }
  }
  SUBCASE("non-finite component rejected") {
    LossComponents c;
    c.gan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(total_loss(c, w, 0), std::invalid_argument);
  }
  SUBCASE("negative weights rejected") {
    LossWeights bad = w;
    bad.gamma = -1.0;
    CHECK_THROWS_AS(total_loss({}, bad, 0), std::invalid_argument);
  }
}

TEST_CASE("weights key=value round-trip") {
  LossWeights w{0.25, 7.0, 3.5, 1.1, 42};
  std::stringstream buf;
  write_loss_weights(buf, w);
  const LossWeights back = loss_weights_from(parse_key_values(buf));
  CHECK(back.alpha == w.alpha);
  CHECK(back.beta == w.beta);
  CHECK(back.gamma == w.gamma);
  CHECK(back.lambda == w.lambda);
  CHECK(back.pc_start_epoch == w.pc_start_epoch);
}
