#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pcstruct/edge_operators.hpp"
#include "pcstruct/image.hpp"

using namespace pcstruct;

namespace {

GrayImage vertical_step(int w, int h, int column, double lo, double hi) {
  GrayImage img(w, h, 255.0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) img.at(x, y) = x < column ? lo : hi;
  return img;
}

constexpr EdgeOperator kAllOps[] = {EdgeOperator::roberts, EdgeOperator::prewitt,
                                    EdgeOperator::sobel, EdgeOperator::canny,
                                    EdgeOperator::laplacian};

}  // namespace

TEST_CASE("constant image yields zero maps for every operator") {
  GrayImage img(32, 32, 255.0, 128.0);
  for (EdgeOperator op : kAllOps) {
    const EdgeMap e = edge_detect(img, op);
    for (double v : e.values) CHECK(v == 0.0);
  }
}

TEST_CASE("sobel unit step magnitude") {
  const GrayImage img = vertical_step(16, 16, 8, 0.0, 1.0);
  const EdgeMap e = edge_detect(img, EdgeOperator::sobel);
  for (int y = 1; y < 15; ++y) {
    CHECK(e.values[static_cast<std::size_t>(y) * 16 + 7] == doctest::Approx(4.0));
    CHECK(e.values[static_cast<std::size_t>(y) * 16 + 8] == doctest::Approx(4.0));
    CHECK(e.values[static_cast<std::size_t>(y) * 16 + 4] == 0.0);
    CHECK(e.values[static_cast<std::size_t>(y) * 16 + 11] == 0.0);
  }
}

TEST_CASE("gradient operators scale with contrast") {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> dist(0.0, 255.0);
  GrayImage img(16, 16, 255.0);
  for (double& v : img.data) v = dist(rng);
  GrayImage doubled = img;
  for (double& v : doubled.data) v *= 2.0;
  for (EdgeOperator op :
       {EdgeOperator::roberts, EdgeOperator::prewitt, EdgeOperator::sobel}) {
    const EdgeMap e1 = edge_detect(img, op);
    const EdgeMap e2 = edge_detect(doubled, op);
    for (std::size_t i = 0; i < e1.values.size(); ++i)
      CHECK(e2.values[i] == doctest::Approx(2.0 * e1.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("laplacian is the absolute 4-neighbor response") {
  GrayImage img(5, 5, 255.0);
  img.at(2, 2) = 10.0;
  const EdgeMap e = edge_detect(img, EdgeOperator::laplacian);
  CHECK(e.values[2 * 5 + 2] == 40.0);
  CHECK(e.values[2 * 5 + 1] == 10.0);
  CHECK(e.values[0] == 0.0);
}

TEST_CASE("canny") {
  SUBCASE("threshold ordering enforced") {
    GrayImage img(16, 16, 255.0);
    EdgeParams bad;
    bad.canny_low = 0.5;
    bad.canny_high = 0.2;
    CHECK_THROWS_AS(edge_detect(img, EdgeOperator::canny, bad), std::invalid_argument);
  }
  SUBCASE("unit step produces one single-pixel-wide line") {
    const GrayImage img = vertical_step(32, 32, 16, 0.0, 255.0);
    EdgeParams p;
    p.canny_sigma = 1.0;
    p.canny_low = 0.1;
    p.canny_high = 0.3;
    const EdgeMap e = edge_detect(img, EdgeOperator::canny, p);
    CHECK(e.binary);
    for (int y = 2; y < 30; ++y) {
      int on_columns = 0;
      for (int x = 0; x < 32; ++x) {
        const double v = e.values[static_cast<std::size_t>(y) * 32 + x];
        CHECK((v == 0.0 || v == 1.0));
        if (v == 1.0) {
          ++on_columns;
          CHECK(std::abs(x - 16) <= 1);
        }
      }
      CHECK(on_columns == 1);
    }
  }
  SUBCASE("output is thinned across the gradient direction") {
    const GrayImage img = vertical_step(32, 32, 12, 20.0, 220.0);
    const EdgeMap e = edge_detect(img, EdgeOperator::canny, {});
    for (int y = 0; y < 32; ++y)
      for (int x = 1; x < 31; ++x) {
        const std::size_t i = static_cast<std::size_t>(y) * 32 + x;
        if (e.values[i] == 1.0)
          CHECK(e.values[i - 1] + e.values[i + 1] < 2.0);
      }
  }
}
