#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pcstruct/image.hpp"
#include "pcstruct/metrics.hpp"

using namespace pcstruct;

namespace {

GrayImage random_image(int w, int h, unsigned seed, double maxval = 255.0) {
  GrayImage img(w, h, maxval);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, maxval);
  for (double& v : img.data) v = dist(rng);
  return img;
}

DepthMap constant_map(int w, int h, double v) {
  return DepthMap(w, h, DepthEncoding::metric_mm, v);
}

// Direct-loop SSIM over valid 11x11 windows, written from the defining
// formula without reusing the library's accumulation structure.
double oracle_ssim(const GrayImage& a, const GrayImage& b) {
  const int r = 5;
  const double sigma = 1.5;
  const double L = a.max_value;
  const double c1 = 0.01 * L * 0.01 * L;
  const double c2 = 0.03 * L * 0.03 * L;
  double total = 0.0;
  int count = 0;
  for (int cy = r; cy < a.height - r; ++cy)
    for (int cx = r; cx < a.width - r; ++cx) {
      double wsum = 0.0, ma = 0.0, mb = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double w = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
          wsum += w;
          ma += w * a.at(cx + dx, cy + dy);
          mb += w * b.at(cx + dx, cy + dy);
        }
      ma /= wsum;
      mb /= wsum;
      double va = 0.0, vb = 0.0, cov = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const double w = std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma)) / wsum;
          va += w * (a.at(cx + dx, cy + dy) - ma) * (a.at(cx + dx, cy + dy) - ma);
          vb += w * (b.at(cx + dx, cy + dy) - mb) * (b.at(cx + dx, cy + dy) - mb);
          cov += w * (a.at(cx + dx, cy + dy) - ma) * (b.at(cx + dx, cy + dy) - mb);
        }
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) /
               ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++count;
    }
  return total / count;
}

}  // namespace

TEST_CASE("depth_metrics") {
  SUBCASE("identical maps") {
    const DepthMap d = constant_map(8, 8, 5.0);
    const DepthMetrics m = depth_metrics(d, d);
    CHECK(m.rmse == 0.0);
    CHECK(m.mae == 0.0);
    CHECK(m.sq_rel == 0.0);
    CHECK(m.n_valid == 64);
  }
  SUBCASE("constant 2mm offset") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> dist(1.0, 50.0);
    DepthMap gt(8, 8, DepthEncoding::metric_mm);
    for (double& v : gt.data) v = dist(rng);
    DepthMap pred = gt;
    for (double& v : pred.data) v += 2.0;
    const DepthMetrics m = depth_metrics(pred, gt);
    CHECK(m.rmse == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(m.mae == doctest::Approx(2.0).epsilon(1e-12));
    double mean_inv = 0.0;
    for (double v : gt.data) mean_inv += 4.0 / v;
    CHECK(m.sq_rel == doctest::Approx(mean_inv / 64.0).epsilon(1e-12));
  }
  SUBCASE("pred = 2*gt with gt = 5mm") {
    const DepthMap gt = constant_map(4, 4, 5.0);
    const DepthMap pred = constant_map(4, 4, 10.0);
    const DepthMetrics m = depth_metrics(pred, gt);
    CHECK(m.rmse == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(m.mae == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(m.sq_rel == doctest::Approx(5.0).epsilon(1e-12));
  }
  SUBCASE("rmse >= mae on random pairs") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> dist(0.5, 80.0);
    for (int trial = 0; trial < 25; ++trial) {
      DepthMap gt(6, 6, DepthEncoding::metric_mm), pred(6, 6, DepthEncoding::metric_mm);
      for (double& v : gt.data) v = dist(rng);
      for (double& v : pred.data) v = dist(rng);
      const DepthMetrics m = depth_metrics(pred, gt);
      CHECK(m.rmse >= m.mae);
    }
  }
  SUBCASE("pixel permutation invariance") {
    DepthMap gt(4, 4, DepthEncoding::metric_mm), pred(4, 4, DepthEncoding::metric_mm);
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dist(1.0, 10.0);
    for (double& v : gt.data) v = dist(rng);
    for (double& v : pred.data) v = dist(rng);
    DepthMap gt2 = gt, pred2 = pred;
    std::vector<std::size_t> perm(16);
    for (std::size_t i = 0; i < 16; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < 16; ++i) {
      gt2.data[i] = gt.data[perm[i]];
      pred2.data[i] = pred.data[perm[i]];
    }
    const DepthMetrics m1 = depth_metrics(pred, gt);
    const DepthMetrics m2 = depth_metrics(pred2, gt2);
    CHECK(m1.rmse == doctest::Approx(m2.rmse).epsilon(1e-12));
    CHECK(m1.mae == doctest::Approx(m2.mae).epsilon(1e-12));
    CHECK(m1.sq_rel == doctest::Approx(m2.sq_rel).epsilon(1e-12));
  }
  SUBCASE("error paths") {
    const DepthMap d = constant_map(4, 4, 5.0);
    CHECK_THROWS_AS(depth_metrics(d, d, std::vector<bool>(16, false)),
                    std::invalid_argument);
    const DepthMap zero = constant_map(4, 4, 0.0);
    CHECK_THROWS_AS(depth_metrics(d, zero), std::domain_error);
    const DepthMap small = constant_map(3, 4, 5.0);
    CHECK_THROWS_AS(depth_metrics(d, small), std::invalid_argument);
  }
}

TEST_CASE("psnr") {
  SUBCASE("identical images are +inf") {
    const GrayImage a = random_image(8, 8, 1);
    CHECK(std::isinf(psnr(a, a)));
  }
  SUBCASE("MSE of 1 on 8-bit scale") {
    GrayImage a(8, 8, 255.0, 100.0);
    GrayImage b(8, 8, 255.0, 101.0);
    CHECK(psnr(a, b) == doctest::Approx(20.0 * std::log10(255.0)).epsilon(1e-12));
  }
  SUBCASE("worst case is 0 dB") {
    GrayImage a(8, 8, 255.0, 0.0);
    GrayImage b(8, 8, 255.0, 255.0);
    CHECK(psnr(a, b) == doctest::Approx(0.0));
  }
  SUBCASE("symmetric") {
    const GrayImage a = random_image(8, 8, 2);
    const GrayImage b = random_image(8, 8, 3);
    CHECK(psnr(a, b) == psnr(b, a));
  }
  SUBCASE("monotone under growing uniform noise") {
    const GrayImage a = random_image(16, 16, 4);
    double prev = std::numeric_limits<double>::infinity();
    for (const double amp : {1.0, 4.0, 16.0}) {
      GrayImage b = a;
      std::mt19937 rng(5);
      std::uniform_real_distribution<double> dist(-amp, amp);
      for (double& v : b.data) v = std::clamp(v + dist(rng), 0.0, 255.0);
      const double p = psnr(a, b);
      CHECK(p < prev);
      prev = p;
    }
  }
}

TEST_CASE("ssim") {
  SUBCASE("self similarity is 1") {
    const GrayImage a = random_image(16, 16, 7);
    CHECK(ssim(a, a) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("anticorrelated image scores negative") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> dist(100.0, 155.0);
    GrayImage a(16, 16, 255.0);
    for (double& v : a.data) v = dist(rng);
    GrayImage b = a;
    for (double& v : b.data) v = 255.0 - v;
    CHECK(ssim(a, b) < 0.0);
  }
  SUBCASE("matches the direct-loop oracle") {
    for (unsigned seed = 0; seed < 4; ++seed) {
      const GrayImage a = random_image(32, 32, 100 + seed);
      const GrayImage b = random_image(32, 32, 200 + seed);
      CHECK(ssim(a, b) == doctest::Approx(oracle_ssim(a, b)).epsilon(1e-9));
    }
  }
  SUBCASE("symmetric") {
    const GrayImage a = random_image(16, 16, 9);
    const GrayImage b = random_image(16, 16, 10);
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-14));
  }
  SUBCASE("undersized image rejected") {
    const GrayImage a = random_image(10, 16, 11);
    CHECK_THROWS_AS(ssim(a, a), std::invalid_argument);
  }
}

TEST_CASE("scale_alignment") {
  DepthMap gt(4, 4, DepthEncoding::metric_mm);
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> dist(1.0, 10.0);
  for (double& v : gt.data) v = dist(rng);
  DepthMap pred = gt;
  for (double& v : pred.data) v *= 0.25;
  const double s = scale_alignment(pred, gt, std::vector<bool>(16, true));
  CHECK(s == doctest::Approx(4.0).epsilon(1e-12));
}
