#include <stdexcept>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sndflow/special.hpp"
#include "sndflow/splines.hpp"

using namespace sndflow;

TEST_CASE("bspline values") {
  CHECK(bspline_eval({2, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(bspline_eval({4, 1.0}, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(bspline_eval({2, 0.5}, 0.3) == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(bspline_eval({2, 1.0}, 1.5) == 0.0);
  CHECK(bspline_eval({1, 0.5}, 0.2) == 2.0);
  CHECK(bspline_eval({1, 0.5}, 0.3) == 0.0);
}

TEST_CASE("bspline scaled value matches a direct convolution") {
  // M_2 = indicator * indicator; M_{2,eps}(x) = (1/eps^2) |[-eps/2, eps/2] n [x - eps/2, x + eps/2]|
  const double eps = 0.5;
  for (double x : {-0.4, -0.1, 0.0, 0.3, 0.49}) {
    const double overlap = std::max(0.0, eps - std::abs(x));
    CHECK(bspline_eval({2, eps}, x) == doctest::Approx(overlap / (eps * eps)).epsilon(1e-14));
  }
  // M_3 = M_2 * M_1 by quadrature
  for (double x : {0.0, 0.4, 1.1}) {
    const double q = integrate([&](double y) { return bspline_eval({2, 1.0}, x - y); }, -0.5, 0.5, 1e-14, 1e-13,
                               std::vector<double>{x - 1.0, x, x + 1.0});
    CHECK(bspline_eval({3, 1.0}, x) == doctest::Approx(q).epsilon(1e-12));
  }
}

TEST_CASE("bspline support, symmetry and unit mass") {
  for (int m = 1; m <= 8; ++m) {
    const SplineProfile p(m, 0.7);
    std::vector<double> knots;
    for (int k = 0; k <= m; ++k) knots.push_back(-p.half_support() + k * p.eps);
    const double mass = integrate([&](double x) { return bspline_eval(p, x); }, -p.half_support(),
                                  p.half_support(), 1e-14, 1e-13, knots);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(bspline_eval(p, p.half_support() + 1e-9) == 0.0);
    for (double x : {0.013, 0.2, 0.77, 1.9}) {
      CHECK(bspline_eval(p, x) == bspline_eval(p, -x));
      CHECK(bspline_eval(p, x) >= 0.0);
    }
  }
}

TEST_CASE("centre value") {
  CHECK(bspline_center_value(2) == 1.0);
  CHECK(bspline_center_value(4) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (int m = 2; m <= 20; ++m) CHECK(std::abs(bspline_center_value(m) - bspline_eval({m, 1.0}, 0.0)) <= 1e-12);
  const double ratio = bspline_center_value(64) / std::sqrt(6.0 / (std::acos(-1.0) * 64));
  CHECK(std::abs(ratio - 1.0) < 0.01);
  CHECK_THROWS_AS(bspline_center_value(1), std::invalid_argument);
}

TEST_CASE("smoothed abs closed values") {
  CHECK(smoothed_abs({2, 1.0}, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(smoothed_abs({4, 1.0}, 0.0) == doctest::Approx(7.0 / 15.0).epsilon(1e-15));
  CHECK(smoothed_abs({2, 1.0}, 2.0) == 2.0);
  CHECK(smoothed_abs_d1({2, 1.0}, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(smoothed_abs_d1({2, 1.0}, 0.0) == 0.0);
  CHECK(smoothed_abs_d2({2, 1.0}, 0.0) == doctest::Approx(2.0).epsilon(1e-15));
  // d1 is not divided by eps
  CHECK(smoothed_abs_d1({2, 0.1}, 0.05) == doctest::Approx(smoothed_abs_d1({2, 1.0}, 0.5)).epsilon(1e-14));
  CHECK(smoothed_abs_d2({2, 0.1}, 0.0) == doctest::Approx(20.0).epsilon(1e-14));
}

TEST_CASE("smoothed abs approaches abs uniformly") {
  for (double eps : {1.0, 0.1, 0.01, 0.001})
    for (double x : {-3.0, -0.4, 0.0, 0.002, 0.7}) CHECK(std::abs(smoothed_abs({2, eps}, x) - std::abs(x)) <= eps);
}

TEST_CASE("smoothed abs equals abs outside the support") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int m : {2, 4, 6, 8}) {
    const SplineProfile p(m, 0.3);
    for (int t = 0; t < 50; ++t) {
      const double x = p.half_support() + u(rng);
      CHECK(smoothed_abs(p, x) == x);
      CHECK(smoothed_abs(p, -x) == x);
      CHECK(smoothed_abs_d1(p, x) == 1.0);
      CHECK(smoothed_abs_d1(p, -x) == -1.0);
    }
  }
}

TEST_CASE("smoothed abs matches numeric convolution") {
  for (int m : {2, 4})
    for (double eps : {0.1, 1.0}) {
      const SplineProfile p(m, eps);
      for (double x = -5.0; x <= 5.0; x += 0.37) {
        std::vector<double> knots{x};
        for (int k = 0; k <= m; ++k) knots.push_back(-p.half_support() + k * eps);
        const double q = integrate([&](double y) { return std::abs(x - y) * bspline_eval(p, y); }, -p.half_support(),
                                   p.half_support(), 1e-15, 1e-14, knots);
        CHECK(std::abs(smoothed_abs(p, x) - q) <= 1e-9);
      }
    }
}

TEST_CASE("derivatives against finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int m : {2, 4, 6}) {
    const SplineProfile p(m, 0.8);
    for (int t = 0; t < 100; ++t) {
      const double x = u(rng), h = 1e-5;
      const double d1 = (smoothed_abs(p, x + h) - smoothed_abs(p, x - h)) / (2 * h);
      const double d2 = (smoothed_abs_d1(p, x + h) - smoothed_abs_d1(p, x - h)) / (2 * h);
      CHECK(std::abs(d1 - smoothed_abs_d1(p, x)) <= 1e-6 * std::max(1e-2, std::abs(d1)));
      CHECK(std::abs(d2 - smoothed_abs_d2(p, x)) <= 1e-5 * std::max(1.0, std::abs(d2)));
    }
  }
}

TEST_CASE("positivity, evenness and convexity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const SplineProfile p(4, 0.5);
  for (int t = 0; t < 300; ++t) {
    const double a = u(rng), b = u(rng), c = u(rng);
    CHECK(smoothed_abs(p, a) > 0.0);
    CHECK(smoothed_abs(p, -a) == smoothed_abs(p, a));
    CHECK(smoothed_abs_d2(p, a) >= 0.0);
    CHECK(smoothed_abs(p, 0.5 * (b + c)) <= 0.5 * (smoothed_abs(p, b) + smoothed_abs(p, c)) + 1e-15);
  }
}

TEST_CASE("large order stays accurate") {
  const SplineProfile p(16, 1.0);
  const double mass = integrate([&](double x) { return bspline_eval(p, x); }, -8.0, 8.0, 1e-14, 1e-13,
                                std::vector<double>{-7, -6, -5, -4, -3, -2, -1, 0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-11));
  CHECK(smoothed_abs(p, 7.999) >= 7.999);
}

TEST_CASE("huber") {
  CHECK(huber(0.5, 1.0) == 0.125);
  CHECK(huber(-3.0, 1.0) == 2.5);
  CHECK(huber(1.0, 1.0) == 0.5);
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(SplineProfile(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(SplineProfile(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SplineProfile(2, -1.0), std::invalid_argument);
}
