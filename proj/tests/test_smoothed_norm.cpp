#include <stdexcept>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sndflow/smoothed_norm.hpp"
#include "sndflow/special.hpp"
#include "sndflow/splines.hpp"

using namespace sndflow;

namespace {

std::vector<double> spline_knots(int m, double eps) {
  std::vector<double> k;
  for (int j = 0; 2 * j < m; ++j) k.push_back((0.5 * m - j) * eps);
  return k;
}

double quad_profile(int m, double eps, int d, double s) {
  const SplineProfile p(m, eps);
  const auto knots = spline_knots(m, eps);
  return riemann_liouville_quadrature([&](double x) { return smoothed_abs(p, x); }, d, s, knots);
}

}  // namespace

TEST_CASE("incomplete beta against boost") {
  for (double a : {0.5, 1.0, 2.5, 7.0})
    for (double b : {0.5, 1.5, 4.0, 391.5})
      for (double x : {0.0, 1e-6, 0.1, 0.5, 0.93, 1.0}) {
        const double ref = boost::math::beta(a, b, x);
        CHECK(incomplete_beta(x, a, b) == doctest::Approx(ref).epsilon(1e-12).scale(1e-300));
      }
  CHECK(incomplete_beta(1.0, 2.0, 3.0) == doctest::Approx(beta(2.0, 3.0)).epsilon(1e-14));
  double prev = -1.0;
  for (double x = 0.0; x <= 1.0; x += 0.05) {
    const double v = incomplete_beta(x, 1.5, 2.5);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK_THROWS_AS(incomplete_beta(1.2, 1.0, 1.0), std::domain_error);
}

TEST_CASE("C_d") {
  CHECK(std::abs(cd_constant(3) - 0.5) <= 1e-14);
  CHECK(cd_constant(2) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-14));
  const double c784 = cd_constant(784);
  CHECK(std::isfinite(c784));
  CHECK(std::abs(c784 / std::sqrt(2.0 / (std::numbers::pi * 784)) - 1.0) < 0.01);
  CHECK(cd_constant(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Riemann-Liouville quadrature basics") {
  const auto abs_f = [](double x) { return std::abs(x); };
  CHECK(riemann_liouville_quadrature(abs_f, 3, 2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(riemann_liouville_quadrature(abs_f, 2, std::numbers::pi) == doctest::Approx(2.0).epsilon(1e-12));
  for (int d : {2, 3, 4, 7, 50})
    for (double s : {0.0, 0.3, 12.0})
      CHECK(riemann_liouville_quadrature([](double) { return 1.0; }, d, s) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(riemann_liouville_quadrature(abs_f, 1, 1.0), std::invalid_argument);
}

TEST_CASE("abs^beta are eigenfunctions") {
  for (double beta_exp : {0.5, 1.0, 1.5})
    for (int d : {2, 3, 5})
      for (double s : {0.4, 1.0, 3.3}) {
        const double lam = std::exp(std::lgamma(0.5 * d) + std::lgamma(0.5 * (beta_exp + 1)) -
                                    std::lgamma(0.5 * (d + beta_exp))) /
                           std::sqrt(std::numbers::pi);
        const double q =
            riemann_liouville_quadrature([&](double x) { return std::pow(std::abs(x), beta_exp); }, d, s);
        CHECK(std::abs(q / (lam * std::pow(s, beta_exp)) - 1.0) <= 1e-8);
      }
}

TEST_CASE("closed profile values") {
  CHECK(snd_profile_closed(2, 1.0, 3, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(snd_profile_closed(2, 1.0, 3, 2.0) == doctest::Approx(25.0 / 24.0).epsilon(1e-15));
  CHECK(snd_profile_closed(4, 1.0, 3, 0.0) == doctest::Approx(7.0 / 15.0).epsilon(1e-15));
  for (double s : {5.0, 50.0, 5000.0})
    CHECK(snd_profile_closed(2, 1.0, 3, s) == doctest::Approx(s / 2 + 1 / (12 * s)).epsilon(1e-15));
  CHECK(snd_profile_d1(2, 1.0, 3, 0.5) == doctest::Approx(3.25 / 12).epsilon(1e-15));
  CHECK(snd_profile_d1(2, 1.0, 3, 0.0) == 0.0);
  CHECK(snd_profile_curvature0(2, 1.0, 3) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK_THROWS_AS(snd_profile_closed(3, 1.0, 3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(snd_profile_closed(2, 1.0, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(snd_profile_closed(2, 0.0, 3, 0.0), std::invalid_argument);
}

TEST_CASE("closed form against quadrature") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> us(0.0, 10.0);
  for (int m : {2, 4, 6})
    for (double eps : {0.1, 1.0})
      for (int d : {2, 3, 4, 5, 10})
        for (int t = 0; t < 10; ++t) {
          const double s = us(rng);
          const double q = quad_profile(m, eps, d, s);
          CHECK(std::abs(snd_profile_closed(m, eps, d, s) / q - 1.0) <= 1e-8);
        }
}

TEST_CASE("fast d = 3 paths agree with the Beta sum") {
  for (int m : {2, 4})
    for (double s = 0.0; s < 8.0; s += 0.173) {
      CHECK(snd_profile_closed(m, 1.0, 3, s) == doctest::Approx(snd_profile_beta_sum(m, 1.0, 3, s)).epsilon(1e-12));
      CHECK(snd_profile_d1(m, 1.0, 3, s) ==
            doctest::Approx(snd_profile_beta_sum_d1(m, 1.0, 3, s)).epsilon(1e-11).scale(1e-14));
    }
}

TEST_CASE("profile derivative against finite differences") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> us(0.01, 6.0);
  for (int d : {2, 3, 5}) {
    for (int t = 0; t < 100; ++t) {
      const double s = us(rng), h = 1e-5;
      const int m = t % 2 ? 2 : 4;
      const double fd = (snd_profile_closed(m, 1.0, d, s + h) - snd_profile_closed(m, 1.0, d, s - h)) / (2 * h);
      CHECK(std::abs(fd / snd_profile_d1(m, 1.0, d, s) - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("curvature at the origin") {
  for (int m : {2, 4, 6})
    for (int d : {2, 3, 5, 784}) {
      const double c0 = snd_profile_curvature0(m, 0.5, d);
      CHECK(c0 == doctest::Approx(2.0 * bspline_center_value(m) / (0.5 * d)).epsilon(1e-12));
      if (d <= 5) {
        // the m = 2 profile has a cubic term, so the ratio converges only linearly
        const double s = 1e-5;
        CHECK(snd_profile_d1(m, 0.5, d, s) / s == doctest::Approx(c0).epsilon(1e-4));
      }
    }
}

TEST_CASE("linear asymptotics") {
  const double c3 = cd_constant(3), c2 = cd_constant(2);
  for (double s = 10.0; s <= 1e4; s *= 1.7) {
    CHECK(std::abs(snd_profile_closed(2, 1.0, 3, s) - c3 * s) * s <= 1.0);
    CHECK(std::abs(snd_profile_closed(2, 1.0, 2, s) - c2 * s) * s <= 1.0);
  }
}

TEST_CASE("eps to zero limit") {
  double prev = 1e300;
  for (double eps : {1.0, 0.1, 0.01}) {
    double worst = 0.0;
    for (double s = 0.0; s <= 5.0; s += 0.01) worst = std::max(worst, std::abs(snd_profile_closed(2, eps, 3, s) - 0.5 * s));
    CHECK(worst < prev);
    CHECK(worst <= eps);
    prev = worst;
  }
}

TEST_CASE("slicing identity by Monte Carlo") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 1.0);
  const SplineProfile p(2, 0.7);
  for (int t = 0; t < 5; ++t) {
    double x[3] = {g(rng), g(rng), g(rng)};
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    double sum = 0.0, sq = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      double xi[3] = {g(rng), g(rng), g(rng)};
      const double len = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
      const double v = smoothed_abs(p, (x[0] * xi[0] + x[1] * xi[1] + x[2] * xi[2]) / len);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::abs(mean - snd_profile_closed(2, 0.7, 3, r)) <= 4 * se);
  }
}

TEST_CASE("Lipschitz gradient bound") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int d : {2, 3, 5}) {
    const RadialProfile prof = RadialProfile::snd(2, 0.3, d);
    const double lip = 2.0 * std::sqrt(static_cast<double>(d)) * bspline_center_value(2) / 0.3;
    double worst = 0.0;
    for (int t = 0; t < 500; ++t) {
      std::vector<double> x(d), y(d);
      for (double& c : x) c = 0.5 * g(rng);
      for (double& c : y) c = 0.5 * g(rng);
      double nx = 0, ny = 0, dist = 0;
      for (int k = 0; k < d; ++k) {
        nx += x[k] * x[k];
        ny += y[k] * y[k];
        dist += (x[k] - y[k]) * (x[k] - y[k]);
      }
      nx = std::sqrt(nx);
      ny = std::sqrt(ny);
      double diff = 0;
      for (int k = 0; k < d; ++k) {
        const double gx = prof.ratio(nx) * x[k], gy = prof.ratio(ny) * y[k];
        diff += (gx - gy) * (gx - gy);
      }
      worst = std::max(worst, std::sqrt(diff / dist));
    }
    CHECK(worst <= lip);
  }
}

TEST_CASE("radial profile kinds and ratio") {
  const RadialProfile s = RadialProfile::snd(2, 1.0, 3);
  CHECK(s.kernel_sign() == -1.0);
  CHECK(flow_ratio(s, 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(s.ratio(0.5) == doctest::Approx(snd_profile_d1(2, 1.0, 3, 0.5) / 0.5).epsilon(1e-14));
  CHECK(s.ratio(3.0) == doctest::Approx(snd_profile_d1(2, 1.0, 3, 3.0) / 3.0).epsilon(1e-14));
  CHECK(s.ratio(0.5f) == doctest::Approx(s.ratio(0.5)).epsilon(1e-6));

  const RadialProfile s4 = RadialProfile::snd(4, 0.2, 3);
  for (double r : {0.0, 0.05, 0.3, 0.5, 2.0})
    CHECK(s4.ratio(r) == doctest::Approx(r > 0 ? snd_profile_d1(4, 0.2, 3, r) / r : s4.curvature0()).epsilon(1e-12));

  const RadialProfile g5 = RadialProfile::snd(2, 0.5, 5);
  CHECK(g5.ratio(0.0) == g5.curvature0());
  CHECK(g5.ratio(1e-13) == g5.curvature0());
  CHECK(g5.ratio(0.7) == doctest::Approx(snd_profile_d1(2, 0.5, 5, 0.7) / 0.7).epsilon(1e-14));

  const RadialProfile nd = RadialProfile::nd();
  CHECK(flow_ratio(nd, 0.0) == 0.0);
  CHECK(flow_ratio(nd, 2.0) == 0.25);
  CHECK(nd.value(-3.0) == 1.5);

  const RadialProfile gauss = RadialProfile::gaussian(0.3);
  CHECK(gauss.kernel_sign() == 1.0);
  const double r = 0.4;
  CHECK(flow_ratio(gauss, r) == doctest::Approx(gauss.d1(r) / r).epsilon(1e-14));
  CHECK(gauss.d1(0.0) == 0.0);
  CHECK_THROWS_AS(flow_ratio(s, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::gaussian(0.0), std::invalid_argument);
  CHECK_THROWS_AS(RadialProfile::snd(3, 1.0, 3), std::invalid_argument);
}

TEST_CASE("profile convex and positive") {
  for (int d : {2, 3, 6}) {
    double prev_d1 = -1.0;
    for (double s = 0.0; s <= 4.0; s += 0.05) {
      CHECK(snd_profile_closed(2, 0.5, d, s) > 0.0);
      const double d1 = snd_profile_d1(2, 0.5, d, s);
      CHECK(d1 >= prev_d1 - 1e-14);
      prev_d1 = d1;
    }
  }
}

TEST_CASE("high dimension profile stays finite") {
  for (double s : {0.0, 0.01, 1.0, 30.0}) {
    const double v = snd_profile_closed(2, 0.1, 784, s);
    CHECK(std::isfinite(v));
    CHECK(v >= cd_constant(784) * s - 1e-12);
  }
}
