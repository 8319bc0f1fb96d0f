#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "sndflow/transport.hpp"

using namespace sndflow;

namespace {

ParticleCloud random_cloud(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> g(0.0, 1.0);
  ParticleCloud c(n, d);
  for (double& v : c.coords()) v = g(rng);
  return c;
}

double brute_force(const ParticleCloud& a, const ParticleCloud& b) {
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) cost += squared_distance(a.point(i), b.point(perm[i]));
    best = std::min(best, cost);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::sqrt(best / static_cast<double>(a.size()));
}

}  // namespace

TEST_CASE("simple cases") {
  std::mt19937_64 rng(1);
  const ParticleCloud a = random_cloud(rng, 9, 2);
  CHECK(w2_exact(a, a) == 0.0);
  const ParticleCloud two(1, {0.0, 1.0}), shifted(1, {0.7, 1.7});
  CHECK(w2_exact(two, shifted) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(w2_1d(ParticleCloud(1, {0.0, 1.0}), ParticleCloud(1, {1.0, 2.0})) == 1.0);
  CHECK(w2_1d(ParticleCloud(1, {3.0, 1.0}), ParticleCloud(1, {1.0, 3.0})) == 0.0);
}

TEST_CASE("assignment against brute force") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 7;
    const ParticleCloud a = random_cloud(rng, n, 3), b = random_cloud(rng, n, 3);
    CHECK(std::abs(w2_exact(a, b) - brute_force(a, b)) <= 1e-10);
  }
}

TEST_CASE("assignment is a permutation") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  const int n = 40;
  std::vector<double> cost(n * n);
  for (double& c : cost) c = u(rng);
  auto cols = solve_assignment(cost, n);
  std::sort(cols.begin(), cols.end());
  for (int i = 0; i < n; ++i) CHECK(cols[i] == i);
}

TEST_CASE("sorted 1D oracle") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + t % 40;
    const ParticleCloud a = random_cloud(rng, n, 1), b = random_cloud(rng, n, 1);
    CHECK(std::abs(w2_exact(a, b) - w2_1d(a, b)) <= 1e-10);
  }
  CHECK_THROWS_AS(w2_1d(ParticleCloud(1, std::vector<double>{0.0}), ParticleCloud(1, {0.0, 1.0})), std::invalid_argument);
  CHECK_THROWS_AS(w2_1d(ParticleCloud(2, {0.0, 1.0}), ParticleCloud(2, {0.0, 1.0})), std::invalid_argument);
}

TEST_CASE("unequal sizes") {
  // Two points against the same two points duplicated: W2 = 0.
  const ParticleCloud a(1, {0.0, 1.0}), b(1, {0.0, 0.0, 1.0, 1.0});
  CHECK(w2_exact(a, b) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  // One Dirac against a cloud: mean squared distance.
  const ParticleCloud dirac(1, std::vector<double>{0.5}), three(1, {0.0, 1.0, 2.0});
  CHECK(w2_exact(dirac, three) == doctest::Approx(std::sqrt((0.25 + 0.25 + 2.25) / 3)).epsilon(1e-14));
  // In 1D the quantile coupling is optimal for any sizes.
  std::mt19937_64 rng(5);
  for (int t = 0; t < 20; ++t) {
    ParticleCloud x = random_cloud(rng, 3, 1), y = random_cloud(rng, 2, 1);
    std::sort(x.coords().begin(), x.coords().end());
    std::sort(y.coords().begin(), y.coords().end());
    // quantile functions on the grid of sixths
    double cost = 0.0;
    for (int k = 0; k < 6; ++k) {
      const double diff = x.coords()[k / 2] - y.coords()[k / 3];
      cost += diff * diff / 6.0;
    }
    CHECK(w2_exact(x, y) == doctest::Approx(std::sqrt(cost)).epsilon(1e-12));
  }
}

TEST_CASE("metric axioms and permutation invariance") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const ParticleCloud a = random_cloud(rng, 12, 2), b = random_cloud(rng, 12, 2), c = random_cloud(rng, 12, 2);
    const double ab = w2_exact(a, b), bc = w2_exact(b, c), ac = w2_exact(a, c);
    CHECK(ab == doctest::Approx(w2_exact(b, a)).epsilon(1e-14));
    CHECK(ac <= ab + bc + 1e-10);
    ParticleCloud rev(12, 2);
    for (std::size_t i = 0; i < 12; ++i)
      for (std::size_t k = 0; k < 2; ++k) rev(i, k) = a(11 - i, k);
    CHECK(w2_exact(rev, b) == doctest::Approx(ab).epsilon(1e-13));
  }
}

TEST_CASE("overflowing costs give infinity") {
  const ParticleCloud a(2, {1e297, 0.0, 0.0, 1e297}), b(2, {0.0, 0.0, 0.0, 1e-3});
  CHECK(std::isinf(w2_exact(a, b)));
  CHECK(std::isinf(w2_exact(a, ParticleCloud(2, {0.0, 0.0, 1.0, 1.0, 2.0, 2.0}))));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(w2_exact(ParticleCloud(0, 2), ParticleCloud(2, {0.0, 0.0})), std::invalid_argument);
  CHECK_THROWS_AS(w2_exact(ParticleCloud(1, std::vector<double>{0.0}), ParticleCloud(2, {0.0, 0.0})), std::invalid_argument);
}
