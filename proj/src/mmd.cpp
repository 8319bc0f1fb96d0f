#include "sndflow/mmd.hpp"

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace sndflow {

namespace {

constexpr std::size_t kBlock = 16;

// Mean of K over all pairs (a_i, b_j), accumulated per row block.
double mean_pairwise(const Kernel& k, const ParticleCloud& a, const ParticleCloud& b) {
  const std::size_t blocks = (a.size() + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
    double acc = 0.0;
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(a.size(), lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i)
      for (std::size_t j = 0; j < b.size(); ++j) acc += k(a.point(i), b.point(j));
    partial[static_cast<std::size_t>(blk)] = acc;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

void check(const ParticleCloud& mu, const ParticleCloud& nu) {
  if (mu.dim() != nu.dim()) throw std::invalid_argument("mmd: dimension mismatch");
  if (mu.empty() || nu.empty()) throw std::invalid_argument("mmd: empty cloud");
}

}  // namespace

double mmd_squared(const Kernel& k, const ParticleCloud& mu, const ParticleCloud& nu) {
  check(mu, nu);
  // Canonical orientation of the cross term keeps the result exactly
  // symmetric in (mu, nu).
  const bool swap = std::make_pair(nu.size(), std::cref(nu.coords())) <
                    std::make_pair(mu.size(), std::cref(mu.coords()));
  const double cross = swap ? mean_pairwise(k, nu, mu) : mean_pairwise(k, mu, nu);
  return (mean_pairwise(k, mu, mu) + mean_pairwise(k, nu, nu)) - 2.0 * cross;
}

double mmd_squared_reference(const Kernel& k, const ParticleCloud& mu, const ParticleCloud& nu) {
  check(mu, nu);
  const double n = static_cast<double>(mu.size());
  const double m = static_cast<double>(nu.size());
  double xx = 0.0, xy = 0.0, yy = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < mu.size(); ++j) xx += k(mu.point(i), mu.point(j));
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) xy += k(mu.point(i), nu.point(j));
  for (std::size_t i = 0; i < nu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) yy += k(nu.point(i), nu.point(j));
  return xx / (n * n) - 2.0 * xy / (n * m) + yy / (m * m);
}

double flow_objective(const Kernel& k, const ParticleCloud& mu, const ParticleCloud& nu) {
  return 0.5 * mmd_squared(k, mu, nu);
}

}  // namespace sndflow
