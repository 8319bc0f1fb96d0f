#pragma once

#include <vector>

#include "sndflow/cloud.hpp"

namespace sndflow {

/// Optimal assignment for a square cost matrix (row-major, n x n) by the
/// shortest augmenting path method with dual potentials, O(n^3). Returns
/// the column assigned to each row.
std::vector<int> solve_assignment(const std::vector<double>& cost, int n);

/// Exact W2 between uniform empirical measures. Equal sizes go through the
/// assignment solver; unequal sizes through successive shortest paths on the
/// transportation problem with integer supplies lcm(N,M)/N and demands
/// lcm(N,M)/M. Costs are always evaluated in double; returns +inf when a
/// squared distance overflows or a coordinate is not finite.
double w2_exact(const ParticleCloud& mu, const ParticleCloud& nu);

/// W2 on the line by sorting; requires d = 1 and N = M.
double w2_1d(const ParticleCloud& mu, const ParticleCloud& nu);

}  // namespace sndflow
