#pragma once

#include "sndflow/cloud.hpp"
#include "sndflow/kernels.hpp"

namespace sndflow {

/// Squared MMD between two uniform empirical measures,
///   1/N^2 sum K(x,x') - 2/(NM) sum K(x,y) + 1/M^2 sum K(y,y'),
/// diagonal terms included. Rows are split over OpenMP threads in fixed
/// blocks and the partial sums are reduced in block order, so the result does
/// not depend on the thread count.
double mmd_squared(const Kernel& k, const ParticleCloud& mu, const ParticleCloud& nu);

/// Straight serial triple sum; reference for mmd_squared.
double mmd_squared_reference(const Kernel& k, const ParticleCloud& mu, const ParticleCloud& nu);

/// G(mu) = mmd_squared(mu, nu) / 2.
double flow_objective(const Kernel& k, const ParticleCloud& mu, const ParticleCloud& nu);

}  // namespace sndflow
