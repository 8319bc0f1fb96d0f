#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sndflow/cloud.hpp"

namespace sndflow {

/// n equi-angular points on each unit circle centred at (-2.5,0), (0,0), (2.5,0).
ParticleCloud gen_three_rings(int n_per_circle = 40);

/// n equi-angular points on each of the circles of radius 1 and 0.3 about the origin.
ParticleCloud gen_annulus(int n_per_circle = 50);

/// Two mirrored parabolic arcs: banana k in {-1, +1} holds the points
/// (k (s^2 - 1) - k + e1, s + e2) for s equispaced in [-1, 1], e ~ N(0, 0.05^2).
/// The offset -k keeps the arcs 2 apart, tips facing each other.
ParticleCloud gen_bananas(int n_per_cluster, std::uint64_t seed);

/// n samples of N(mean, std^2 I) in R^d; an empty mean means the origin.
ParticleCloud gen_init_gaussian(int n, int d, double std, std::uint64_t seed, std::vector<double> mean = {});

/// n samples of the uniform distribution on [0,1]^d.
ParticleCloud gen_init_uniform(int n, int d, std::uint64_t seed);

/// n points from `modes` isotropic Gaussians (std 0.05) whose means are
/// uniform on [0,1]^d; points are dealt to the modes round-robin.
ParticleCloud gen_gauss_mixture(int n, int d, int modes, std::uint64_t seed);

/// Headerless CSV, one point per row. Throws std::runtime_error naming the
/// path on I/O or parse errors and on ragged rows.
ParticleCloud load_csv(const std::string& path);
void save_csv(const std::string& path, const ParticleCloud& cloud);

}  // namespace sndflow
