#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <span>

#include "sndflow/cloud.hpp"
#include "sndflow/smoothed_norm.hpp"

namespace sndflow {

enum class KernelVariant {
  cpd,  ///< K(x, y) = Phi(x - y)
  pd,   ///< K(x, y) = Phi(x - y) - Phi(x) - Phi(y)
};

/// Radial kernel built on a profile. Phi(r) = kernel_sign * P(r), so for
/// SND and ND Phi = -P(|x|) <= 0 and the PD variant drops the constant term
/// Phi(0) of the general order-one construction. The Gaussian is already
/// positive definite; its PD variant is the Gaussian itself.
class Kernel {
 public:
  explicit Kernel(RadialProfile profile, KernelVariant variant = KernelVariant::cpd)
      : profile_(std::move(profile)), variant_(variant) {}

  const RadialProfile& profile() const { return profile_; }
  KernelVariant variant() const { return variant_; }

  double phi(double r) const { return profile_.kernel_sign() * profile_.value(r); }

  double operator()(std::span<const double> x, std::span<const double> y) const;

 private:
  RadialProfile profile_;
  KernelVariant variant_;
};

/// Throws std::invalid_argument on a dimension mismatch.
double kernel_eval(const Kernel& k, std::span<const double> x, std::span<const double> y);

/// Gram matrix, rows distributed over OpenMP threads.
Eigen::MatrixXd gram(const Kernel& k, const ParticleCloud& pts);

/// Serial reference for gram().
Eigen::MatrixXd gram_reference(const Kernel& k, const ParticleCloud& pts);

/// sum_{j,k} a_j a_k K(x_j, x_k). Rejects weights with
/// |sum a| > 1e-12 * sum |a|.
double cpd_quadratic_form(const Kernel& k, const ParticleCloud& pts, std::span<const double> weights);

struct Counterexample {
  ParticleCloud points;
  std::vector<double> weights;  ///< zero-sum, unit Euclidean norm
  double form = 0.0;
  int trial = 0;
};

/// Random search for a zero-sum weight vector with a negative quadratic form
/// sum a_j a_k phi(|x_j - x_k|) < -1e-8, phi being the signed radial function.
///
/// Even trials draw N <= 12 points in a random box inside [-3, 3]^d and polish
/// them by random descent; odd trials draw jittered, rotated lattice patches
/// of at most 64 points. For each point set the weights are the minimising
/// eigenvector of the Gram matrix restricted to zero-sum vectors.
std::optional<Counterexample> cpd_falsify(const std::function<double(double)>& phi, int d, int trials,
                                          std::mt19937_64& rng);

}  // namespace sndflow
