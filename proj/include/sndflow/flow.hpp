#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sndflow/cloud.hpp"
#include "sndflow/slicing.hpp"
#include "sndflow/smoothed_norm.hpp"

namespace sndflow {

enum class Precision { f32, f64 };

struct Summation {
  enum class Mode { dense, sliced };
  Mode mode = Mode::dense;
  int directions = 0;      ///< sliced only; 0 means d + 1 simplex vertices
  bool rotate = true;      ///< new Haar rotation every iteration
  bool antipodal = false;  ///< append negated simplex vertices
  std::size_t dense_threshold = 512;

  static Summation dense() { return {}; }
  static Summation sliced(int p = 0) {
    Summation s;
    s.mode = Mode::sliced;
    s.directions = p;
    return s;
  }
};

struct FlowConfig {
  double tau = 0.01;
  long iters = 0;
  std::vector<long> checkpoints;  ///< sorted, inside [0, iters]; 0 and iters are always recorded
  Precision precision = Precision::f64;
  std::uint64_t seed = 0;
  Summation summation;
  bool compute_w2 = true;

  /// Throws std::invalid_argument when tau <= 0, iters < 0 or the
  /// checkpoints are unsorted or out of range.
  void validate() const;
};

struct FlowRecord {
  long iter = 0;
  double time = 0.0;  ///< tau * iter
  double mmd2 = 0.0;
  double w2 = 0.0;    ///< NaN when compute_w2 is off
  double wall_ms = 0.0;  ///< flow time so far, metric evaluation excluded
};

struct FlowTrace {
  std::vector<FlowRecord> records;
  ParticleCloud final_state;
};

/// A step produced a non-finite coordinate.
class FlowAborted : public std::runtime_error {
 public:
  FlowAborted(long iteration, const std::string& what) : std::runtime_error(what), iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

/// One explicit Euler step,
///   x_i <- x_i - tau [ 1/N sum_n (x_i - x_n) r(|x_i - x_n|) - 1/M sum_m (x_i - y_m) r(|x_i - y_m|) ]
/// with r = profile.signed_ratio. Particles are updated from the old state
/// only; rows are split over OpenMP threads and each row sums serially, so
/// the result does not depend on the thread count.
template <class T>
void flow_step(const RadialProfile& profile, const BasicCloud<T>& state, const BasicCloud<T>& target, T tau,
               BasicCloud<T>& out);

/// Serial reference for flow_step.
template <class T>
void flow_step_reference(const RadialProfile& profile, const BasicCloud<T>& state, const BasicCloud<T>& target,
                         T tau, BasicCloud<T>& out);

/// Convenience wrapper; throws FlowAborted(0, ...) on a non-finite result.
ParticleCloud flow_step(const RadialProfile& profile, const ParticleCloud& state, const ParticleCloud& target,
                        double tau);

/// Single-particle update x + tau (x - y) signed_ratio(|x - y|).
std::vector<double> dirac_step(const RadialProfile& profile, std::span<const double> x, std::span<const double> y,
                               double tau);

/// 1D derivative whose spherical average in dimension d gives the gradient
/// of the profile: the smoothed absolute value for SND, |t| / (2 C_d) for ND.
/// The Gaussian has no sliced form here.
SlicedDerivative sliced_derivative(const RadialProfile& profile, int d);

/// Sliced velocity v_i (row i), so that x_i <- x_i - tau v_i.
Eigen::MatrixXd sliced_velocity(const RadialProfile& profile, const SliceSet& slices, const Eigen::MatrixXd& state,
                                const Eigen::MatrixXd& target, std::size_t dense_threshold = 512);

using FlowCallback = std::function<void(const FlowRecord&, const ParticleCloud&)>;

/// Runs cfg.iters steps, recording MMD^2 (CPD kernel of `profile`) and W2 at
/// iteration 0, every checkpoint and the last iteration. The callback sees
/// each record with the state it was computed from. Throws FlowAborted with
/// the failing iteration when the state stops being finite.
FlowTrace run_flow(const RadialProfile& profile, const ParticleCloud& init, const ParticleCloud& target,
                   const FlowConfig& cfg, const FlowCallback& metrics = {});

}  // namespace sndflow
