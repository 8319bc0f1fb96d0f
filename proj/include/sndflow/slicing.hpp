#pragma once

#include <Eigen/Dense>
#include <random>
#include <span>
#include <vector>

#include "sndflow/cloud.hpp"
#include "sndflow/splines.hpp"

namespace sndflow {

/// Derivative f' of an even 1D sliced profile, odd, equal to
/// outer_slope * sign(t) for |t| >= window().
struct SlicedDerivative {
  enum class Kind { nd, snd };
  Kind kind = Kind::nd;
  double scale = 1.0;
  SplineProfile spline{};

  /// f(t) = scale * |t|.
  static SlicedDerivative abs(double scale) { return {Kind::nd, scale, SplineProfile{}}; }
  /// f(t) = scale * (abs * M_{m,eps})(t).
  static SlicedDerivative smoothed(int m, double eps, double scale = 1.0) {
    return {Kind::snd, scale, SplineProfile(m, eps)};
  }

  double window() const { return kind == Kind::nd ? 0.0 : spline.half_support(); }
  double outer_slope() const { return scale; }
  double operator()(double t) const {
    if (kind == Kind::nd) return t > 0.0 ? scale : (t < 0.0 ? -scale : 0.0);
    return scale * smoothed_abs_d1(spline, t);
  }
};

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of diag(R) folded into Q.
Eigen::MatrixXd random_rotation(int d, std::mt19937_64& rng);

/// P unit directions on S^{d-1}.
///
/// The simplex set keeps its structure so projections cost O(d) per point
/// instead of O(d P); a rotation, when present, is applied to the points
/// before projecting.
class SliceSet {
 public:
  /// d+1 vertices of the regular simplex, pairwise inner product -1/d.
  /// With `antipodal` the negated vertices are appended (P = 2(d+1)).
  static SliceSet simplex(int d, bool antipodal = false);
  /// Arbitrary unit directions, one per row.
  static SliceSet from_directions(Eigen::MatrixXd directions);

  int dim() const { return dim_; }
  int count() const;

  /// Same set with every direction replaced by q * direction.
  SliceSet rotated(const Eigen::MatrixXd& q) const;

  /// Materialised P x d direction matrix.
  Eigen::MatrixXd directions() const;

  /// Row i of the result holds <x_i, xi_p> for all p (n x P).
  Eigen::MatrixXd project(const Eigen::MatrixXd& pts) const;

  /// Row i of the result is sum_p s(i, p) xi_p (n x d).
  Eigen::MatrixXd combine(const Eigen::MatrixXd& s) const;

 private:
  int dim_ = 0;
  bool structured_ = false;
  bool antipodal_ = false;
  Eigen::MatrixXd explicit_;  // P x d when not structured
  Eigen::MatrixXd rotation_;  // d x d, empty for identity
};

/// Same as SliceSet::simplex(d).
SliceSet simplex_directions(int d);

/// sum_n w_n g(y_m - x_n) for sorted xs, g odd and equal to
/// outer_slope * sign outside [-window, window]. Far terms collapse to
/// prefix sums of the weights; terms inside the window are evaluated
/// directly. Throws std::invalid_argument if xs is not sorted.
std::vector<double> onedsum_sorted(std::span<const double> xs, std::span<const double> weights,
                                   std::span<const double> ys, const SlicedDerivative& g);

/// Direct O(NM) evaluation of the same sum.
std::vector<double> onedsum_dense(std::span<const double> xs, std::span<const double> weights,
                                  std::span<const double> ys, const SlicedDerivative& g);

struct SlicedSumOptions {
  /// Below this N + M each slice is summed densely.
  std::size_t dense_threshold = 512;
};

/// s_m = (1/P) sum_p xi_p sum_n w_n f'(<x_n - y_m, xi_p>) for every query y_m.
/// Slices are independent and run in parallel; each one writes its own
/// column, so the result is independent of the thread count.
Eigen::MatrixXd sliced_grad_sum(const SlicedDerivative& f_d1, const SliceSet& slices,
                                const Eigen::MatrixXd& queries, const Eigen::MatrixXd& sources,
                                std::span<const double> weights, const SlicedSumOptions& opts = {});

/// Row-major cloud to an n x d Eigen matrix.
Eigen::MatrixXd to_matrix(const ParticleCloud& cloud);

}  // namespace sndflow
