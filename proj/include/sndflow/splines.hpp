#pragma once

namespace sndflow {

/// Centred cardinal B-spline of order m dilated by eps:
/// M_{m,eps}(x) = M_m(x / eps) / eps, supported on [-m eps / 2, m eps / 2].
///
/// Only even orders carry a conditionally positive definite smoothed
/// absolute value; odd orders are evaluated but never used as flow kernels.
/// Order 1 (the indicator) exists for the Huber comparison.
struct SplineProfile {
  int m = 2;
  double eps = 1.0;

  SplineProfile() = default;
  SplineProfile(int order, double scale);

  /// Half-width of the support, m eps / 2.
  double half_support() const { return 0.5 * m * eps; }
};

/// M_{m,eps}(x) by the alternating truncated-power sum.
double bspline_eval(const SplineProfile& p, double x);

/// M_m(0) from the closed alternating sum over k <= m/2.
double bspline_center_value(int m);

/// (abs * M_{m,eps})(x) = eps f(x / eps). Returns |x| exactly once
/// |x| >= m eps / 2.
double smoothed_abs(const SplineProfile& p, double x);

/// First derivative f'(x / eps); not divided by eps.
double smoothed_abs_d1(const SplineProfile& p, double x);

/// Second derivative (2 / eps) M_m(x / eps).
double smoothed_abs_d2(const SplineProfile& p, double x);

/// Huber function: x^2 / 2 for |x| <= lambda, lambda (|x| - lambda / 2) otherwise.
double huber(double x, double lambda);

}  // namespace sndflow
