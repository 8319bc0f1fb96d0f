#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "sndflow/splines.hpp"

namespace sndflow {

/// C_d = Gamma(d/2) / (sqrt(pi) Gamma((d+1)/2)), the slope of I_d[abs].
double cd_constant(int d);

/// Normalisation c_d = 2 w_{d-2} / w_{d-1} of the Riemann-Liouville integral.
double rl_normalisation(int d);

/// I_d[f](s) = c_d int_0^1 f(t s) (1 - t^2)^{(d-3)/2} dt by adaptive
/// quadrature after t = sin(theta), which removes the d = 2 endpoint
/// singularity. `kinks` are optional points in units of |s| t (e.g. the
/// spline knots) where f loses smoothness. Throws for d < 2.
double riemann_liouville_quadrature(const std::function<double(double)>& f, int d, double s,
                                    std::span<const double> kinks = {});

/// I_d[abs * M_{m,eps}](s) in closed form. d = 3 with m in {2, 4} uses the
/// explicit piecewise rational formulas; everything else goes through the
/// incomplete Beta sum. Requires even m >= 2 and d >= 2.
double snd_profile_closed(int m, double eps, int d, double s);

/// Derivative of snd_profile_closed with respect to s.
double snd_profile_d1(int m, double eps, int d, double s);

/// The incomplete Beta route for any even m and d >= 2, bypassing the d = 3
/// fast paths. Exposed so both routes can be checked against each other.
double snd_profile_beta_sum(int m, double eps, int d, double s);
double snd_profile_beta_sum_d1(int m, double eps, int d, double s);

/// Second derivative at the origin, 2 M_m(0) / (eps d).
double snd_profile_curvature0(int m, double eps, int d);

enum class ProfileKind { snd, nd, gaussian };

/// Even radial profile P with the kernel sign it enters with.
///
/// SND and ND profiles are stored positive (P = I_d[abs * M_{m,eps}] and
/// P = |s| / 2) and enter kernels as Phi = -P(|x|). The Gaussian profile is
/// stored as exp(-s^2 / (2 sigma^2)) and enters with a plus sign.
class RadialProfile {
 public:
  static RadialProfile snd(int m, double eps, int d_slice);
  static RadialProfile nd();
  static RadialProfile gaussian(double sigma);

  ProfileKind kind() const { return kind_; }
  int order() const { return m_; }
  double eps() const { return eps_; }
  int d_slice() const { return d_slice_; }
  double sigma() const { return sigma_; }

  /// +1 for the Gaussian, -1 for SND and ND.
  double kernel_sign() const { return kind_ == ProfileKind::gaussian ? 1.0 : -1.0; }

  double value(double s) const;
  double d1(double s) const;
  double curvature0() const { return curvature0_; }

  /// P'(s) / s, continued by P''(0) at the origin (0 for ND). Templated so
  /// the flow can run the whole state in float.
  template <class T>
  T ratio(T s) const;

  /// Signed ratio Phi'(s) / s = kernel_sign() * ratio(s), the factor of the
  /// particle update.
  template <class T>
  T signed_ratio(T s) const {
    return static_cast<T>(kernel_sign()) * ratio(s);
  }

  std::string describe() const;

 private:
  RadialProfile() = default;
  double general_ratio(double s) const;

  ProfileKind kind_ = ProfileKind::nd;
  int m_ = 0;
  double eps_ = 0.0;
  int d_slice_ = 0;
  double sigma_ = 0.0;
  double curvature0_ = 0.0;
  double s_min_ = 0.0;
};

/// flow_ratio as a free function: P'(s)/s with the conventions above.
double flow_ratio(const RadialProfile& profile, double s);

template <class T>
T RadialProfile::ratio(T s) const {
  switch (kind_) {
    case ProfileKind::nd:
      return s > T(0) ? T(0.5) / s : T(0);
    case ProfileKind::gaussian: {
      const T inv = T(1) / static_cast<T>(sigma_ * sigma_);
      return -inv * std::exp(-T(0.5) * s * s * inv);
    }
    case ProfileKind::snd:
      break;
  }
  if (d_slice_ == 3 && (m_ == 2 || m_ == 4)) {
    const T inv_eps = T(1) / static_cast<T>(eps_);
    const T u = s * inv_eps;
    if (m_ == 2) {
      if (u <= T(1)) return (T(8) - T(3) * u) * inv_eps / T(12);
      return (T(6) - T(1) / (u * u)) / (T(12) * s);
    }
    if (u <= T(1)) return (T(160) + u * u * (T(15) * u - T(48))) * inv_eps / T(360);
    if (u <= T(2)) {
      const T u2 = u * u;
      const T poly = u * (T(320) + u * (T(-180) + u * (T(48) - T(5) * u))) - T(60) + T(4) / u2;
      return poly / (T(360) * s);
    }
    return (T(180) - T(60) / (u * u)) / (T(360) * s);
  }
  return static_cast<T>(general_ratio(static_cast<double>(s)));
}

}  // namespace sndflow
