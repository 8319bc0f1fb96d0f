#include "sndflow/smoothed_norm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "sndflow/special.hpp"

namespace sndflow {

namespace {

void check_snd_args(int m, double eps, int d) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("SND profile requires an even order m >= 2");
  if (!(eps > 0.0)) throw std::invalid_argument("SND profile requires eps > 0");
  if (d < 2) throw std::invalid_argument("SND profile requires d >= 2");
}

// I_d[abs * M_m](u) for u >= 0 through
//   C_d u + c_d sum_{k : b_k > 0} (-1)^k C(m,k)
//       sum_n b_k^{m+1-n} (-u)^n / (n! (m+1-n)!) B_X((n+1)/2, (d-1)/2),
// b_k = m/2 - k and X = min(1, b_k^2 / u^2). This is the incomplete Beta sum
// written for the compactly supported remainder f - abs, so the large-u
// regime has no cancellation between polynomial terms.
double general_profile_unit(int m, int d, double u) {
  const double b_param = 0.5 * (d - 1);
  double acc = 0.0;
  for (int k = 0; 2 * k < m; ++k) {
    const double b = 0.5 * m - k;
    const double x = u > b ? (b / u) * (b / u) : 1.0;
    double inner = 0.0;
    double u_pow = 1.0;
    for (int n = 0; n <= m + 1; ++n) {
      if (n > 0) {
        u_pow *= -u;
        if (u == 0.0) break;
      }
      inner += std::pow(b, m + 1 - n) * u_pow / (factorial(n) * factorial(m + 1 - n)) *
               incomplete_beta(x, 0.5 * (n + 1), b_param);
    }
    acc += (k % 2 == 0 ? 1.0 : -1.0) * binomial(m, k) * inner;
  }
  return cd_constant(d) * u + rl_normalisation(d) * acc;
}

double general_profile_d1_unit(int m, int d, double u) {
  if (u == 0.0) return 0.0;
  const double b_param = 0.5 * (d - 1);
  double acc = 0.0;
  for (int k = 0; 2 * k < m; ++k) {
    const double b = 0.5 * m - k;
    const double x = u > b ? (b / u) * (b / u) : 1.0;
    double inner = 0.0;
    double u_pow = 1.0;
    for (int n = 0; n <= m; ++n) {
      if (n > 0) u_pow *= -u;
      inner += std::pow(b, m - n) * u_pow / (factorial(n) * factorial(m - n)) *
               incomplete_beta(x, 0.5 * (n + 2), b_param);
    }
    acc += (k % 2 == 0 ? 1.0 : -1.0) * binomial(m, k) * inner;
  }
  return cd_constant(d) - rl_normalisation(d) * acc;
}

double i3_m2(double u) {
  if (u <= 1.0) return (4.0 + u * u * (4.0 - u)) / 12.0;
  return (6.0 * u + 1.0 / u) / 12.0;
}

double i3_m2_d1(double u) {
  if (u <= 1.0) return u * (8.0 - 3.0 * u) / 12.0;
  return (6.0 - 1.0 / (u * u)) / 12.0;
}

double i3_m4(double u) {
  const double u2 = u * u;
  if (u <= 1.0) return (168.0 + u2 * (80.0 + u2 * (3.0 * u - 12.0))) / 360.0;
  if (u <= 2.0)
    return (192.0 + u * (-60.0 + u * (160.0 + u * (-60.0 + u * (12.0 - u)))) - 4.0 / u) / 360.0;
  return (180.0 * u + 60.0 / u) / 360.0;
}

double i3_m4_d1(double u) {
  const double u2 = u * u;
  if (u <= 1.0) return u * (160.0 + u2 * (15.0 * u - 48.0)) / 360.0;
  if (u <= 2.0)
    return (u * (320.0 + u * (-180.0 + u * (48.0 - 5.0 * u))) - 60.0 + 4.0 / u2) / 360.0;
  return (180.0 - 60.0 / u2) / 360.0;
}

double profile_unit(int m, int d, double u) {
  if (d == 3 && m == 2) return i3_m2(u);
  if (d == 3 && m == 4) return i3_m4(u);
  return general_profile_unit(m, d, u);
}

double profile_d1_unit(int m, int d, double u) {
  if (d == 3 && m == 2) return i3_m2_d1(u);
  if (d == 3 && m == 4) return i3_m4_d1(u);
  return general_profile_d1_unit(m, d, u);
}

}  // namespace

double cd_constant(int d) {
  if (d < 1) throw std::invalid_argument("cd_constant: d must be >= 1");
  return std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5 * (d + 1))) / std::sqrt(std::numbers::pi);
}

double rl_normalisation(int d) {
  if (d < 2) throw std::invalid_argument("Riemann-Liouville integral requires d >= 2");
  // 2 w_{d-2} / w_{d-1} = 2 Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)) = (d-1) C_d
  return (d - 1) * cd_constant(d);
}

double riemann_liouville_quadrature(const std::function<double(double)>& f, int d, double s,
                                    std::span<const double> kinks) {
  const double cd = rl_normalisation(d);
  const double as = std::abs(s);
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<double> breaks;
  for (double k : kinks) {
    const double ak = std::abs(k);
    if (ak > 0.0 && ak < as) breaks.push_back(std::asin(ak / as));
  }
  const auto integrand = [&](double theta) {
    const double c = std::cos(theta);
    const double weight = d == 2 ? 1.0 : std::pow(c, d - 2);
    return f(as * std::sin(theta)) * weight;
  };
  return cd * integrate(integrand, 0.0, half_pi, 1e-15, 1e-14, breaks);
}

double snd_profile_closed(int m, double eps, int d, double s) {
  check_snd_args(m, eps, d);
  return eps * profile_unit(m, d, std::abs(s) / eps);
}

double snd_profile_d1(int m, double eps, int d, double s) {
  check_snd_args(m, eps, d);
  const double v = profile_d1_unit(m, d, std::abs(s) / eps);
  return s < 0.0 ? -v : v;
}

double snd_profile_beta_sum(int m, double eps, int d, double s) {
  check_snd_args(m, eps, d);
  return eps * general_profile_unit(m, d, std::abs(s) / eps);
}

double snd_profile_beta_sum_d1(int m, double eps, int d, double s) {
  check_snd_args(m, eps, d);
  const double v = general_profile_d1_unit(m, d, std::abs(s) / eps);
  return s < 0.0 ? -v : v;
}

double snd_profile_curvature0(int m, double eps, int d) {
  check_snd_args(m, eps, d);
  // c_d int_0^1 t^2 (1-t^2)^{(d-3)/2} dt = c_d B(3/2, (d-1)/2) / 2
  const double second_moment = 0.5 * rl_normalisation(d) * beta(1.5, 0.5 * (d - 1));
  return 2.0 * bspline_center_value(m) / eps * second_moment;
}

RadialProfile RadialProfile::snd(int m, double eps, int d_slice) {
  check_snd_args(m, eps, d_slice);
  RadialProfile p;
  p.kind_ = ProfileKind::snd;
  p.m_ = m;
  p.eps_ = eps;
  p.d_slice_ = d_slice;
  p.curvature0_ = snd_profile_curvature0(m, eps, d_slice);
  p.s_min_ = 1e-12 * std::max(1.0, eps);
  return p;
}

RadialProfile RadialProfile::nd() {
  RadialProfile p;
  p.kind_ = ProfileKind::nd;
  return p;
}

RadialProfile RadialProfile::gaussian(double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("Gaussian profile requires sigma > 0");
  RadialProfile p;
  p.kind_ = ProfileKind::gaussian;
  p.sigma_ = sigma;
  p.curvature0_ = -1.0 / (sigma * sigma);
  return p;
}

double RadialProfile::value(double s) const {
  switch (kind_) {
    case ProfileKind::nd:
      return 0.5 * std::abs(s);
    case ProfileKind::gaussian:
      return std::exp(-0.5 * s * s / (sigma_ * sigma_));
    case ProfileKind::snd:
      break;
  }
  return snd_profile_closed(m_, eps_, d_slice_, s);
}

double RadialProfile::d1(double s) const {
  switch (kind_) {
    case ProfileKind::nd:
      return s > 0.0 ? 0.5 : (s < 0.0 ? -0.5 : 0.0);
    case ProfileKind::gaussian:
      return -s / (sigma_ * sigma_) * std::exp(-0.5 * s * s / (sigma_ * sigma_));
    case ProfileKind::snd:
      break;
  }
  return snd_profile_d1(m_, eps_, d_slice_, s);
}

double RadialProfile::general_ratio(double s) const {
  if (s <= s_min_) return curvature0_;
  return snd_profile_d1(m_, eps_, d_slice_, s) / s;
}

std::string RadialProfile::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case ProfileKind::nd:
      os << "nd";
      break;
    case ProfileKind::gaussian:
      os << "gauss(sigma=" << sigma_ << ")";
      break;
    case ProfileKind::snd:
      os << "snd(m=" << m_ << ",eps=" << eps_ << ",d_slice=" << d_slice_ << ")";
      break;
  }
  return os.str();
}

double flow_ratio(const RadialProfile& profile, double s) {
  if (s < 0.0) throw std::invalid_argument("flow_ratio: s must be non-negative");
  return profile.ratio(s);
}

}  // namespace sndflow
