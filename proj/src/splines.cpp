#include "sndflow/splines.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>

#include "sndflow/special.hpp"

namespace sndflow {

namespace {

// Neumaier-compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      carry += (sum - t) + v;
    else
      carry += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + carry; }
};

// sum_k (-1)^k C(m,k) (h - k)_+^p, i.e. the truncated-power sum of M_m
// and its antiderivatives evaluated at -|x| with h = m/2 - |x|.
double truncated_power_sum(int m, double h, int p) {
  if (m >= 4) {
    CompensatedSum acc;
    for (int k = 0; k <= m && h - k > 0.0; ++k) {
      const double term = binomial(m, k) * std::pow(h - k, p);
      acc.add(k % 2 == 0 ? term : -term);
    }
    return acc.value();
  }
  double acc = 0.0;
  for (int k = 0; k <= m && h - k > 0.0; ++k) {
    const double term = binomial(m, k) * std::pow(h - k, p);
    acc += k % 2 == 0 ? term : -term;
  }
  return acc;
}

double unit_bspline(int m, double x) {
  const double ax = std::abs(x);
  if (ax >= 0.5 * m) return 0.0;
  if (m == 1) return 1.0;
  return truncated_power_sum(m, 0.5 * m - ax, m - 1) / factorial(m - 1);
}

}  // namespace

SplineProfile::SplineProfile(int order, double scale) : m(order), eps(scale) {
  if (order < 1) throw std::invalid_argument("SplineProfile: order must be >= 1");
  if (!(scale > 0.0)) throw std::invalid_argument("SplineProfile: eps must be positive");
}

double bspline_eval(const SplineProfile& p, double x) {
  if (p.m == 1) return std::abs(x) <= 0.5 * p.eps ? 1.0 / p.eps : 0.0;
  return unit_bspline(p.m, x / p.eps) / p.eps;
}

double bspline_center_value(int m) {
  if (m < 2) throw std::invalid_argument("bspline_center_value: m must be >= 2");
  // m! * sum_k (-1)^k (m-2k)^{m-1} / (k! (m-k)!) is an integer; accumulate it
  // exactly since the alternating terms cancel by many orders of magnitude.
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  cpp_int sum = 0;
  cpp_int choose = 1;
  for (int k = 0; k <= m / 2; ++k) {
    cpp_int power = boost::multiprecision::pow(cpp_int(m - 2 * k), m - 1);
    if (k % 2 == 0)
      sum += choose * power;
    else
      sum -= choose * power;
    choose = choose * (m - k) / (k + 1);
  }
  cpp_int denom = cpp_int(1) << (m - 1);
  for (int i = 2; i <= m; ++i) denom *= i;
  const cpp_rational value(cpp_int(m) * sum, denom);
  return value.convert_to<double>();
}

double smoothed_abs(const SplineProfile& p, double x) {
  const double ax = std::abs(x);
  if (ax >= p.half_support()) return ax;
  const double h = 0.5 * p.m - ax / p.eps;
  return ax + p.eps * 2.0 * truncated_power_sum(p.m, h, p.m + 1) / factorial(p.m + 1);
}

double smoothed_abs_d1(const SplineProfile& p, double x) {
  if (x == 0.0) return 0.0;
  const double sign = x > 0.0 ? 1.0 : -1.0;
  const double ax = std::abs(x);
  if (ax >= p.half_support()) return sign;
  const double h = 0.5 * p.m - ax / p.eps;
  return sign * (1.0 - 2.0 * truncated_power_sum(p.m, h, p.m) / factorial(p.m));
}

double smoothed_abs_d2(const SplineProfile& p, double x) {
  return 2.0 * bspline_eval(p, x);
}

double huber(double x, double lambda) {
  const double ax = std::abs(x);
  if (ax <= lambda) return 0.5 * x * x;
  return lambda * (ax - 0.5 * lambda);
}

}  // namespace sndflow
