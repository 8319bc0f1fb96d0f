#include "sndflow/special.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sndflow {

namespace {

constexpr int kGaussPoints = 20;

struct GaussLegendre {
  std::array<double, kGaussPoints> nodes{};
  std::array<double, kGaussPoints> weights{};

  GaussLegendre() {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    const int n = kGaussPoints;
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      const double w = 2.0 / ((1.0 - x * x) * dp * dp);
      nodes[i] = -x;
      nodes[n - 1 - i] = x;
      weights[i] = w;
      weights[n - 1 - i] = w;
    }
  }
};

const GaussLegendre& gauss_legendre() {
  static const GaussLegendre rule;
  return rule;
}

double panel(const std::function<double(double)>& f, double a, double b) {
  const auto& rule = gauss_legendre();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < kGaussPoints; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double abs_tol, double rel_tol, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = panel(f, a, mid);
  const double right = panel(f, mid, b);
  const double refined = left + right;
  if (depth >= 48 || std::abs(refined - whole) <= std::max(abs_tol, rel_tol * std::abs(refined)))
    return refined;
  return adapt(f, a, mid, left, 0.5 * abs_tol, rel_tol, depth + 1) +
         adapt(f, mid, b, right, 0.5 * abs_tol, rel_tol, depth + 1);
}

// Continued fraction for B_x(a,b) / (x^a (1-x)^b / a), modified Lentz.
double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

}  // namespace

double beta(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete_beta: a, b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete_beta: x outside [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return beta(a, b);
  const double log_front = a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_front) * beta_continued_fraction(x, a, b) / a;
  return beta(a, b) - std::exp(log_front) * beta_continued_fraction(1.0 - x, b, a) / b;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol, std::span<const double> breakpoints) {
  if (a == b) return 0.0;
  const double sign = b > a ? 1.0 : -1.0;
  if (b < a) std::swap(a, b);
  std::vector<double> cuts{a};
  for (double p : breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  const double share = abs_tol / static_cast<double>(cuts.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double whole = panel(f, cuts[i], cuts[i + 1]);
    total += adapt(f, cuts[i], cuts[i + 1], whole, share, rel_tol, 0);
  }
  return sign * total;
}

}  // namespace sndflow
