#include "sndflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "sndflow/flow.hpp"
#include "sndflow/kernels.hpp"
#include "sndflow/slicing.hpp"
#include "sndflow/smoothed_norm.hpp"
#include "sndflow/splines.hpp"
#include "sndflow/transport.hpp"

namespace sndflow {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult bounded(std::string name, double err, double tol) {
  return {std::move(name), err <= tol, "err " + fmt(err) + " tol " + fmt(tol)};
}

std::vector<CheckResult> splines_suite(std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  std::uniform_real_distribution<double> xs(-3.0, 3.0);
  double center = 0.0;
  for (int m = 2; m <= 16; m += 2)
    center = std::max(center, std::abs(bspline_center_value(m) - bspline_eval({m, 1.0}, 0.0)));
  out.push_back(bounded("center value matches evaluation", center, 1e-12));

  double fd = 0.0;
  for (int m : {2, 4})
    for (int t = 0; t < 100; ++t) {
      const SplineProfile p(m, 0.7);
      const double x = xs(rng), h = 1e-5;
      const double num = (smoothed_abs(p, x + h) - smoothed_abs(p, x - h)) / (2 * h);
      const double ana = smoothed_abs_d1(p, x);
      fd = std::max(fd, std::abs(num - ana) / std::max(1e-3, std::abs(ana)));
    }
  out.push_back(bounded("d1 vs finite differences", fd, 1e-6));

  bool exact = true;
  for (int t = 0; t < 100; ++t) {
    const SplineProfile p(2 + 2 * (t % 3), 0.5);
    const double x = p.half_support() + std::abs(xs(rng));
    exact = exact && smoothed_abs(p, x) == x && smoothed_abs(p, -x) == x;
  }
  out.push_back({"abs outside the support", exact, ""});

  bool convex = true;
  for (int t = 0; t < 200; ++t) {
    const SplineProfile p(4, 0.3);
    const double a = xs(rng), b = xs(rng);
    convex = convex && smoothed_abs(p, 0.5 * (a + b)) <= 0.5 * (smoothed_abs(p, a) + smoothed_abs(p, b)) + 1e-15;
    convex = convex && smoothed_abs_d2(p, a) >= 0.0;
  }
  out.push_back({"convexity", convex, ""});
  return out;
}

std::vector<CheckResult> profiles_suite(std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  std::uniform_real_distribution<double> ss(0.0, 10.0);
  double rel = 0.0;
  for (int m : {2, 4})
    for (double eps : {0.1, 1.0})
      for (int d : {2, 3, 5})
        for (int t = 0; t < 20; ++t) {
          const double s = ss(rng);
          const SplineProfile p(m, eps);
          const double knots[] = {p.half_support(), p.half_support() - eps, p.half_support() - 2 * eps};
          const double q = riemann_liouville_quadrature([&](double x) { return smoothed_abs(p, x); }, d, s, knots);
          rel = std::max(rel, std::abs(snd_profile_closed(m, eps, d, s) - q) / std::abs(q));
        }
  out.push_back(bounded("closed form vs quadrature", rel, 1e-8));

  double eig = 0.0;
  for (double beta : {0.5, 1.0, 1.5})
    for (int d : {2, 3, 5}) {
      const double lam = std::exp(std::lgamma(0.5 * d) + std::lgamma(0.5 * (beta + 1)) - std::lgamma(0.5 * (d + beta))) /
                         std::sqrt(std::acos(-1.0));
      const double s = 1.7;
      const double q = riemann_liouville_quadrature([&](double x) { return std::pow(std::abs(x), beta); }, d, s);
      eig = std::max(eig, std::abs(q - lam * std::pow(s, beta)) / (lam * std::pow(s, beta)));
    }
  out.push_back(bounded("abs^beta eigenfunctions", eig, 1e-8));
  out.push_back(bounded("C_3 = 1/2", std::abs(cd_constant(3) - 0.5), 1e-14));

  double fd = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int d = 2 + t % 4;
    const double s = 0.05 + ss(rng) * 0.5, h = 1e-5;
    const double num = (snd_profile_closed(2, 1.0, d, s + h) - snd_profile_closed(2, 1.0, d, s - h)) / (2 * h);
    const double ana = snd_profile_d1(2, 1.0, d, s);
    fd = std::max(fd, std::abs(num - ana) / std::abs(ana));
  }
  out.push_back(bounded("profile d1 vs finite differences", fd, 1e-6));
  return out;
}

std::vector<CheckResult> slicing_suite(std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  double gram = 0.0;
  for (int d : {1, 2, 3, 10, 50}) {
    const Eigen::MatrixXd v = simplex_directions(d).directions();
    const Eigen::MatrixXd g = v * v.transpose();
    const Eigen::MatrixXd expect = (1.0 + 1.0 / d) * Eigen::MatrixXd::Identity(d + 1, d + 1) -
                                   Eigen::MatrixXd::Constant(d + 1, d + 1, 1.0 / d);
    gram = std::max(gram, (g - expect).cwiseAbs().maxCoeff());
  }
  out.push_back(bounded("simplex Gram", gram, 1e-10));

  double orth = 0.0;
  for (int d : {2, 5, 20}) {
    const Eigen::MatrixXd q = random_rotation(d, rng);
    orth = std::max(orth, (q.transpose() * q - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
  }
  out.push_back(bounded("rotation orthogonality", orth, 1e-10));

  double one_d = 0.0;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 50; ++t) {
    const int n = 1 + t * 7, m = 1 + t * 5;
    std::vector<double> xs(n), ws(n), ys(m);
    for (double& x : xs) x = gauss(rng);
    for (double& w : ws) w = gauss(rng);
    for (double& y : ys) y = gauss(rng);
    std::sort(xs.begin(), xs.end());
    const SlicedDerivative g = t % 2 ? SlicedDerivative::abs(0.5) : SlicedDerivative::smoothed(2, 0.1);
    const auto fast = onedsum_sorted(xs, ws, ys, g);
    const auto slow = onedsum_dense(xs, ws, ys, g);
    const double mass = std::accumulate(ws.begin(), ws.end(), 0.0, [](double a, double b) { return a + std::abs(b); });
    for (int i = 0; i < m; ++i) one_d = std::max(one_d, std::abs(fast[i] - slow[i]) / mass);
  }
  out.push_back(bounded("sorted 1D sums vs dense", one_d, 1e-10));
  return out;
}

std::vector<CheckResult> cpd_suite(std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  std::uniform_real_distribution<double> box(-3.0, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Kernel snd(RadialProfile::snd(2, 1.0, 3));
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 19;
    ParticleCloud pts(n, 3);
    for (double& c : pts.coords()) c = box(rng);
    std::vector<double> a(n);
    for (double& w : a) w = gauss(rng);
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / n;
    double sq = 0.0;
    for (double& w : a) {
      w -= mean;
      sq += w * w;
    }
    worst = std::min(worst, cpd_quadratic_form(snd, pts, a) / (sq * std::abs(snd.phi(0.0))));
  }
  out.push_back(bounded("SND forms nonnegative", -worst, 1e-10));

  const auto huber_ce = cpd_falsify([](double r) { return -huber(r, 1.0); }, 1, 10000, rng);
  out.push_back({"Huber counterexample found", huber_ce.has_value(),
                 huber_ce ? "form " + fmt(huber_ce->form) + " at trial " + std::to_string(huber_ce->trial) : ""});
  const SplineProfile m2(2, 1.0);
  const auto radial_ce = cpd_falsify([&](double r) { return -smoothed_abs(m2, r); }, 3, 10000, rng);
  out.push_back({"radialised abs*M2 counterexample found", radial_ce.has_value(),
                 radial_ce ? "form " + fmt(radial_ce->form) + " at trial " + std::to_string(radial_ce->trial) : ""});
  return out;
}

std::vector<CheckResult> dirac_suite(std::mt19937_64&) {
  std::vector<CheckResult> out;
  const RadialProfile nd = RadialProfile::nd();
  const std::vector<double> y{0.3, -0.2};
  const std::vector<double> x0{0.3 + 0.12, -0.2 + 0.16};  // |x0 - y| = 0.2
  const double tau = 1.0;
  const auto x1 = dirac_step(nd, x0, y, tau);
  const auto x2 = dirac_step(nd, x1, y, tau);
  const double d1 = distance(x1, y);
  out.push_back(bounded("ND first step distance", std::abs(d1 - (tau / 2 - 0.2)), 2e-16));
  out.push_back({"ND period two", x2 == x0 || distance(x2, x0) <= 1e-15, ""});

  const RadialProfile s = RadialProfile::snd(2, 1.0, 3);
  const double t = 0.1;
  // the kernel's curvature at the origin is -curvature0()
  const double predicted = 1.0 - 0.5 * t * s.curvature0();
  std::vector<double> x{0.05, 0.0};
  const std::vector<double> origin{0.0, 0.0};
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double before = distance(x, origin);
    x = dirac_step(s, x, origin, t);
    const double after = distance(x, origin);
    if (before < 1e-150) break;
    lo = std::min(lo, after / before);
    hi = std::max(hi, after / before);
  }
  out.push_back({"SND contraction", hi < 1.0 && lo >= predicted - 0.05,
                 "factors in [" + fmt(lo) + ", " + fmt(hi) + "]"});
  return out;
}

std::vector<CheckResult> transport_suite(std::mt19937_64& rng) {
  std::vector<CheckResult> out;
  std::normal_distribution<double> gauss(0.0, 1.0);
  double brute = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5;
    ParticleCloud a(n, 2), b(n, 2);
    for (double& c : a.coords()) c = gauss(rng);
    for (double& c : b.coords()) c = gauss(rng);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double cost = 0.0;
      for (int i = 0; i < n; ++i) cost += squared_distance(a.point(i), b.point(perm[i]));
      best = std::min(best, cost);
    } while (std::next_permutation(perm.begin(), perm.end()));
    brute = std::max(brute, std::abs(w2_exact(a, b) - std::sqrt(best / n)));
  }
  out.push_back(bounded("assignment vs brute force", brute, 1e-10));

  double line = 0.0;
  for (int t = 0; t < 20; ++t) {
    ParticleCloud a(30, 1), b(30, 1);
    for (double& c : a.coords()) c = gauss(rng);
    for (double& c : b.coords()) c = gauss(rng);
    line = std::max(line, std::abs(w2_exact(a, b) - w2_1d(a, b)));
  }
  out.push_back(bounded("assignment vs sorted 1D", line, 1e-10));
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"splines", "profiles", "slicing", "cpd", "dirac", "transport"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  if (suite == "splines") return splines_suite(rng);
  if (suite == "profiles") return profiles_suite(rng);
  if (suite == "slicing") return slicing_suite(rng);
  if (suite == "cpd") return cpd_suite(rng);
  if (suite == "dirac") return dirac_suite(rng);
  if (suite == "transport") return transport_suite(rng);
  throw std::invalid_argument("unknown suite: " + suite);
}

}  // namespace sndflow
