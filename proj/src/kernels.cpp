#include "sndflow/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sndflow {

namespace {

double norm(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc);
}

Eigen::MatrixXd radial_gram(const std::function<double(double)>& phi, const ParticleCloud& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    g(i, i) = phi(0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = phi(distance(pts.point(i), pts.point(j)));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

struct MinDirection {
  double value;
  Eigen::VectorXd weights;
};

// Orthonormal basis of the zero-sum vectors in R^n (Helmert columns).
Eigen::MatrixXd zero_sum_basis(Eigen::Index n) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n - 1);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1));
    for (Eigen::Index i = 0; i < k; ++i) b(i, k - 1) = inv;
    b(k, k - 1) = -static_cast<double>(k) * inv;
  }
  return b;
}

// Smallest eigenpair of the Gram matrix restricted to zero-sum weights.
MinDirection min_zero_sum_direction(const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd b = zero_sum_basis(g.rows());
  const Eigen::MatrixXd restricted = b.transpose() * g * b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(restricted);
  const Eigen::VectorXd a = b * solver.eigenvectors().col(0);
  return {a.dot(g * a), a};
}

ParticleCloud lattice_patch(int d, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> side(2, 7);
  std::uniform_real_distribution<double> spacing(0.3, 1.2);
  const int axes = std::min(d, 3);
  std::vector<int> shape(axes, 1);
  do {
    for (int& s : shape) s = side(rng);
    if (axes == 3) shape[2] = std::uniform_int_distribution<int>(1, 3)(rng);
  } while (std::accumulate(shape.begin(), shape.end(), 1, std::multiplies<>()) > 64);
  const double h = spacing(rng);
  const int count = std::accumulate(shape.begin(), shape.end(), 1, std::multiplies<>());

  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd rot = Eigen::MatrixXd::Identity(d, d);
  if (d > 1) {
    Eigen::MatrixXd a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = gauss(rng);
    rot = Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ();
  }
  ParticleCloud pts(static_cast<std::size_t>(count), static_cast<std::size_t>(d));
  Eigen::VectorXd p(d);
  for (int idx = 0; idx < count; ++idx) {
    p.setZero();
    int rest = idx;
    for (int a = 0; a < axes; ++a) {
      p(a) = h * (rest % shape[a]);
      rest /= shape[a];
    }
    for (int k = 0; k < d; ++k) p(k) += 0.02 * h * gauss(rng);
    const Eigen::VectorXd q = rot * p;
    for (int k = 0; k < d; ++k) pts(idx, k) = q(k);
  }
  return pts;
}

}  // namespace

double Kernel::operator()(std::span<const double> x, std::span<const double> y) const {
  const double r = distance(x, y);
  if (variant_ == KernelVariant::cpd || profile_.kind() == ProfileKind::gaussian) return phi(r);
  return phi(r) - (phi(norm(x)) + phi(norm(y)));
}

double kernel_eval(const Kernel& k, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("kernel_eval: dimension mismatch");
  return k(x, y);
}

Eigen::MatrixXd gram(const Kernel& k, const ParticleCloud& pts) {
  const auto n = static_cast<std::ptrdiff_t>(pts.size());
  Eigen::MatrixXd g(n, n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = i; j < n; ++j) g(i, j) = k(pts.point(i), pts.point(j));
  for (std::ptrdiff_t i = 0; i < n; ++i)
    for (std::ptrdiff_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Eigen::MatrixXd gram_reference(const Kernel& k, const ParticleCloud& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = k(pts.point(i), pts.point(j));
  return g;
}

double cpd_quadratic_form(const Kernel& k, const ParticleCloud& pts, std::span<const double> weights) {
  if (weights.size() != pts.size()) throw std::invalid_argument("cpd_quadratic_form: weight count mismatch");
  double total = 0.0, mass = 0.0;
  for (double a : weights) {
    total += a;
    mass += std::abs(a);
  }
  if (std::abs(total) > 1e-12 * mass) throw std::invalid_argument("cpd_quadratic_form: weights must sum to zero");
  double form = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (weights[i] == 0.0) continue;
    form += weights[i] * weights[i] * k(pts.point(i), pts.point(i));
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      form += 2.0 * weights[i] * weights[j] * k(pts.point(i), pts.point(j));
  }
  return form;
}

std::optional<Counterexample> cpd_falsify(const std::function<double(double)>& phi, int d, int trials,
                                          std::mt19937_64& rng) {
  if (d < 1) throw std::invalid_argument("cpd_falsify: d must be >= 1");
  constexpr double threshold = -1e-8;
  std::uniform_int_distribution<int> count(3, 12);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> box(0.2, 3.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int t = 0; t < trials; ++t) {
    ParticleCloud pts;
    if (t % 2 == 0) {
      const int n = count(rng);
      const double half_width = box(rng);
      pts = ParticleCloud(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
      for (double& c : pts.coords()) c = half_width * unit(rng);
    } else {
      pts = lattice_patch(d, rng);
    }
    MinDirection best = min_zero_sum_direction(radial_gram(phi, pts));
    if (t % 2 == 0) {
      double step = 0.1;
      for (int it = 0; it < 40 && best.value >= threshold; ++it) {
        ParticleCloud trial = pts;
        for (double& c : trial.coords()) c += step * gauss(rng);
        MinDirection cand = min_zero_sum_direction(radial_gram(phi, trial));
        if (cand.value < best.value) {
          pts = std::move(trial);
          best = std::move(cand);
        } else {
          step *= 0.9;
        }
      }
    }
    if (best.value < threshold) {
      // Recompute the form directly from the weights rather than trusting
      // the eigenvalue.
      double form = 0.0, total = 0.0, mass = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        total += best.weights(static_cast<Eigen::Index>(i));
        mass += std::abs(best.weights(static_cast<Eigen::Index>(i)));
      }
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j)
          form += best.weights(static_cast<Eigen::Index>(i)) * best.weights(static_cast<Eigen::Index>(j)) *
                  phi(distance(pts.point(i), pts.point(j)));
      if (form < threshold && std::abs(total) <= 1e-12 * mass) {
        Counterexample ce;
        ce.points = std::move(pts);
        ce.weights.assign(best.weights.data(), best.weights.data() + best.weights.size());
        ce.form = form;
        ce.trial = t;
        return ce;
      }
    }
  }
  return std::nullopt;
}

}  // namespace sndflow
