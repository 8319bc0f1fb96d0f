#include "sndflow/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sndflow {

namespace {

// Simplex vertex p (0 <= p <= d) has Helmert coordinates
//   h_k[p] = 1/sqrt(k(k+1)) for p < k, -k/sqrt(k(k+1)) for p == k, 0 for p > k,
// k = 1..d, scaled by sqrt((d+1)/d) to unit length.
double helmert_scale(int d) { return std::sqrt((d + 1.0) / d); }

// out(i, p) = <y_i, v_p> for all d+1 vertices in O(d) per row.
Eigen::MatrixXd simplex_project(const Eigen::MatrixXd& y) {
  const int d = static_cast<int>(y.cols());
  const double scale = helmert_scale(d);
  Eigen::MatrixXd out(y.rows(), d + 1);
  std::vector<double> inv(d + 1);
  for (int k = 1; k <= d; ++k) inv[k] = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    double suffix = 0.0;  // sum_{k > p} y_k inv_k
    for (int p = d; p >= 0; --p) {
      const double own = p >= 1 ? -p * y(i, p - 1) * inv[p] : 0.0;
      out(i, p) = scale * (suffix + own);
      if (p >= 1) suffix += y(i, p - 1) * inv[p];
    }
  }
  return out;
}

// out(i, :) = sum_p s(i, p) v_p in O(d) per row.
Eigen::MatrixXd simplex_combine(const Eigen::MatrixXd& s, int d) {
  const double scale = helmert_scale(d);
  Eigen::MatrixXd out(s.rows(), d);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    double prefix = s(i, 0);
    for (int k = 1; k <= d; ++k) {
      const double inv = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
      out(i, k - 1) = scale * inv * (prefix - k * s(i, k));
      prefix += s(i, k);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd random_rotation(int d, std::mt19937_64& rng) {
  if (d < 1) throw std::invalid_argument("random_rotation: d must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd a(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

SliceSet SliceSet::simplex(int d, bool antipodal) {
  if (d < 1) throw std::invalid_argument("simplex directions require d >= 1");
  SliceSet s;
  s.dim_ = d;
  s.structured_ = true;
  s.antipodal_ = antipodal;
  return s;
}

SliceSet SliceSet::from_directions(Eigen::MatrixXd directions) {
  if (directions.rows() == 0 || directions.cols() == 0)
    throw std::invalid_argument("SliceSet: empty direction matrix");
  for (Eigen::Index p = 0; p < directions.rows(); ++p)
    if (std::abs(directions.row(p).norm() - 1.0) > 1e-12)
      throw std::invalid_argument("SliceSet: directions must have unit norm");
  SliceSet s;
  s.dim_ = static_cast<int>(directions.cols());
  s.explicit_ = std::move(directions);
  return s;
}

SliceSet simplex_directions(int d) { return SliceSet::simplex(d); }

int SliceSet::count() const {
  if (!structured_) return static_cast<int>(explicit_.rows());
  return antipodal_ ? 2 * (dim_ + 1) : dim_ + 1;
}

SliceSet SliceSet::rotated(const Eigen::MatrixXd& q) const {
  if (q.rows() != dim_ || q.cols() != dim_) throw std::invalid_argument("SliceSet::rotated: bad matrix size");
  SliceSet s = *this;
  s.rotation_ = rotation_.size() == 0 ? q : Eigen::MatrixXd(q * rotation_);
  return s;
}

Eigen::MatrixXd SliceSet::directions() const {
  return project(Eigen::MatrixXd::Identity(dim_, dim_)).transpose();
}

Eigen::MatrixXd SliceSet::project(const Eigen::MatrixXd& pts) const {
  if (pts.cols() != dim_) throw std::invalid_argument("SliceSet::project: dimension mismatch");
  // <x, Q v> = <Q^T x, v>
  const Eigen::MatrixXd y = rotation_.size() == 0 ? pts : Eigen::MatrixXd(pts * rotation_);
  if (!structured_) return y * explicit_.transpose();
  Eigen::MatrixXd base = simplex_project(y);
  if (!antipodal_) return base;
  Eigen::MatrixXd out(y.rows(), 2 * (dim_ + 1));
  out << base, -base;
  return out;
}

Eigen::MatrixXd SliceSet::combine(const Eigen::MatrixXd& s) const {
  if (s.cols() != count()) throw std::invalid_argument("SliceSet::combine: slice count mismatch");
  Eigen::MatrixXd base;
  if (!structured_) {
    base = s * explicit_;
  } else if (antipodal_) {
    const Eigen::Index half = dim_ + 1;
    base = simplex_combine(s.leftCols(half) - s.rightCols(half), dim_);
  } else {
    base = simplex_combine(s, dim_);
  }
  if (rotation_.size() == 0) return base;
  return base * rotation_.transpose();
}

std::vector<double> onedsum_dense(std::span<const double> xs, std::span<const double> weights,
                                  std::span<const double> ys, const SlicedDerivative& g) {
  if (xs.size() != weights.size()) throw std::invalid_argument("onedsum: weight count mismatch");
  std::vector<double> out(ys.size(), 0.0);
  for (std::size_t m = 0; m < ys.size(); ++m) {
    double acc = 0.0;
    for (std::size_t n = 0; n < xs.size(); ++n) acc += weights[n] * g(ys[m] - xs[n]);
    out[m] = acc;
  }
  return out;
}

std::vector<double> onedsum_sorted(std::span<const double> xs, std::span<const double> weights,
                                   std::span<const double> ys, const SlicedDerivative& g) {
  if (xs.size() != weights.size()) throw std::invalid_argument("onedsum: weight count mismatch");
  if (!std::is_sorted(xs.begin(), xs.end())) throw std::invalid_argument("onedsum_sorted: xs must be sorted");
  const std::size_t n = xs.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + weights[i];
  const double w = g.window();
  const double slope = g.outer_slope();

  std::vector<double> out(ys.size());
  for (std::size_t m = 0; m < ys.size(); ++m) {
    const double y = ys[m];
    // x < y - w gives y - x > w, x > y + w gives y - x < -w
    const auto lo = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), y - w) - xs.begin());
    const auto hi = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), y + w) - xs.begin());
    double acc = slope * (prefix[lo] - (prefix[n] - prefix[hi]));
    for (std::size_t i = lo; i < hi; ++i) acc += weights[i] * g(y - xs[i]);
    out[m] = acc;
  }
  return out;
}

Eigen::MatrixXd sliced_grad_sum(const SlicedDerivative& f_d1, const SliceSet& slices,
                                const Eigen::MatrixXd& queries, const Eigen::MatrixXd& sources,
                                std::span<const double> weights, const SlicedSumOptions& opts) {
  if (queries.cols() != slices.dim() || sources.cols() != slices.dim())
    throw std::invalid_argument("sliced_grad_sum: dimension mismatch");
  if (static_cast<std::size_t>(sources.rows()) != weights.size())
    throw std::invalid_argument("sliced_grad_sum: weight count mismatch");
  const Eigen::MatrixXd px = slices.project(sources);
  const Eigen::MatrixXd py = slices.project(queries);
  const auto P = static_cast<std::ptrdiff_t>(slices.count());
  const auto n = static_cast<std::size_t>(sources.rows());
  const auto m = static_cast<std::size_t>(queries.rows());
  const bool dense = n + m < opts.dense_threshold;

  Eigen::MatrixXd s(queries.rows(), P);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < P; ++p) {
    std::vector<double> xs(n), ws(n), ys(m);
    for (std::size_t i = 0; i < m; ++i) ys[i] = py(static_cast<Eigen::Index>(i), p);
    if (dense) {
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = px(static_cast<Eigen::Index>(i), p);
        ws[i] = weights[i];
      }
    } else {
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return px(static_cast<Eigen::Index>(a), p) < px(static_cast<Eigen::Index>(b), p);
      });
      for (std::size_t i = 0; i < n; ++i) {
        xs[i] = px(static_cast<Eigen::Index>(order[i]), p);
        ws[i] = weights[order[i]];
      }
    }
    // sum_n w_n f'(x_n - y) = -sum_n w_n f'(y - x_n) for odd f'
    const std::vector<double> col = dense ? onedsum_dense(xs, ws, ys, f_d1) : onedsum_sorted(xs, ws, ys, f_d1);
    for (std::size_t i = 0; i < m; ++i) s(static_cast<Eigen::Index>(i), p) = -col[i];
  }
  return slices.combine(s) / static_cast<double>(P);
}

Eigen::MatrixXd to_matrix(const ParticleCloud& cloud) {
  Eigen::MatrixXd out(cloud.size(), cloud.dim());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    for (std::size_t k = 0; k < cloud.dim(); ++k) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = cloud(i, k);
  return out;
}

}  // namespace sndflow
