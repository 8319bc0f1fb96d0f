#include "sndflow/flow.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "sndflow/kernels.hpp"
#include "sndflow/mmd.hpp"
#include "sndflow/transport.hpp"

namespace sndflow {

namespace {

template <class T>
void check_shapes(const BasicCloud<T>& state, const BasicCloud<T>& target) {
  if (state.empty() || target.empty()) throw std::invalid_argument("flow_step: empty cloud");
  if (state.dim() != target.dim()) throw std::invalid_argument("flow_step: dimension mismatch");
}

template <class T>
void step_row(const RadialProfile& profile, const BasicCloud<T>& state, const BasicCloud<T>& target, T tau,
              std::size_t i, T* rep, T* att, BasicCloud<T>& out) {
  const std::size_t d = state.dim();
  const T* xi = state.point(i).data();
  std::fill(rep, rep + d, T(0));
  std::fill(att, att + d, T(0));
  const auto accumulate = [&](const BasicCloud<T>& cloud, T* acc) {
    const T* base = cloud.coords().data();
    for (std::size_t n = 0; n < cloud.size(); ++n) {
      const T* xn = base + n * d;
      T sq = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const T diff = xi[k] - xn[k];
        sq += diff * diff;
      }
      const T r = profile.signed_ratio(std::sqrt(sq));
      for (std::size_t k = 0; k < d; ++k) acc[k] += (xi[k] - xn[k]) * r;
    }
  };
  accumulate(state, rep);
  accumulate(target, att);
  const T inv_n = T(1) / static_cast<T>(state.size());
  const T inv_m = T(1) / static_cast<T>(target.size());
  T* xo = out.point(i).data();
  for (std::size_t k = 0; k < d; ++k) xo[k] = xi[k] - tau * (rep[k] * inv_n - att[k] * inv_m);
}

template <class T>
void prepare_out(const BasicCloud<T>& state, BasicCloud<T>& out) {
  if (&out == &state) throw std::invalid_argument("flow_step: output must not alias the state");
  if (out.size() != state.size() || out.dim() != state.dim()) out = BasicCloud<T>(state.size(), state.dim());
}

}  // namespace

void FlowConfig::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("flow config: tau must be positive");
  if (iters < 0) throw std::invalid_argument("flow config: iters must be non-negative");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end()))
    throw std::invalid_argument("flow config: checkpoints must be sorted");
  for (long c : checkpoints)
    if (c < 0 || c > iters) throw std::invalid_argument("flow config: checkpoint outside [0, iters]");
  if (summation.mode == Summation::Mode::sliced && summation.directions < 0)
    throw std::invalid_argument("flow config: negative direction count");
}

template <class T>
void flow_step(const RadialProfile& profile, const BasicCloud<T>& state, const BasicCloud<T>& target, T tau,
               BasicCloud<T>& out) {
  check_shapes(state, target);
  prepare_out(state, out);
  const auto n = static_cast<std::ptrdiff_t>(state.size());
  const std::size_t d = state.dim();
#pragma omp parallel
  {
    std::vector<T> rep(d), att(d);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i)
      step_row(profile, state, target, tau, static_cast<std::size_t>(i), rep.data(), att.data(), out);
  }
}

template <class T>
void flow_step_reference(const RadialProfile& profile, const BasicCloud<T>& state, const BasicCloud<T>& target,
                         T tau, BasicCloud<T>& out) {
  check_shapes(state, target);
  prepare_out(state, out);
  std::vector<T> rep(state.dim()), att(state.dim());
  for (std::size_t i = 0; i < state.size(); ++i) step_row(profile, state, target, tau, i, rep.data(), att.data(), out);
}

template void flow_step<float>(const RadialProfile&, const BasicCloud<float>&, const BasicCloud<float>&, float,
                               BasicCloud<float>&);
template void flow_step<double>(const RadialProfile&, const BasicCloud<double>&, const BasicCloud<double>&, double,
                                BasicCloud<double>&);
template void flow_step_reference<float>(const RadialProfile&, const BasicCloud<float>&, const BasicCloud<float>&,
                                         float, BasicCloud<float>&);
template void flow_step_reference<double>(const RadialProfile&, const BasicCloud<double>&,
                                          const BasicCloud<double>&, double, BasicCloud<double>&);

ParticleCloud flow_step(const RadialProfile& profile, const ParticleCloud& state, const ParticleCloud& target,
                        double tau) {
  ParticleCloud out;
  flow_step<double>(profile, state, target, tau, out);
  if (!out.all_finite()) throw FlowAborted(0, "flow_step produced a non-finite state (step too large?)");
  return out;
}

std::vector<double> dirac_step(const RadialProfile& profile, std::span<const double> x, std::span<const double> y,
                               double tau) {
  if (x.size() != y.size()) throw std::invalid_argument("dirac_step: dimension mismatch");
  const double r = profile.signed_ratio(distance(x, y));
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + tau * ((x[k] - y[k]) * r);
  return out;
}

SlicedDerivative sliced_derivative(const RadialProfile& profile, int d) {
  switch (profile.kind()) {
    case ProfileKind::nd:
      return SlicedDerivative::abs(0.5 / cd_constant(d));
    case ProfileKind::snd:
      return SlicedDerivative::smoothed(profile.order(), profile.eps());
    case ProfileKind::gaussian:
      break;
  }
  throw std::invalid_argument("sliced summation is not available for the Gaussian kernel");
}

Eigen::MatrixXd sliced_velocity(const RadialProfile& profile, const SliceSet& slices, const Eigen::MatrixXd& state,
                                const Eigen::MatrixXd& target, std::size_t dense_threshold) {
  const Eigen::Index n = state.rows(), m = target.rows();
  Eigen::MatrixXd sources(n + m, state.cols());
  sources << state, target;
  std::vector<double> w(static_cast<std::size_t>(n + m));
  std::fill(w.begin(), w.begin() + n, -1.0 / static_cast<double>(n));
  std::fill(w.begin() + n, w.end(), 1.0 / static_cast<double>(m));
  const SlicedDerivative f = sliced_derivative(profile, static_cast<int>(state.cols()));
  return profile.kernel_sign() * sliced_grad_sum(f, slices, state, sources, w, {dense_threshold});
}

namespace {

template <class T>
Eigen::MatrixXd as_matrix(const BasicCloud<T>& c) {
  Eigen::MatrixXd out(c.size(), c.dim());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t k = 0; k < c.dim(); ++k)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = static_cast<double>(c(i, k));
  return out;
}

SliceSet make_slices(const Summation& sum, int d, std::mt19937_64& rng) {
  const int simplex_count = sum.antipodal ? 2 * (d + 1) : d + 1;
  if (sum.directions == 0 || sum.directions == simplex_count) {
    SliceSet base = SliceSet::simplex(d, sum.antipodal);
    return sum.rotate ? base.rotated(random_rotation(d, rng)) : base;
  }
  // Any other count: independent uniform directions.
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd dirs(sum.directions, d);
  for (int p = 0; p < sum.directions; ++p) {
    for (int k = 0; k < d; ++k) dirs(p, k) = gauss(rng);
    dirs.row(p).normalize();
  }
  return SliceSet::from_directions(std::move(dirs));
}

template <class T>
FlowTrace run_typed(const RadialProfile& profile, const ParticleCloud& init, const ParticleCloud& target,
                    const FlowConfig& cfg, const FlowCallback& metrics) {
  cfg.validate();
  if (init.empty() || target.empty()) throw std::invalid_argument("run_flow: empty cloud");
  if (init.dim() != target.dim()) throw std::invalid_argument("run_flow: dimension mismatch");
  const bool sliced = cfg.summation.mode == Summation::Mode::sliced;
  if (sliced) sliced_derivative(profile, static_cast<int>(init.dim()));  // reject unsupported kernels early

  const Kernel kernel(profile, KernelVariant::cpd);
  BasicCloud<T> state = init.cast<T>();
  const BasicCloud<T> target_t = target.cast<T>();
  const Eigen::MatrixXd target_m = as_matrix(target_t);
  BasicCloud<T> next(state.size(), state.dim());
  std::mt19937_64 rng(cfg.seed);
  const T tau = static_cast<T>(cfg.tau);
  const int d = static_cast<int>(init.dim());
  const SliceSet fixed = SliceSet::simplex(d, cfg.summation.antipodal);

  FlowTrace trace;
  double flow_ms = 0.0;
  auto record = [&](long iter) {
    const ParticleCloud snapshot = state.template cast<double>();
    FlowRecord r;
    r.iter = iter;
    r.time = cfg.tau * static_cast<double>(iter);
    r.mmd2 = mmd_squared(kernel, snapshot, target);
    r.w2 = cfg.compute_w2 ? w2_exact(snapshot, target) : std::numeric_limits<double>::quiet_NaN();
    r.wall_ms = flow_ms;
    trace.records.push_back(r);
    if (metrics) metrics(r, snapshot);
  };

  record(0);
  auto next_cp = std::upper_bound(cfg.checkpoints.begin(), cfg.checkpoints.end(), 0L);
  for (long k = 1; k <= cfg.iters; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    if (sliced) {
      const SliceSet slices = cfg.summation.rotate || cfg.summation.directions != 0
                                  ? make_slices(cfg.summation, d, rng)
                                  : fixed;
      const Eigen::MatrixXd v =
          sliced_velocity(profile, slices, as_matrix(state), target_m, cfg.summation.dense_threshold);
      for (std::size_t i = 0; i < state.size(); ++i)
        for (std::size_t c = 0; c < state.dim(); ++c)
          next(i, c) = state(i, c) - tau * static_cast<T>(v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)));
    } else {
      flow_step<T>(profile, state, target_t, tau, next);
    }
    std::swap(state, next);
    flow_ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (!state.all_finite())
      throw FlowAborted(k, "flow state became non-finite at iteration " + std::to_string(k) + " (step too large?)");
    bool due = k == cfg.iters;
    while (next_cp != cfg.checkpoints.end() && *next_cp <= k) {
      due = due || *next_cp == k;
      ++next_cp;
    }
    if (due) record(k);
  }
  trace.final_state = state.template cast<double>();
  return trace;
}

}  // namespace

FlowTrace run_flow(const RadialProfile& profile, const ParticleCloud& init, const ParticleCloud& target,
                   const FlowConfig& cfg, const FlowCallback& metrics) {
  if (cfg.precision == Precision::f32) return run_typed<float>(profile, init, target, cfg, metrics);
  return run_typed<double>(profile, init, target, cfg, metrics);
}

}  // namespace sndflow
