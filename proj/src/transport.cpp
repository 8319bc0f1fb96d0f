#include "sndflow/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sndflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> cost_matrix(const ParticleCloud& mu, const ParticleCloud& nu) {
  std::vector<double> c(mu.size() * nu.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j) c[i * nu.size() + j] = squared_distance(mu.point(i), nu.point(j));
  return c;
}

// Successive shortest paths on the bipartite transportation network.
double transport_cost(const std::vector<double>& c, int n, int m) {
  const long long total = std::lcm(static_cast<long long>(n), static_cast<long long>(m));
  std::vector<long long> supply(n, total / n), demand(m, total / m);
  std::vector<long long> flow(static_cast<std::size_t>(n) * m, 0);
  std::vector<double> pot_x(n, 0.0), pot_y(m, 0.0);
  std::vector<double> dist_x(n), dist_y(m);
  std::vector<int> prev_of_y(m), prev_of_x(n);
  std::vector<char> done_x(n), done_y(m);
  long long remaining = total;

  while (remaining > 0) {
    std::fill(dist_x.begin(), dist_x.end(), kInf);
    std::fill(dist_y.begin(), dist_y.end(), kInf);
    std::fill(done_x.begin(), done_x.end(), 0);
    std::fill(done_y.begin(), done_y.end(), 0);
    std::fill(prev_of_x.begin(), prev_of_x.end(), -1);
    for (int i = 0; i < n; ++i)
      if (supply[i] > 0) dist_x[i] = 0.0;

    int sink = -1;
    for (;;) {
      double best = kInf;
      int node = -1;
      bool is_x = true;
      for (int i = 0; i < n; ++i)
        if (!done_x[i] && dist_x[i] < best) best = dist_x[i], node = i, is_x = true;
      for (int j = 0; j < m; ++j)
        if (!done_y[j] && dist_y[j] < best) best = dist_y[j], node = j, is_x = false;
      if (node < 0) break;
      if (is_x) {
        done_x[node] = 1;
        for (int j = 0; j < m; ++j) {
          if (done_y[j]) continue;
          const double nd = best + c[static_cast<std::size_t>(node) * m + j] + pot_x[node] - pot_y[j];
          if (nd < dist_y[j]) dist_y[j] = nd, prev_of_y[j] = node;
        }
      } else {
        done_y[node] = 1;
        if (demand[node] > 0) {
          sink = node;
          break;
        }
        for (int i = 0; i < n; ++i) {
          if (done_x[i] || flow[static_cast<std::size_t>(i) * m + node] == 0) continue;
          const double nd = best - c[static_cast<std::size_t>(i) * m + node] + pot_y[node] - pot_x[i];
          if (nd < dist_x[i]) dist_x[i] = nd, prev_of_x[i] = node;
        }
      }
    }
    if (sink < 0) throw std::runtime_error("w2_exact: transport network disconnected");

    const double reach = dist_y[sink];
    for (int i = 0; i < n; ++i) pot_x[i] += std::min(dist_x[i], reach);
    for (int j = 0; j < m; ++j) pot_y[j] += std::min(dist_y[j], reach);

    // Bottleneck along the alternating path ending at `sink`.
    long long push = demand[sink];
    int y = sink;
    int x = prev_of_y[y];
    for (;;) {
      const int back = prev_of_x[x];
      if (back < 0) break;
      push = std::min(push, flow[static_cast<std::size_t>(x) * m + back]);
      y = back;
      x = prev_of_y[y];
    }
    push = std::min(push, supply[x]);

    y = sink;
    x = prev_of_y[y];
    demand[sink] -= push;
    for (;;) {
      flow[static_cast<std::size_t>(x) * m + y] += push;
      const int back = prev_of_x[x];
      if (back < 0) break;
      flow[static_cast<std::size_t>(x) * m + back] -= push;
      y = back;
      x = prev_of_y[y];
    }
    supply[x] -= push;
    remaining -= push;
  }

  double cost = 0.0;
  for (std::size_t e = 0; e < flow.size(); ++e)
    if (flow[e] > 0) cost += static_cast<double>(flow[e]) * c[e];
  return cost / static_cast<double>(total);
}

}  // namespace

std::vector<int> solve_assignment(const std::vector<double>& cost, int n) {
  // Rows/columns are 1-based inside; index 0 is the virtual start column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) minv[j] = cur, way[j] = j0;
        if (minv[j] < delta) delta = minv[j], j1 = j;
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double w2_exact(const ParticleCloud& mu, const ParticleCloud& nu) {
  if (mu.empty() || nu.empty()) throw std::invalid_argument("w2_exact: empty cloud");
  if (mu.dim() != nu.dim()) throw std::invalid_argument("w2_exact: dimension mismatch");
  const auto c = cost_matrix(mu, nu);
  // an overflowed cost would stall the solvers; every coupling pays it anyway
  if (!std::all_of(c.begin(), c.end(), [](double v) { return std::isfinite(v); })) return kInf;
  const int n = static_cast<int>(mu.size());
  const int m = static_cast<int>(nu.size());
  if (n == m) {
    const auto match = solve_assignment(c, n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += c[static_cast<std::size_t>(i) * n + match[i]];
    return std::sqrt(std::max(0.0, total / n));
  }
  return std::sqrt(std::max(0.0, transport_cost(c, n, m)));
}

double w2_1d(const ParticleCloud& mu, const ParticleCloud& nu) {
  if (mu.dim() != 1 || nu.dim() != 1) throw std::invalid_argument("w2_1d: clouds must be one-dimensional");
  if (mu.size() != nu.size()) throw std::invalid_argument("w2_1d: sizes must match");
  if (mu.empty()) throw std::invalid_argument("w2_1d: empty cloud");
  auto a = mu.coords();
  auto b = nu.coords();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(total / static_cast<double>(a.size()));
}

}  // namespace sndflow
