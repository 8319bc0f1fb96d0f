#include "sndflow/datasets.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

namespace sndflow {

namespace {

void require_positive(int n, const char* what) {
  if (n < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

void add_circle(std::vector<double>& coords, double cx, double cy, double radius, int n) {
  for (int j = 0; j < n; ++j) {
    const double a = 2.0 * std::numbers::pi * j / n;
    coords.push_back(cx + radius * std::cos(a));
    coords.push_back(cy + radius * std::sin(a));
  }
}

}  // namespace

ParticleCloud gen_three_rings(int n_per_circle) {
  require_positive(n_per_circle, "points per circle");
  std::vector<double> coords;
  for (double cx : {-2.5, 0.0, 2.5}) add_circle(coords, cx, 0.0, 1.0, n_per_circle);
  return ParticleCloud(2, std::move(coords));
}

ParticleCloud gen_annulus(int n_per_circle) {
  require_positive(n_per_circle, "points per circle");
  std::vector<double> coords;
  add_circle(coords, 0.0, 0.0, 1.0, n_per_circle);
  add_circle(coords, 0.0, 0.0, 0.3, n_per_circle);
  return ParticleCloud(2, std::move(coords));
}

ParticleCloud gen_bananas(int n_per_cluster, std::uint64_t seed) {
  require_positive(n_per_cluster, "points per cluster");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> jitter(0.0, 0.05);
  std::vector<double> coords;
  for (double k : {-1.0, 1.0}) {
    for (int j = 0; j < n_per_cluster; ++j) {
      const double s = n_per_cluster == 1 ? 0.0 : -1.0 + 2.0 * j / (n_per_cluster - 1);
      const double ex = jitter(rng);
      const double ey = jitter(rng);
      coords.push_back(k * (s * s - 1.0) - k + ex);
      coords.push_back(s + ey);
    }
  }
  return ParticleCloud(2, std::move(coords));
}

ParticleCloud gen_init_gaussian(int n, int d, double std, std::uint64_t seed, std::vector<double> mean) {
  require_positive(n, "point count");
  require_positive(d, "dimension");
  if (!(std >= 0.0)) throw std::invalid_argument("standard deviation must be >= 0");
  if (mean.empty()) mean.assign(static_cast<std::size_t>(d), 0.0);
  if (mean.size() != static_cast<std::size_t>(d)) throw std::invalid_argument("mean has the wrong dimension");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ParticleCloud out(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) out(i, k) = mean[k] + std * gauss(rng);
  return out;
}

ParticleCloud gen_init_uniform(int n, int d, std::uint64_t seed) {
  require_positive(n, "point count");
  require_positive(d, "dimension");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ParticleCloud out(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
  for (double& c : out.coords()) c = unit(rng);
  return out;
}

ParticleCloud gen_gauss_mixture(int n, int d, int modes, std::uint64_t seed) {
  require_positive(n, "point count");
  require_positive(d, "dimension");
  require_positive(modes, "mode count");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 0.05);
  std::vector<double> means(static_cast<std::size_t>(modes) * d);
  for (double& c : means) c = unit(rng);
  ParticleCloud out(static_cast<std::size_t>(n), static_cast<std::size_t>(d));
  for (int i = 0; i < n; ++i) {
    const int mode = i % modes;
    for (int k = 0; k < d; ++k) out(i, k) = means[static_cast<std::size_t>(mode) * d + k] + gauss(rng);
  }
  return out;
}

ParticleCloud load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<double> coords;
  std::size_t d = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t cols = 0;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t");
      const auto last = cell.find_last_not_of(" \t");
      if (first == std::string::npos) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty field");
      const char* b = cell.data() + first;
      const char* e = cell.data() + last + 1;
      double v = 0.0;
      const auto res = std::from_chars(b, e, v);
      if (res.ec != std::errc() || res.ptr != e)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": not a number: " + std::string(b, e));
      coords.push_back(v);
      ++cols;
    }
    if (d == 0) d = cols;
    if (cols != d) throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(d) + " columns");
  }
  if (d == 0) throw std::runtime_error(path + ": no points");
  return ParticleCloud(d, std::move(coords));
}

void save_csv(const std::string& path, const ParticleCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << std::setprecision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << cloud(i, k);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sndflow
