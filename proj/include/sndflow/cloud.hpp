#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace sndflow {

/// N points in R^d stored row-major, each carrying weight 1/N.
template <class T>
class BasicCloud {
 public:
  using value_type = T;

  BasicCloud() = default;
  BasicCloud(std::size_t n, std::size_t d) : n_(n), d_(d), coords_(n * d, T(0)) {}
  BasicCloud(std::size_t d, std::vector<T> coords) : d_(d), coords_(std::move(coords)) {
    if (d == 0) throw std::invalid_argument("cloud dimension must be positive");
    if (coords_.size() % d != 0) throw std::invalid_argument("coordinate count not a multiple of d");
    n_ = coords_.size() / d;
  }

  std::size_t size() const { return n_; }
  std::size_t dim() const { return d_; }
  bool empty() const { return n_ == 0; }

  std::span<const T> point(std::size_t i) const { return {coords_.data() + i * d_, d_}; }
  std::span<T> point(std::size_t i) { return {coords_.data() + i * d_, d_}; }

  T& operator()(std::size_t i, std::size_t k) { return coords_[i * d_ + k]; }
  T operator()(std::size_t i, std::size_t k) const { return coords_[i * d_ + k]; }

  const std::vector<T>& coords() const { return coords_; }
  std::vector<T>& coords() { return coords_; }

  bool all_finite() const {
    for (T v : coords_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  template <class U>
  BasicCloud<U> cast() const {
    BasicCloud<U> out(n_, d_);
    for (std::size_t i = 0; i < coords_.size(); ++i) out.coords()[i] = static_cast<U>(coords_[i]);
    return out;
  }

  friend bool operator==(const BasicCloud& a, const BasicCloud& b) {
    return a.d_ == b.d_ && a.coords_ == b.coords_;
  }

 private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<T> coords_;
};

using ParticleCloud = BasicCloud<double>;

template <class X, class Y>
auto squared_distance(const X& x, const Y& y) {
  using T = std::remove_cvref_t<decltype(x[0])>;
  T acc = 0;
  for (std::size_t k = 0; k < std::size(x); ++k) {
    const T diff = x[k] - y[k];
    acc += diff * diff;
  }
  return acc;
}

template <class X, class Y>
auto distance(const X& x, const Y& y) {
  return std::sqrt(squared_distance(x, y));
}

}  // namespace sndflow
