#pragma once

/**
 * @file grid.hpp
 * @brief Functions sampled on the uniform grid t_i = i/(n-1) over [0,1],
 * with piecewise-cubic interpolation between nodes.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tpbvp {

template <std::floating_point Real = double>
class GridFunction {
 public:
  /// n = values.size() must be odd and at least 3; all values finite.
  explicit GridFunction(std::vector<Real> values) : values_(std::move(values)) {
    if (values_.size() < 3 || values_.size() % 2 == 0)
      throw std::invalid_argument("GridFunction: node count must be odd and >= 3, got " +
                                  std::to_string(values_.size()));
    for (std::size_t i = 0; i < values_.size(); ++i)
      if (!std::isfinite(values_[i]))
        throw std::domain_error("GridFunction: non-finite value at node " + std::to_string(i));
  }

  static GridFunction zeros(std::size_t n) { return GridFunction(std::vector<Real>(n, Real(0))); }

  template <class F>
  static GridFunction sample(F&& f, std::size_t n) {
    if (n < 3 || n % 2 == 0)
      throw std::invalid_argument("GridFunction: node count must be odd and >= 3, got " + std::to_string(n));
    std::vector<Real> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<Real>(f(node(i, n)));
    return GridFunction(std::move(v));
  }

  static Real node(std::size_t i, std::size_t n) {
    // Exact at both ends; i/(n-1) rather than i*h avoids drift near t=1.
    return static_cast<Real>(i) / static_cast<Real>(n - 1);
  }

  std::size_t size() const noexcept { return values_.size(); }
  Real step() const noexcept { return Real(1) / static_cast<Real>(values_.size() - 1); }
  Real node(std::size_t i) const noexcept { return node(i, values_.size()); }
  Real operator[](std::size_t i) const noexcept { return values_[i]; }
  std::span<const Real> values() const noexcept { return values_; }

  Real sup_norm() const noexcept {
    Real m = 0;
    for (Real v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  Real min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }

 private:
  std::vector<Real> values_;
};

template <std::floating_point Real>
Real sup_distance(const GridFunction<Real>& a, const GridFunction<Real>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: grid sizes differ");
  Real m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Node window and Lagrange weights for interpolating at one point. For
/// n >= 4 the window holds the four nodes nearest the containing interval
/// (shifted inward at the ends); n == 3 falls back to the quadratic.
template <std::floating_point Real = double>
struct InterpolationStencil {
  std::size_t start = 0;
  std::size_t count = 0;
  std::array<Real, 4> weights{};

  Real apply(std::span<const Real> values) const noexcept {
    Real acc = 0;
    for (std::size_t k = 0; k < count; ++k) acc += weights[k] * values[start + k];
    return acc;
  }
};

template <std::floating_point Real = double>
InterpolationStencil<Real> interpolation_stencil(std::size_t n, Real s) {
  if (n < 3) throw std::invalid_argument("interpolation_stencil: need at least 3 nodes");
  if (!(s >= Real(0) && s <= Real(1)))
    throw std::domain_error("interpolation_stencil: point outside [0,1]");
  const Real scaled = s * static_cast<Real>(n - 1);
  const auto cell = std::min(static_cast<std::size_t>(scaled), n - 2);
  InterpolationStencil<Real> st;
  st.count = n >= 4 ? 4 : 3;
  if (st.count == 4)
    st.start = cell == 0 ? 0 : std::min(cell - 1, n - 4);
  else
    st.start = 0;
  // Local coordinate in units of the grid step relative to the window start.
  const Real x = scaled - static_cast<Real>(st.start);
  for (std::size_t k = 0; k < st.count; ++k) {
    Real w = 1;
    for (std::size_t m = 0; m < st.count; ++m)
      if (m != k) w *= (x - static_cast<Real>(m)) / (static_cast<Real>(k) - static_cast<Real>(m));
    st.weights[k] = w;
  }
  return st;
}

template <std::floating_point Real>
Real interpolate(const GridFunction<Real>& u, Real s) {
  return interpolation_stencil<Real>(u.size(), s).apply(u.values());
}

/// Resamples u onto an m-node grid by piecewise-cubic interpolation.
template <std::floating_point Real>
GridFunction<Real> resample(const GridFunction<Real>& u, std::size_t m) {
  return GridFunction<Real>::sample([&](Real t) { return interpolate(u, t); }, m);
}

}  // namespace tpbvp
