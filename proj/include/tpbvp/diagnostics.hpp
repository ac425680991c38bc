#pragma once

/**
 * @file diagnostics.hpp
 * @brief Finite-difference stencils on the uniform grid and the residual
 * diagnostics reported for every solution.
 *
 * Stencils (h = grid step):
 *   u'''(t_i)  ~ (u[i+2] - 2u[i+1] + 2u[i-1] - u[i-2]) / (2h^3),        2 <= i <= n-3
 *   u'''(t_i)  ~ (u[i-3]/2 - 3u[i-2] + 6u[i-1] - 5u[i] + 3u[i+1]/2) / h^3,  i = n-2
 *   u'(0)      ~ (-3u[0] + 4u[1] - u[2]) / (2h)
 * all second-order accurate.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tpbvp/expr.hpp"
#include "tpbvp/grid.hpp"
#include "tpbvp/quadrature.hpp"

namespace tpbvp {

namespace stencil {

/// Weights on offsets -2..2, already divided by 2; scale by 1/h^3.
inline constexpr std::array<double, 5> third_central{-0.5, 1.0, 0.0, -1.0, 0.5};
/// Weights on offsets -3..1; scale by 1/h^3.
inline constexpr std::array<double, 5> third_backward{0.5, -3.0, 6.0, -5.0, 1.5};

template <std::floating_point Real>
Real third_derivative(std::span<const Real> u, std::size_t i, Real h) {
  const std::size_t n = u.size();
  Real acc = 0;
  if (i >= 2 && i + 2 < n) {
    for (std::size_t k = 0; k < 5; ++k) acc += static_cast<Real>(third_central[k]) * u[i - 2 + k];
  } else {
    for (std::size_t k = 0; k < 5; ++k) acc += static_cast<Real>(third_backward[k]) * u[i - 3 + k];
  }
  return acc / (h * h * h);
}

template <std::floating_point Real>
Real first_derivative_at_zero(std::span<const Real> u, Real h) {
  return (-3 * u[0] + 4 * u[1] - u[2]) / (2 * h);
}

}  // namespace stencil

/// f(u) with roundoff-level negatives treated as 0.
template <std::floating_point Real>
Real eval_nonlinearity(const ExprAst& f, Real u) {
  if (u < Real(0) && u >= -Real(1e-12)) u = 0;
  return f.template eval<Real>(u);
}

template <std::floating_point Real = double>
struct BoundaryResiduals {
  Real value_at_zero{};       // |u(0)|
  Real slope_at_zero{};       // |one-sided u'(0)|
  Real integral_condition{};  // |u(1) - Simpson(g u)|

  Real max() const noexcept { return std::max({value_at_zero, slope_at_zero, integral_condition}); }
};

/// g sampled at the nodes of an n-point grid, multiplied by Simpson weights.
template <std::floating_point Real = double>
std::vector<Real> weighted_boundary_samples(const ExprAst& g, std::size_t n) {
  std::vector<Real> w = simpson_weights<Real>(n);
  for (std::size_t i = 0; i < n; ++i) w[i] *= g.template eval<Real>(GridFunction<Real>::node(i, n));
  return w;
}

template <std::floating_point Real>
BoundaryResiduals<Real> boundary_residuals(const GridFunction<Real>& u, std::span<const Real> weighted_g) {
  const auto v = u.values();
  BoundaryResiduals<Real> r;
  r.value_at_zero = std::abs(v[0]);
  r.slope_at_zero = std::abs(stencil::first_derivative_at_zero(v, u.step()));
  Real integral = 0;
  for (std::size_t i = 0; i < v.size(); ++i) integral += weighted_g[i] * v[i];
  r.integral_condition = std::abs(v.back() - integral);
  return r;
}

template <std::floating_point Real>
BoundaryResiduals<Real> boundary_residuals(const GridFunction<Real>& u, const ExprAst& g) {
  const auto w = weighted_boundary_samples<Real>(g, u.size());
  return boundary_residuals(u, std::span<const Real>(w));
}

template <std::floating_point Real = double>
struct OdeResidual {
  Real sup{};      // max_i |u'''(t_i) + f(u_i)| over nodes 2..n-2
  Real f_scale{};  // max_i |f(u_i)| over the same nodes
};

/// Interior residual of u''' + f(u) = 0 through the collocation stencils.
template <std::floating_point Real>
OdeResidual<Real> ode_residual(const GridFunction<Real>& u, const ExprAst& f) {
  if (u.size() < 7) throw std::invalid_argument("ode_residual: need at least 7 nodes");
  const auto v = u.values();
  const Real h = u.step();
  OdeResidual<Real> r;
  for (std::size_t i = 2; i + 1 < v.size(); ++i) {
    const Real fu = eval_nonlinearity(f, v[i]);
    r.sup = std::max(r.sup, std::abs(stencil::third_derivative(v, i, h) + fu));
    r.f_scale = std::max(r.f_scale, std::abs(fu));
  }
  return r;
}

}  // namespace tpbvp
