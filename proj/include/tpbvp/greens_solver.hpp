#pragma once

/**
 * @file greens_solver.hpp
 * @brief Integral representation of the linear problem
 *
 *     u''' + h = 0,  u(0) = u'(0) = 0,  u(1) = int_0^1 g(s) u(s) ds
 *
 * as u(t) = w(t) + t^2/(1-mu) int_0^1 g(tau) w(tau) dtau with the profile
 * w(x) = int_0^1 G(x,s) h(s) ds, and the nonlinear operator
 * (Au)(t) = same with h = f(u).
 *
 * The profile is evaluated through the separable form of G,
 *
 *     w(x) = 1/2 (1-x) [2x M1(x) - (1+x) M2(x)] + 1/2 x^2 N(x),
 *     M1 = int_0^x s h,  M2 = int_0^x s^2 h,  N = int_x^1 (1-s)^2 h,
 *
 * with cumulative moments swept over the merged, sorted set of grid nodes
 * and outer quadrature nodes. Each gap between consecutive points is one
 * panel of the reference rule, so the kink of G at s = x never falls
 * inside a panel and the whole profile costs one pass over h.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpbvp/expr.hpp"
#include "tpbvp/grid.hpp"
#include "tpbvp/kernel.hpp"
#include "tpbvp/quadrature.hpp"

namespace tpbvp {

/// Grid values below this are rejected before f is applied; values in
/// [negative_tolerance, 0) are treated as 0.
inline constexpr double negative_tolerance = 1e-12;

template <std::floating_point Real = double>
class GreenOperator {
 public:
  GreenOperator(const ExprAst& g, std::size_t n,
                const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre())
      : n_(n) {
    if (n < 3 || n % 2 == 0) throw std::invalid_argument("GreenOperator: grid size must be odd and >= 3");

    std::vector<Real> outer_x, outer_w;
    rule.for_each_node(Real(0), Real(1), [&](Real x, Real w) {
      outer_x.push_back(x);
      outer_w.push_back(w);
    });

    mu_ = 0;
    outer_gw_.resize(outer_x.size());
    for (std::size_t q = 0; q < outer_x.size(); ++q) {
      const Real gq = g.template eval<Real>(outer_x[q]);
      outer_gw_[q] = outer_w[q] * gq;
      mu_ += outer_w[q] * outer_x[q] * outer_x[q] * gq;
    }
    if (!(mu_ < Real(1))) {
      std::ostringstream os;
      os << "mu = " << static_cast<double>(mu_) << " >= 1: the integral representation is invalid";
      throw std::domain_error(os.str());
    }

    // Merge grid nodes and outer nodes into one ascending point set.
    std::vector<std::pair<Real, std::size_t>> tagged;  // (x, tag): tag < n grid node, else outer index + n
    tagged.reserve(n + outer_x.size());
    for (std::size_t i = 0; i < n; ++i) tagged.emplace_back(GridFunction<Real>::node(i, n), i);
    for (std::size_t q = 0; q < outer_x.size(); ++q) tagged.emplace_back(outer_x[q], n + q);
    std::stable_sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

    grid_index_.assign(n, 0);
    outer_index_.assign(outer_x.size(), 0);
    for (const auto& [x, tag] : tagged) {
      if (points_.empty() || x > points_.back()) points_.push_back(x);
      const std::size_t idx = points_.size() - 1;
      if (tag < n)
        grid_index_[tag] = idx;
      else
        outer_index_[tag - n] = idx;
    }

    const auto ref_nodes = rule.nodes();
    const auto ref_weights = rule.weights();
    per_gap_ = ref_nodes.size();
    for (std::size_t k = 0; k + 1 < points_.size(); ++k) {
      const Real a = points_[k];
      const Real width = points_[k + 1] - a;
      for (std::size_t m = 0; m < per_gap_; ++m) {
        sub_x_.push_back(a + width * ref_nodes[m]);
        sub_w_.push_back(width * ref_weights[m]);
      }
    }
    stencils_.reserve(sub_x_.size());
    for (Real s : sub_x_) stencils_.push_back(interpolation_stencil<Real>(n, std::clamp(s, Real(0), Real(1))));
  }

  std::size_t grid_size() const noexcept { return n_; }
  Real mu() const noexcept { return mu_; }
  /// Number of distinct points at which h is sampled per solve.
  std::size_t sample_count() const noexcept { return sub_x_.size(); }

  /// Solution of the linear problem for the source h(s), at the grid nodes.
  template <class H>
  GridFunction<Real> solve(H&& h) const {
    std::vector<Real> hv(sub_x_.size());
    for (std::size_t j = 0; j < sub_x_.size(); ++j) hv[j] = evaluate_source(h, sub_x_[j]);
    return solve_sampled(hv);
  }

  /// (Au) at the grid nodes, with u interpolated by piecewise cubics. The
  /// interpolant is clipped at 0 from below since f lives on [0, inf).
  GridFunction<Real> apply(const GridFunction<Real>& u, const ExprAst& f) const {
    if (u.size() != n_) throw std::invalid_argument("GreenOperator::apply: grid size mismatch");
    const auto v = u.values();
    for (std::size_t i = 0; i < n_; ++i) {
      if (v[i] < -Real(negative_tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "negative value u(" << static_cast<double>(u.node(i)) << ") = " << static_cast<double>(v[i])
           << " outside the domain of f";
        throw std::domain_error(os.str());
      }
    }
    std::vector<Real> hv(sub_x_.size());
    for (std::size_t j = 0; j < sub_x_.size(); ++j) {
      const Real us = std::max(Real(0), stencils_[j].apply(v));
      hv[j] = evaluate_source([&](Real) { return f.template eval<Real>(us); }, sub_x_[j]);
    }
    return solve_sampled(hv);
  }

 private:
  template <class H>
  static Real evaluate_source(H&& h, Real s) {
    Real value;
    try {
      value = static_cast<Real>(h(s));
    } catch (const IntegrandError&) {
      throw;
    } catch (const std::domain_error& e) {
      throw IntegrandError(static_cast<double>(s), e.what());
    }
    if (!std::isfinite(value)) {
      std::ostringstream os;
      os.precision(17);
      os << "source term is not finite at s = " << static_cast<double>(s);
      throw std::overflow_error(os.str());
    }
    return value;
  }

  GridFunction<Real> solve_sampled(const std::vector<Real>& hv) const {
    const std::size_t m = points_.size();
    std::vector<Real> m1(m, Real(0)), m2(m, Real(0)), tail(m, Real(0));
    for (std::size_t k = 0; k + 1 < m; ++k) {
      Real a1 = 0, a2 = 0;
      for (std::size_t j = k * per_gap_; j < (k + 1) * per_gap_; ++j) {
        const Real s = sub_x_[j];
        const Real wh = sub_w_[j] * hv[j];
        a1 += wh * s;
        a2 += wh * s * s;
      }
      m1[k + 1] = m1[k] + a1;
      m2[k + 1] = m2[k] + a2;
    }
    for (std::size_t k = m - 1; k-- > 0;) {
      Real a = 0;
      for (std::size_t j = k * per_gap_; j < (k + 1) * per_gap_; ++j) {
        const Real r = 1 - sub_x_[j];
        a += sub_w_[j] * hv[j] * r * r;
      }
      tail[k] = tail[k + 1] + a;
    }
    auto profile = [&](std::size_t k) {
      const Real x = points_[k];
      return (1 - x) * (2 * x * m1[k] - (1 + x) * m2[k]) / 2 + x * x * tail[k] / 2;
    };

    Real boundary = 0;
    for (std::size_t q = 0; q < outer_index_.size(); ++q) boundary += outer_gw_[q] * profile(outer_index_[q]);
    const Real coef = boundary / (1 - mu_);

    std::vector<Real> u(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      const Real t = GridFunction<Real>::node(i, n_);
      u[i] = profile(grid_index_[i]) + t * t * coef;
    }
    return GridFunction<Real>(std::move(u));
  }

  std::size_t n_;
  Real mu_{};
  std::vector<Real> outer_gw_;
  std::vector<Real> points_;
  std::vector<std::size_t> grid_index_;
  std::vector<std::size_t> outer_index_;
  std::size_t per_gap_ = 0;
  std::vector<Real> sub_x_;
  std::vector<Real> sub_w_;
  std::vector<InterpolationStencil<Real>> stencils_;
};

/// Solves u''' + h = 0 with the integral boundary condition; h is any
/// callable Real -> Real.
template <std::floating_point Real = double, class H>
GridFunction<Real> solve_linear(H&& h, const ExprAst& g, std::size_t n,
                                const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre()) {
  return GreenOperator<Real>(g, n, rule).solve(std::forward<H>(h));
}

template <std::floating_point Real = double>
GridFunction<Real> solve_linear(const ExprAst& h, const ExprAst& g, std::size_t n,
                                const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre()) {
  return GreenOperator<Real>(g, n, rule).solve([&](Real s) { return h.template eval<Real>(s); });
}

/// Source given on its own grid; sampled by piecewise-cubic interpolation.
template <std::floating_point Real = double>
GridFunction<Real> solve_linear(const GridFunction<Real>& h, const ExprAst& g, std::size_t n,
                                const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre()) {
  return GreenOperator<Real>(g, n, rule).solve([&](Real s) { return interpolate(h, s); });
}

template <std::floating_point Real = double>
GridFunction<Real> apply_operator(const GridFunction<Real>& u, const ExprAst& f, const ExprAst& g,
                                  const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre()) {
  return GreenOperator<Real>(g, u.size(), rule).apply(u, f);
}

/// Grid nodes inside [theta, 1-theta].
template <std::floating_point Real>
bool in_cone_band(Real t, Real theta) noexcept {
  const Real eps = 64 * std::numeric_limits<Real>::epsilon();
  return t >= theta - eps && t <= 1 - theta + eps;
}

/// min over grid nodes in [theta, 1-theta] of u minus gamma ||u||. A
/// nonnegative value certifies cone membership on the grid.
template <std::floating_point Real>
Real cone_slack(const GridFunction<Real>& u, const ConeConstants<Real>& c) {
  Real lowest = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (in_cone_band(u.node(i), c.theta)) lowest = std::min(lowest, u[i]);
  return lowest - c.gamma * u.sup_norm();
}

template <std::floating_point Real = double>
struct NormBoundReport {
  Real moment{};       // int_0^1 s (1-s)^2 h(s) ds
  Real norm{};         // ||u||
  Real band_min{};     // min of u over [theta, 1-theta]
  Real upper_bound{};  // (1-mu+alpha)/(1-mu) * moment
  Real lower_bound{};  // theta^2/2 (1-mu+beta)/(1-mu) * moment
  Real upper_slack{};  // upper_bound - norm
  Real lower_slack{};  // band_min - lower_bound
  Real tolerance{};

  bool passed() const noexcept { return upper_slack >= -tolerance && lower_slack >= -tolerance; }
};

/// Checks the a-priori sup-norm and band-minimum bounds of the linear
/// solution for a nonnegative source h.
template <std::floating_point Real = double, class H>
NormBoundReport<Real> norm_bound_check(H&& h, const ExprAst& g, Real theta, std::size_t n = 513,
                                       const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre(),
                                       Real tolerance = Real(1e-10)) {
  const ConeConstants<Real> c = cone_constants<Real>(g, theta, rule);
  GreenOperator<Real> op(g, n, rule);
  const GridFunction<Real> u = op.solve(h);
  NormBoundReport<Real> r;
  r.tolerance = tolerance;
  r.moment = integrate([&](Real s) { return s * (1 - s) * (1 - s) * static_cast<Real>(h(s)); }, Real(0), Real(1), rule);
  r.norm = u.sup_norm();
  r.band_min = std::numeric_limits<Real>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (in_cone_band(u.node(i), theta)) r.band_min = std::min(r.band_min, u[i]);
  r.upper_bound = (1 - c.mu + c.alpha) / (1 - c.mu) * r.moment;
  r.lower_bound = theta * theta / 2 * (1 - c.mu + c.beta) / (1 - c.mu) * r.moment;
  r.upper_slack = r.upper_bound - r.norm;
  r.lower_slack = r.band_min - r.lower_bound;
  return r;
}

template <std::floating_point Real = double>
NormBoundReport<Real> norm_bound_check(const ExprAst& h, const ExprAst& g, Real theta, std::size_t n = 513,
                                       const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre(),
                                       Real tolerance = Real(1e-10)) {
  return norm_bound_check<Real>([&](Real s) { return h.template eval<Real>(s); }, g, theta, n, rule, tolerance);
}

}  // namespace tpbvp
