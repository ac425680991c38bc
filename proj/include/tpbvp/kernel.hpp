#pragma once

/**
 * @file kernel.hpp
 * @brief Green's function of u''' + h = 0, u(0) = u'(0) = 0 with the
 * integral condition at t = 1, its weight rho(t), and the cone constants.
 *
 *     G(t,s) = 1/2 * s (1-t) (2t - ts - s)   for 0 <= s <= t <= 1
 *            = 1/2 * (1-s)^2 t^2              for 0 <= t <= s <= 1
 *
 * and for all t, s in [0,1]
 *
 *     rho(t) s (1-s)^2 <= G(t,s) <= s (1-s)^2,
 *     rho(t) = 1/2 min{t^2, t(1-t)}.
 */

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tpbvp/expr.hpp"
#include "tpbvp/grid.hpp"
#include "tpbvp/quadrature.hpp"

namespace tpbvp {

namespace detail {

template <std::floating_point Real>
void require_unit(Real x, const char* what) {
  if (!(x >= Real(0) && x <= Real(1))) {
    std::ostringstream os;
    os << what << " = " << static_cast<double>(x) << " lies outside [0,1]";
    throw std::domain_error(os.str());
  }
}

template <std::floating_point Real>
void require_theta(Real theta) {
  if (!(theta > Real(0) && theta < Real(0.5))) {
    std::ostringstream os;
    os << "theta = " << static_cast<double>(theta) << " must lie in (0, 1/2)";
    throw std::invalid_argument(os.str());
  }
}

}  // namespace detail

/// Branch of G used below the diagonal (s <= t).
template <std::floating_point Real>
constexpr Real green_branch_below(Real t, Real s) noexcept {
  return s * (1 - t) * (2 * t - t * s - s) / 2;
}

/// Branch of G used on and above the diagonal (t <= s).
template <std::floating_point Real>
constexpr Real green_branch_above(Real t, Real s) noexcept {
  return (1 - s) * (1 - s) * t * t / 2;
}

/// G(t,s); the diagonal t == s takes the t <= s branch.
template <std::floating_point Real>
Real green(Real t, Real s) {
  detail::require_unit(t, "t");
  detail::require_unit(s, "s");
  return t <= s ? green_branch_above(t, s) : green_branch_below(t, s);
}

template <std::floating_point Real>
Real rho(Real t) {
  detail::require_unit(t, "t");
  return t <= Real(0.5) ? t * t / 2 : t * (1 - t) / 2;
}

/// theta, mu = int t^2 g, alpha = int g, beta = theta^2 int_theta^{1-theta} g,
/// and the cone ratio gamma = (theta^2/2)(1-mu+beta)/(1-mu+alpha).
template <std::floating_point Real = double>
struct ConeConstants {
  Real theta{};
  Real mu{};
  Real alpha{};
  Real beta{};
  Real gamma{};

  /// 0 < mu < 1 on the weight g.
  bool h2_satisfied() const noexcept { return mu > Real(0) && mu < Real(1); }

  static Real cone_ratio(Real theta, Real mu, Real alpha, Real beta) {
    return theta * theta / 2 * (1 - mu + beta) / (1 - mu + alpha);
  }
};

/// Computes the cone constants of g by quadrature. A violated 0 < mu < 1 is
/// reported through h2_satisfied() rather than thrown; g < 0 at any
/// quadrature node is a hard error.
template <std::floating_point Real = double>
ConeConstants<Real> cone_constants(const ExprAst& g, Real theta,
                                   const QuadratureRule<Real>& rule = QuadratureRule<Real>::gauss_legendre()) {
  detail::require_theta(theta);
  auto checked_g = [&](Real t) {
    const Real v = g.template eval<Real>(t);
    if (v < Real(0)) {
      std::ostringstream os;
      os << "g(" << static_cast<double>(t) << ") = " << static_cast<double>(v) << " is negative";
      throw std::domain_error(os.str());
    }
    return v;
  };
  checked_g(Real(0));
  checked_g(Real(1));
  ConeConstants<Real> c;
  c.theta = theta;
  c.mu = integrate([&](Real t) { return t * t * checked_g(t); }, Real(0), Real(1), rule);
  c.alpha = integrate(checked_g, Real(0), Real(1), rule);
  c.beta = theta * theta * integrate(checked_g, theta, 1 - theta, rule);
  c.gamma = ConeConstants<Real>::cone_ratio(theta, c.mu, c.alpha, c.beta);
  return c;
}

/// Worst slack and violation count of one sampled inequality lhs <= rhs;
/// slack = rhs - lhs.
template <std::floating_point Real = double>
struct BoundCheck {
  Real worst_slack = std::numeric_limits<Real>::infinity();
  Real worst_t{};
  Real worst_s{};
  std::size_t violations = 0;
  std::size_t checked = 0;

  void record(Real slack, Real t, Real s, Real tolerance) {
    ++checked;
    if (slack < worst_slack) {
      worst_slack = slack;
      worst_t = t;
      worst_s = s;
    }
    if (slack < -tolerance) ++violations;
  }
};

template <std::floating_point Real = double>
struct KernelBoundReport {
  std::size_t samples{};
  Real theta{};
  Real tolerance{};
  BoundCheck<Real> nonnegative;   // 0 <= G
  BoundCheck<Real> lower_rho;     // rho(t) s(1-s)^2 <= G
  BoundCheck<Real> upper;         // G <= s(1-s)^2
  BoundCheck<Real> lower_theta;   // theta^2/2 s(1-s)^2 <= G on [theta, 1-theta] x [0,1]
  Real diagonal_gap{};            // max |below(t,t) - above(t,t)|

  std::size_t violations() const noexcept {
    return nonnegative.violations + lower_rho.violations + upper.violations + lower_theta.violations;
  }
};

/// Exhaustive check of the kernel bounds on a samples x samples uniform grid.
template <std::floating_point Real = double>
KernelBoundReport<Real> verify_kernel_bounds(std::size_t samples, Real theta, Real tolerance = Real(1e-14)) {
  if (samples < 4) throw std::invalid_argument("verify_kernel_bounds: samples must be >= 4");
  detail::require_theta(theta);
  KernelBoundReport<Real> rep;
  rep.samples = samples;
  rep.theta = theta;
  rep.tolerance = tolerance;
  const Real half_theta_sq = theta * theta / 2;
  for (std::size_t i = 0; i < samples; ++i) {
    const Real t = GridFunction<Real>::node(i, samples);
    const Real r = rho(t);
    const bool in_band = t >= theta && t <= 1 - theta;
    rep.diagonal_gap = std::max(rep.diagonal_gap, std::abs(green_branch_below(t, t) - green_branch_above(t, t)));
    for (std::size_t j = 0; j < samples; ++j) {
      const Real s = GridFunction<Real>::node(j, samples);
      const Real gts = green(t, s);
      const Real envelope = s * (1 - s) * (1 - s);
      rep.nonnegative.record(gts, t, s, tolerance);
      rep.lower_rho.record(gts - r * envelope, t, s, tolerance);
      rep.upper.record(envelope - gts, t, s, tolerance);
      if (in_band) rep.lower_theta.record(gts - half_theta_sq * envelope, t, s, tolerance);
    }
  }
  return rep;
}

}  // namespace tpbvp
