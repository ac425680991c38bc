#pragma once

/**
 * @file nonlinear.hpp
 * @brief Positive fixed points of u = Au.
 *
 * Two independent routes:
 *  - picard_solve iterates u <- (1-w) u + w Au on the Green's-function
 *    representation. Steps start undamped (w = 1) and switch permanently to
 *    the configured damping the first time ||Au - u|| fails to shrink.
 *  - newton_collocation discretizes u''' + f(u) = 0 directly with
 *    finite-difference stencils (see diagnostics.hpp) and solves the
 *    nonlinear system by damped Newton with a forward-difference Jacobian.
 *
 * find_positive_solution sweeps initial guesses c t^2 (1-t) and discards
 * iterates that collapse onto the trivial solution u = 0.
 */

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tpbvp/classify.hpp"
#include "tpbvp/diagnostics.hpp"
#include "tpbvp/expr.hpp"
#include "tpbvp/greens_solver.hpp"
#include "tpbvp/grid.hpp"
#include "tpbvp/kernel.hpp"
#include "tpbvp/problem.hpp"
#include "tpbvp/quadrature.hpp"

namespace tpbvp {

enum class SolveMethod { picard, newton_collocation };

enum class SolveStatus {
  positive,           // converged, ||u|| >= floor, u > 0 on interior nodes
  trivial,            // converged to ||u|| < floor
  nonpositive,        // converged, but u changes sign
  budget_exhausted,
  diverged,
  singular_jacobian,
  damping_underflow,
  domain_error,
};

inline const char* to_string(SolveMethod m) {
  return m == SolveMethod::picard ? "picard" : "newton-collocation";
}

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::positive: return "positive";
    case SolveStatus::trivial: return "trivial";
    case SolveStatus::nonpositive: return "nonpositive";
    case SolveStatus::budget_exhausted: return "budget_exhausted";
    case SolveStatus::diverged: return "diverged";
    case SolveStatus::singular_jacobian: return "singular_jacobian";
    case SolveStatus::damping_underflow: return "damping_underflow";
    case SolveStatus::domain_error: return "domain_error";
  }
  return "?";
}

template <std::floating_point Real = double>
struct SolveReport {
  SolveMethod method = SolveMethod::picard;
  SolveStatus status = SolveStatus::budget_exhausted;
  std::string message;
  std::size_t iterations = 0;
  Real update_norm = std::numeric_limits<Real>::infinity();

  /// Present only for status == positive.
  std::optional<GridFunction<Real>> solution;

  // Diagnostics of the final iterate, filled whenever the method converged.
  Real norm{};
  OdeResidual<Real> ode{};
  BoundaryResiduals<Real> boundary{};
  Real cone_slack{};
  std::optional<Real> fixed_point_residual;  // ||Au - u||, Picard only
  Verdict verdict = Verdict::indeterminate;

  bool converged() const noexcept {
    return status == SolveStatus::positive || status == SolveStatus::trivial || status == SolveStatus::nonpositive;
  }
};

namespace detail {

template <std::floating_point Real>
void finish_report(SolveReport<Real>& rep, GridFunction<Real> u, const ProblemSpec<Real>& spec,
                   const ConeConstants<Real>& cone) {
  rep.norm = u.sup_norm();
  rep.ode = ode_residual(u, spec.f);
  rep.boundary = boundary_residuals(u, spec.g);
  rep.cone_slack = cone_slack(u, cone);
  if (rep.norm < spec.config.positivity_floor) {
    rep.status = SolveStatus::trivial;
    rep.message = "converged to the trivial solution";
    return;
  }
  bool positive = true;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] < Real(-1e-10)) positive = false;
    if (i > 0 && i + 1 < u.size() && !(u[i] > Real(0))) positive = false;
  }
  if (!positive) {
    rep.status = SolveStatus::nonpositive;
    rep.message = "converged to a solution that is not positive on (0,1)";
    return;
  }
  rep.status = SolveStatus::positive;
  rep.message = "converged";
  rep.solution = std::move(u);
}

template <std::floating_point Real>
void require_initial_guess(const GridFunction<Real>& u0, std::size_t n) {
  if (u0.size() != n) throw std::invalid_argument("initial guess grid size does not match the configured grid");
}

}  // namespace detail

/// Damped fixed-point iteration on the Green's-function operator.
template <std::floating_point Real = double>
SolveReport<Real> picard_solve(const ProblemSpec<Real>& spec, const GridFunction<Real>& u0) {
  spec.validate();
  const SolveConfig<Real>& cfg = spec.config;
  detail::require_initial_guess(u0, cfg.grid);
  const auto rule = spec.rule();
  const GreenOperator<Real> op(spec.g, cfg.grid, rule);
  const ConeConstants<Real> cone = cone_constants<Real>(spec.g, spec.theta, rule);

  SolveReport<Real> rep;
  rep.method = SolveMethod::picard;
  GridFunction<Real> u = u0;
  Real omega = 1;
  Real previous = std::numeric_limits<Real>::infinity();
  try {
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
      const GridFunction<Real> au = op.apply(u, spec.f);
      const Real residual = sup_distance(au, u);
      if (omega == Real(1) && residual >= previous) omega = cfg.omega;
      previous = residual;

      std::vector<Real> next(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) next[i] = (1 - omega) * u[i] + omega * au[i];
      rep.iterations = k;
      rep.update_norm = omega * residual;
      u = GridFunction<Real>(std::move(next));
      if (u.sup_norm() > cfg.divergence_bound) {
        rep.status = SolveStatus::diverged;
        rep.message = "iterates exceeded the divergence bound";
        return rep;
      }
      if (rep.update_norm < cfg.tol) {
        rep.fixed_point_residual = sup_distance(op.apply(u, spec.f), u);
        detail::finish_report(rep, std::move(u), spec, cone);
        return rep;
      }
    }
  } catch (const std::overflow_error& e) {
    rep.status = SolveStatus::diverged;
    rep.message = e.what();
    return rep;
  } catch (const std::domain_error& e) {
    // Also catches the GridFunction finiteness check on overflowing iterates.
    rep.status = SolveStatus::domain_error;
    rep.message = e.what();
    return rep;
  }
  rep.status = SolveStatus::budget_exhausted;
  rep.message = "iteration budget exhausted";
  return rep;
}

namespace detail {

/// Scaled collocation residual: rows are multiplied by h^3 (ODE rows) or
/// by h (the slope row) so that every row is O(u).
template <std::floating_point Real>
class CollocationSystem {
 public:
  CollocationSystem(const ProblemSpec<Real>& spec, std::size_t n)
      : f_(spec.f), n_(n), h_(Real(1) / static_cast<Real>(n - 1)), h3_(h_ * h_ * h_),
        weighted_g_(weighted_boundary_samples<Real>(spec.g, n)) {}

  std::size_t size() const noexcept { return n_; }

  /// Rows 0..n-2 depend on at most five consecutive unknowns.
  void local_rows(const std::vector<Real>& u, std::vector<Real>& r) const {
    r[0] = u[0];
    r[1] = (-3 * u[0] + 4 * u[1] - u[2]) / 2;
    for (std::size_t i = 2; i + 1 < n_; ++i) {
      Real acc = 0;
      if (i + 2 < n_) {
        for (std::size_t k = 0; k < 5; ++k) acc += static_cast<Real>(stencil::third_central[k]) * u[i - 2 + k];
      } else {
        for (std::size_t k = 0; k < 5; ++k) acc += static_cast<Real>(stencil::third_backward[k]) * u[i - 3 + k];
      }
      r[i] = acc + h3_ * eval_nonlinearity(f_, u[i]);
    }
  }

  /// First column touched by local row i; rows span window_start..+4.
  std::size_t window_start(std::size_t i) const noexcept {
    if (i < 2) return 0;
    if (i + 2 < n_) return i - 2;
    return i - 3;
  }
  std::size_t window_size(std::size_t i) const noexcept { return i == 0 ? 1 : (i == 1 ? 3 : 5); }

  /// Integral condition row u[n-1] - Simpson(g u).
  Real boundary_row(const std::vector<Real>& u) const {
    Real acc = 0;
    for (std::size_t j = 0; j < n_; ++j) acc += weighted_g_[j] * u[j];
    return u[n_ - 1] - acc;
  }

  void residual(const std::vector<Real>& u, std::vector<Real>& r) const {
    local_rows(u, r);
    r[n_ - 1] = boundary_row(u);
  }

  /// Forward-difference Jacobian. Local rows are differenced five columns
  /// at a time (columns congruent mod 5 never share a row window); the
  /// dense boundary row is differenced column by column.
  Eigen::SparseMatrix<Real> jacobian(const std::vector<Real>& u, const std::vector<Real>& r) const {
    std::vector<Eigen::Triplet<Real>> entries;
    entries.reserve(5 * n_ + n_);
    std::vector<Real> step(n_);
    for (std::size_t j = 0; j < n_; ++j) step[j] = Real(1e-7) * std::max(Real(1), std::abs(u[j]));

    std::vector<Real> shifted = u, rs(n_);
    for (std::size_t color = 0; color < 5; ++color) {
      for (std::size_t j = color; j < n_; j += 5) shifted[j] = u[j] + step[j];
      local_rows(shifted, rs);
      for (std::size_t i = 0; i + 1 < n_; ++i) {
        const std::size_t a = window_start(i), len = window_size(i);
        for (std::size_t j = a; j < a + len; ++j) {
          if (j % 5 != color) continue;
          const Real d = (rs[i] - r[i]) / step[j];
          if (d != Real(0)) entries.emplace_back(static_cast<int>(i), static_cast<int>(j), d);
        }
      }
      for (std::size_t j = color; j < n_; j += 5) shifted[j] = u[j];
    }

    const Real base = r[n_ - 1];
    for (std::size_t j = 0; j < n_; ++j) {
      shifted[j] = u[j] + step[j];
      const Real d = (boundary_row(shifted) - base) / step[j];
      shifted[j] = u[j];
      if (d != Real(0)) entries.emplace_back(static_cast<int>(n_ - 1), static_cast<int>(j), d);
    }

    Eigen::SparseMatrix<Real> jac(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
    jac.setFromTriplets(entries.begin(), entries.end());
    jac.makeCompressed();
    return jac;
  }

 private:
  const ExprAst& f_;
  std::size_t n_;
  Real h_;
  Real h3_;
  std::vector<Real> weighted_g_;
};

template <std::floating_point Real>
Real norm2(const std::vector<Real>& v) {
  Real acc = 0;
  for (Real x : v) acc += x * x;
  return std::sqrt(acc);
}

template <std::floating_point Real>
bool all_finite(const std::vector<Real>& v) {
  return std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); });
}

}  // namespace detail

/// Finite-difference collocation of u''' + f(u) = 0 with u(0) = 0, a
/// one-sided u'(0) = 0 and u(1) = Simpson(g u), solved by damped Newton.
template <std::floating_point Real = double>
SolveReport<Real> newton_collocation(const ProblemSpec<Real>& spec, const GridFunction<Real>& u0) {
  spec.validate();
  const SolveConfig<Real>& cfg = spec.config;
  detail::require_initial_guess(u0, cfg.grid);
  const std::size_t n = cfg.grid;
  const ConeConstants<Real> cone = cone_constants<Real>(spec.g, spec.theta, spec.rule());
  const detail::CollocationSystem<Real> sys(spec, n);

  SolveReport<Real> rep;
  rep.method = SolveMethod::newton_collocation;
  std::vector<Real> u(u0.values().begin(), u0.values().end());
  std::vector<Real> r(n), trial(n), rt(n);
  try {
    sys.residual(u, r);
  } catch (const std::domain_error& e) {
    rep.status = SolveStatus::domain_error;
    rep.message = e.what();
    return rep;
  }

  Eigen::SparseLU<Eigen::SparseMatrix<Real>, Eigen::COLAMDOrdering<int>> lu;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> rhs(static_cast<Eigen::Index>(n));
  for (std::size_t it = 1; it <= cfg.newton_max_iterations; ++it) {
    rep.iterations = it;
    Eigen::SparseMatrix<Real> jac;
    try {
      jac = sys.jacobian(u, r);
    } catch (const std::domain_error& e) {
      rep.status = SolveStatus::domain_error;
      rep.message = e.what();
      return rep;
    }
    lu.compute(jac);
    if (lu.info() != Eigen::Success) {
      rep.status = SolveStatus::singular_jacobian;
      rep.message = "Jacobian factorization failed";
      return rep;
    }
    for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = -r[i];
    const Eigen::Matrix<Real, Eigen::Dynamic, 1> delta = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !delta.allFinite()) {
      rep.status = SolveStatus::singular_jacobian;
      rep.message = "Newton step is not finite";
      return rep;
    }
    const Real step_norm = delta.cwiseAbs().maxCoeff();

    const Real merit = detail::norm2(r);
    Real lambda = 1;
    bool accepted = false;
    while (lambda >= Real(1e-10)) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + lambda * delta[static_cast<Eigen::Index>(i)];
      bool ok = false;
      try {
        sys.residual(trial, rt);
        ok = detail::all_finite(rt);
      } catch (const std::domain_error&) {
        ok = false;
      }
      // A step below the tolerance is taken unconditionally: at that size
      // the merit only measures roundoff.
      if (ok && (step_norm < cfg.tol || detail::norm2(rt) <= (1 - Real(1e-4) * lambda) * merit)) {
        accepted = true;
        break;
      }
      lambda /= 2;
    }
    if (!accepted) {
      rep.status = SolveStatus::damping_underflow;
      rep.message = "line search step fell below 1e-10";
      return rep;
    }
    u.swap(trial);
    r.swap(rt);
    rep.update_norm = lambda * step_norm;

    Real sup = 0;
    for (Real v : u) sup = std::max(sup, std::abs(v));
    if (sup > cfg.divergence_bound) {
      rep.status = SolveStatus::diverged;
      rep.message = "iterates exceeded the divergence bound";
      return rep;
    }
    if (rep.update_norm < cfg.tol) {
      detail::finish_report(rep, GridFunction<Real>(std::move(u)), spec, cone);
      return rep;
    }
  }
  rep.status = SolveStatus::budget_exhausted;
  rep.message = "Newton iteration budget exhausted";
  return rep;
}

/// One entry per (amplitude, method) tried by find_positive_solution.
template <std::floating_point Real = double>
struct SweepAttempt {
  Real amplitude{};
  SolveMethod method = SolveMethod::picard;
  SolveStatus status = SolveStatus::budget_exhausted;
  std::size_t iterations = 0;
  Real norm{};
  std::string message;
  bool accepted = false;
};

template <std::floating_point Real = double>
struct PositiveSolutionSearch {
  std::optional<SolveReport<Real>> report;  // first accepted solution
  std::vector<SweepAttempt<Real>> attempts;
  Verdict verdict = Verdict::indeterminate;

  bool found() const noexcept { return report.has_value(); }
};

template <std::floating_point Real = double>
GridFunction<Real> initial_guess(Real amplitude, std::size_t n) {
  return GridFunction<Real>::sample([&](Real t) { return amplitude * t * t * (1 - t); }, n);
}

/// Sweeps u0 = c t^2 (1-t) over the configured amplitudes, trying Picard
/// then Newton-collocation for each, and returns the first solution with
/// ||u|| >= floor, cone slack >= -1e-8 and ODE residual within the cap.
template <std::floating_point Real = double>
PositiveSolutionSearch<Real> find_positive_solution(const ProblemSpec<Real>& spec) {
  spec.validate();
  PositiveSolutionSearch<Real> out;
  try {
    out.verdict = classify_growth<Real>(spec.f).verdict;
  } catch (const LadderError&) {
    out.verdict = Verdict::indeterminate;
  }
  for (Real c : spec.config.amplitudes) {
    const GridFunction<Real> u0 = initial_guess(c, spec.config.grid);
    for (SolveMethod method : {SolveMethod::picard, SolveMethod::newton_collocation}) {
      SolveReport<Real> rep = method == SolveMethod::picard ? picard_solve(spec, u0) : newton_collocation(spec, u0);
      SweepAttempt<Real> a{c, method, rep.status, rep.iterations, rep.norm, rep.message, false};
      a.accepted = rep.status == SolveStatus::positive && rep.cone_slack >= Real(-1e-8) &&
                   rep.ode.sup <= spec.config.residual_cap;
      if (rep.status == SolveStatus::positive && !a.accepted)
        a.message = "rejected: cone slack or ODE residual outside limits";
      out.attempts.push_back(a);
      if (a.accepted) {
        rep.verdict = out.verdict;
        out.report = std::move(rep);
        return out;
      }
    }
  }
  return out;
}

}  // namespace tpbvp
