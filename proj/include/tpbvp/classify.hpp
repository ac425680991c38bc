#pragma once

/**
 * @file classify.hpp
 * @brief Growth classification of f through f0 = lim_{u->0+} f(u)/u and
 * f_inf = lim_{u->inf} f(u)/u, and sampled checks of the standing
 * hypotheses on f and g.
 *
 * Limits are read off geometric ladders u = 10^-k (k = 1..12) and
 * u = 10^k (k = 0..8). Over the last `tail` rungs the ratio f(u)/u must move
 * monotonically toward the limit and either cross the threshold (1e-6 for
 * zero, 1e6 for infinity) or change by at least `min_decade_slope` decades
 * per rung, i.e. behave like a power law. Overflow of f counts as
 * evidence for infinity. Anything else is reported as a finite estimate.
 */

#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpbvp/expr.hpp"
#include "tpbvp/problem.hpp"
#include "tpbvp/quadrature.hpp"

namespace tpbvp {

enum class LimitKind { zero, infinity, finite };
enum class Verdict { superlinear, sublinear, indeterminate };

inline const char* to_string(LimitKind k) {
  switch (k) {
    case LimitKind::zero: return "zero";
    case LimitKind::infinity: return "infinity";
    case LimitKind::finite: return "finite";
  }
  return "?";
}

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::superlinear: return "superlinear";
    case Verdict::sublinear: return "sublinear";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

template <std::floating_point Real = double>
struct LimitEstimate {
  LimitKind kind = LimitKind::finite;
  Real value{};  // last ratio on the ladder; +inf after overflow
};

template <std::floating_point Real = double>
struct LadderPoint {
  Real u{};
  Real ratio{};
  bool overflow = false;
};

template <std::floating_point Real = double>
struct LadderOptions {
  int descending_decades = 12;
  int ascending_decades = 8;
  Real zero_threshold = Real(1e-6);
  Real infinity_threshold = Real(1e6);
  Real min_decade_slope = Real(0.25);
  std::size_t tail = 4;
};

/// Domain error of f somewhere on a ladder.
class LadderError : public std::domain_error {
 public:
  LadderError(double u, const std::string& cause)
      : std::domain_error(message(u, cause)), u_(u) {}
  double u() const noexcept { return u_; }

 private:
  static std::string message(double u, const std::string& cause) {
    std::ostringstream os;
    os.precision(17);
    os << "f failed at u = " << u << ": " << cause;
    return os.str();
  }
  double u_;
};

template <std::floating_point Real = double>
struct HypothesisReport {
  // f >= 0 sampled on [0, 100]; sampling cannot certify continuity.
  bool h1_passed = false;
  std::size_t h1_samples = 0;
  std::optional<Real> h1_witness;
  std::string h1_detail;
  static constexpr const char* h1_note = "sampled, not proven";

  // g >= 0 sampled on [0, 1] and 0 < mu < 1.
  bool h2_passed = false;
  Real mu{};
  bool g_nonnegative = false;
  std::optional<Real> h2_witness;
  std::string h2_detail;

  bool passed() const noexcept { return h1_passed && h2_passed; }
};

template <std::floating_point Real = double>
struct GrowthReport {
  LimitEstimate<Real> f0;
  LimitEstimate<Real> finf;
  Verdict verdict = Verdict::indeterminate;
  std::vector<LadderPoint<Real>> descending;
  std::vector<LadderPoint<Real>> ascending;
  std::optional<HypothesisReport<Real>> hypotheses;
};

namespace detail {

template <std::floating_point Real>
std::vector<LadderPoint<Real>> walk_ladder(const ExprAst& f, int first, int last, int direction) {
  std::vector<LadderPoint<Real>> pts;
  for (int k = first; k <= last; ++k) {
    const Real u = std::pow(Real(10), static_cast<Real>(direction * k));
    Real fu;
    try {
      fu = f.template eval<Real>(u);
    } catch (const EvalError& e) {
      throw LadderError(static_cast<double>(u), e.what());
    }
    LadderPoint<Real> p{u, fu / u, false};
    if (!std::isfinite(fu) || !std::isfinite(p.ratio)) {
      p.overflow = true;
      p.ratio = std::numeric_limits<Real>::infinity();
      pts.push_back(p);
      break;
    }
    pts.push_back(p);
  }
  return pts;
}

template <std::floating_point Real>
LimitEstimate<Real> decide_limit(const std::vector<LadderPoint<Real>>& pts, const LadderOptions<Real>& opt) {
  LimitEstimate<Real> est;
  if (pts.empty()) return est;
  if (pts.back().overflow) {
    est.kind = LimitKind::infinity;
    est.value = std::numeric_limits<Real>::infinity();
    return est;
  }
  const std::size_t m = std::min(opt.tail, pts.size());
  const std::size_t first = pts.size() - m;
  est.value = pts.back().ratio;

  bool nonincreasing = true, decreasing = true, increasing = true, positive = true;
  bool steep_down = true, steep_up = true;
  for (std::size_t j = first; j < pts.size(); ++j) positive = positive && pts[j].ratio > Real(0);
  for (std::size_t j = first; j + 1 < pts.size(); ++j) {
    const Real a = pts[j].ratio, b = pts[j + 1].ratio;
    nonincreasing = nonincreasing && b <= a;
    decreasing = decreasing && b < a;
    increasing = increasing && b > a;
    if (positive) {
      const Real decades = std::log10(b / a);
      steep_down = steep_down && decades <= -opt.min_decade_slope;
      steep_up = steep_up && decades >= opt.min_decade_slope;
    }
  }
  if (m < 2) decreasing = increasing = steep_down = steep_up = false;
  if (!positive) steep_down = steep_up = false;

  if (nonincreasing && std::abs(est.value) <= opt.zero_threshold) {
    est.kind = LimitKind::zero;
  } else if (decreasing && steep_down) {
    est.kind = LimitKind::zero;
  } else if (increasing && (est.value >= opt.infinity_threshold || steep_up)) {
    est.kind = LimitKind::infinity;
  }
  return est;
}

}  // namespace detail

/// Classifies f as superlinear (f0 = 0, f_inf = inf), sublinear
/// (f0 = inf, f_inf = 0) or neither.
template <std::floating_point Real = double>
GrowthReport<Real> classify_growth(const ExprAst& f, const LadderOptions<Real>& opt = {}) {
  GrowthReport<Real> r;
  r.descending = detail::walk_ladder<Real>(f, 1, opt.descending_decades, -1);
  r.ascending = detail::walk_ladder<Real>(f, 0, opt.ascending_decades, +1);
  r.f0 = detail::decide_limit(r.descending, opt);
  r.finf = detail::decide_limit(r.ascending, opt);
  if (r.f0.kind == LimitKind::zero && r.finf.kind == LimitKind::infinity)
    r.verdict = Verdict::superlinear;
  else if (r.f0.kind == LimitKind::infinity && r.finf.kind == LimitKind::zero)
    r.verdict = Verdict::sublinear;
  else
    r.verdict = Verdict::indeterminate;
  return r;
}

/// Samples f >= 0 at 10^4 points of [0, 100], g >= 0 at 1001 points of
/// [0, 1], and computes mu = int t^2 g by quadrature.
template <std::floating_point Real = double>
HypothesisReport<Real> check_hypotheses(const ProblemSpec<Real>& spec) {
  HypothesisReport<Real> rep;
  constexpr std::size_t f_samples = 10000;
  rep.h1_samples = f_samples;
  rep.h1_passed = true;
  for (std::size_t k = 0; k < f_samples; ++k) {
    const Real u = Real(100) * static_cast<Real>(k) / static_cast<Real>(f_samples - 1);
    try {
      const Real fu = spec.f.template eval<Real>(u);
      if (fu < Real(0)) {
        std::ostringstream os;
        os << "f(" << static_cast<double>(u) << ") = " << static_cast<double>(fu) << " < 0";
        rep.h1_passed = false;
        rep.h1_witness = u;
        rep.h1_detail = os.str();
        break;
      }
    } catch (const EvalError& e) {
      rep.h1_passed = false;
      rep.h1_witness = u;
      rep.h1_detail = e.what();
      break;
    }
  }

  rep.g_nonnegative = true;
  constexpr std::size_t g_samples = 1001;
  try {
    for (std::size_t k = 0; k < g_samples; ++k) {
      const Real t = static_cast<Real>(k) / static_cast<Real>(g_samples - 1);
      const Real gt = spec.g.template eval<Real>(t);
      if (gt < Real(0)) {
        std::ostringstream os;
        os << "g(" << static_cast<double>(t) << ") = " << static_cast<double>(gt) << " < 0";
        rep.g_nonnegative = false;
        rep.h2_witness = t;
        rep.h2_detail = os.str();
        break;
      }
    }
    rep.mu = integrate([&](Real t) { return t * t * spec.g.template eval<Real>(t); }, Real(0), Real(1), spec.rule());
  } catch (const std::domain_error& e) {
    rep.g_nonnegative = false;
    rep.h2_detail = e.what();
    rep.mu = std::numeric_limits<Real>::quiet_NaN();
    return rep;
  }
  const bool mu_ok = rep.mu > Real(0) && rep.mu < Real(1);
  rep.h2_passed = rep.g_nonnegative && mu_ok;
  if (rep.g_nonnegative && !mu_ok) {
    std::ostringstream os;
    os << "mu = " << static_cast<double>(rep.mu) << " is not in (0, 1)";
    rep.h2_detail = os.str();
  }
  return rep;
}

}  // namespace tpbvp
