#pragma once

#include <concepts>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tpbvp/expr.hpp"
#include "tpbvp/quadrature.hpp"

namespace tpbvp {

/// Settings for the fixed-point searches.
template <std::floating_point Real = double>
struct SolveConfig {
  std::size_t grid = 513;                 // odd node count
  Real tol = Real(1e-10);                 // sup-norm update tolerance
  Real omega = Real(0.5);                 // Picard damping once undamped steps stop contracting
  std::size_t max_iterations = 10000;     // Picard budget
  std::size_t newton_max_iterations = 200;
  std::vector<Real> amplitudes{Real(0.1), Real(0.5), Real(1), Real(2), Real(5), Real(10), Real(20), Real(50)};
  Real positivity_floor = Real(1e-6);     // ||u|| below this is the trivial solution
  Real residual_cap = Real(1e-3);         // accepted interior ODE residual
  Real divergence_bound = Real(1e8);

  void validate() const {
    if (grid < 7 || grid % 2 == 0) throw std::invalid_argument("grid size must be odd and >= 7");
    if (!(tol > Real(0))) throw std::invalid_argument("tolerance must be positive");
    if (!(omega > Real(0) && omega <= Real(1))) throw std::invalid_argument("damping must lie in (0, 1]");
    if (amplitudes.empty()) throw std::invalid_argument("amplitude sweep must be non-empty");
    for (Real c : amplitudes)
      if (!(c > Real(0))) throw std::invalid_argument("sweep amplitudes must be positive");
    if (!(positivity_floor > Real(0))) throw std::invalid_argument("positivity floor must be positive");
  }
};

/// u''' + f(u) = 0 on (0,1), u(0) = u'(0) = 0, u(1) = int_0^1 g(s) u(s) ds.
template <std::floating_point Real = double>
struct ProblemSpec {
  ExprAst f;
  ExprAst g;
  Real theta = Real(0.25);
  std::size_t panels = 64;
  SolveConfig<Real> config{};

  static ProblemSpec parse(std::string_view f_source, std::string_view g_source) {
    return ProblemSpec{tpbvp::parse(f_source, "u"), tpbvp::parse(g_source, "t")};
  }

  QuadratureRule<Real> rule() const { return QuadratureRule<Real>::gauss_legendre(panels); }

  void validate() const {
    if (f.variable() != "u") throw std::invalid_argument("f must be an expression in u");
    if (g.variable() != "t") throw std::invalid_argument("g must be an expression in t");
    if (!(theta > Real(0) && theta < Real(0.5))) throw std::invalid_argument("theta must lie in (0, 1/2)");
    if (panels == 0) throw std::invalid_argument("panel count must be positive");
    config.validate();
  }
};

}  // namespace tpbvp
