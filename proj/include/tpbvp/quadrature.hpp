#pragma once

/**
 * @file quadrature.hpp
 * @brief Composite quadrature over [a,b] with a fixed panel count, and
 * composite Simpson over grid samples.
 *
 * Panels are summed in ascending order so results are reproducible bit for
 * bit. There is no adaptive subdivision.
 */

#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpbvp/grid.hpp"

namespace tpbvp {

enum class QuadratureScheme { gauss_legendre, simpson };

/// Raised when the integrand fails at a quadrature node.
class IntegrandError : public std::domain_error {
 public:
  IntegrandError(double location, const std::string& cause)
      : std::domain_error(message(location, cause)), location_(location) {}
  double location() const noexcept { return location_; }

 private:
  static std::string message(double location, const std::string& cause) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand failed at node " << location << ": " << cause;
    return os.str();
  }
  double location_;
};

template <std::floating_point Real = double>
class QuadratureRule {
 public:
  /// Composite Gauss-Legendre with `nodes` (2..5) points per panel.
  static QuadratureRule gauss_legendre(std::size_t panels = 64, std::size_t nodes = 5) {
    QuadratureRule r(QuadratureScheme::gauss_legendre, panels);
    // Nodes on [0,1] and weights summing to 1, 36 significant digits.
    switch (nodes) {
      case 2:
        r.nodes_ = {Real(0.211324865405187117745425609749021272L), Real(0.788675134594812882254574390250978728L)};
        r.weights_ = {Real(0.5L), Real(0.5L)};
        break;
      case 3:
        r.nodes_ = {Real(0.112701665379258311482073460021760039L), Real(0.5L),
                    Real(0.887298334620741688517926539978239961L)};
        r.weights_ = {Real(0.277777777777777777777777777777777778L), Real(0.444444444444444444444444444444444444L),
                      Real(0.277777777777777777777777777777777778L)};
        break;
      case 4:
        r.nodes_ = {Real(0.0694318442029737123880267555535952475L), Real(0.330009478207571867598667120448377656L),
                    Real(0.669990521792428132401332879551622344L), Real(0.930568155797026287611973244446404753L)};
        r.weights_ = {Real(0.173927422568726928686531974610999704L), Real(0.326072577431273071313468025389000296L),
                      Real(0.326072577431273071313468025389000296L), Real(0.173927422568726928686531974610999704L)};
        break;
      case 5:
        r.nodes_ = {Real(0.0469100770306680036011865608503035174L), Real(0.230765344947158454481842789649895598L),
                    Real(0.5L), Real(0.769234655052841545518157210350104402L),
                    Real(0.953089922969331996398813439149696483L)};
        r.weights_ = {Real(0.118463442528094543757132020359958681L), Real(0.239314335249683234020645757417819096L),
                      Real(0.284444444444444444444444444444444444L), Real(0.239314335249683234020645757417819096L),
                      Real(0.118463442528094543757132020359958681L)};
        break;
      default:
        throw std::invalid_argument("QuadratureRule: Gauss-Legendre supports 2..5 nodes per panel, got " +
                                    std::to_string(nodes));
    }
    return r;
  }

  static QuadratureRule simpson(std::size_t panels = 64) {
    QuadratureRule r(QuadratureScheme::simpson, panels);
    r.nodes_ = {Real(0), Real(0.5L), Real(1)};
    r.weights_ = {Real(1) / 6, Real(4) / 6, Real(1) / 6};
    return r;
  }

  QuadratureScheme scheme() const noexcept { return scheme_; }
  std::size_t panels() const noexcept { return panels_; }
  /// Reference nodes on [0,1] for one panel.
  std::span<const Real> nodes() const noexcept { return nodes_; }
  /// Reference weights for one panel; they sum to 1 and scale by the panel width.
  std::span<const Real> weights() const noexcept { return weights_; }

  /// Highest polynomial degree integrated exactly on each panel.
  std::size_t degree_of_exactness() const noexcept {
    return scheme_ == QuadratureScheme::simpson ? 3 : 2 * nodes_.size() - 1;
  }

  QuadratureRule with_panels(std::size_t panels) const {
    QuadratureRule r = *this;
    if (panels == 0) throw std::invalid_argument("QuadratureRule: panel count must be positive");
    r.panels_ = panels;
    return r;
  }

  /// Calls visit(x, w) for every node of the composite rule on [a,b] in
  /// ascending panel order; w already includes the panel width.
  template <class Visit>
  void for_each_node(Real a, Real b, Visit&& visit) const {
    const Real width = (b - a) / static_cast<Real>(panels_);
    for (std::size_t p = 0; p < panels_; ++p) {
      const Real left = a + width * static_cast<Real>(p);
      for (std::size_t k = 0; k < nodes_.size(); ++k) visit(left + width * nodes_[k], width * weights_[k]);
    }
  }

 private:
  QuadratureRule(QuadratureScheme s, std::size_t panels) : scheme_(s), panels_(panels) {
    if (panels == 0) throw std::invalid_argument("QuadratureRule: panel count must be positive");
  }

  QuadratureScheme scheme_;
  std::size_t panels_;
  std::vector<Real> nodes_;
  std::vector<Real> weights_;
};

/// Composite-rule approximation of the integral of f over [a,b].
template <std::floating_point Real, class F>
Real integrate(F&& f, Real a, Real b, const QuadratureRule<Real>& rule) {
  if (!(a <= b)) throw std::invalid_argument("integrate: requires a <= b");
  if (a == b) return Real(0);
  const Real width = (b - a) / static_cast<Real>(rule.panels());
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  Real total = 0;
  for (std::size_t p = 0; p < rule.panels(); ++p) {
    const Real left = a + width * static_cast<Real>(p);
    Real panel = 0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const Real x = left + width * nodes[k];
      Real fx;
      try {
        fx = static_cast<Real>(f(x));
      } catch (const IntegrandError&) {
        throw;
      } catch (const std::domain_error& e) {
        throw IntegrandError(static_cast<double>(x), e.what());
      }
      panel += weights[k] * fx;
    }
    total += width * panel;
  }
  return total;
}

namespace detail {

// Simpson over nodes [i0, i1] of a uniform sample with step h; an odd
// interval count closes with the 3/8 rule, a single interval with the
// trapezoid.
template <std::floating_point Real>
Real simpson_nodes(std::span<const Real> v, std::size_t i0, std::size_t i1, Real h) {
  const std::size_t m = i1 - i0;
  if (m == 0) return Real(0);
  if (m == 1) return h * (v[i0] + v[i1]) / 2;
  const std::size_t even = (m % 2 == 0) ? m : m - 3;
  Real acc = 0;
  for (std::size_t j = i0; j < i0 + even; j += 2) acc += v[j] + 4 * v[j + 1] + v[j + 2];
  acc *= h / 3;
  if (even != m) {
    const std::size_t j = i0 + even;
    acc += 3 * h / 8 * (v[j] + 3 * v[j + 1] + 3 * v[j + 2] + v[j + 3]);
  }
  return acc;
}

}  // namespace detail

/// Composite Simpson weights for the full [0,1] on an odd n-node grid.
template <std::floating_point Real = double>
std::vector<Real> simpson_weights(std::size_t n) {
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson_weights: node count must be odd and >= 3");
  const Real third = Real(1) / (Real(3) * static_cast<Real>(n - 1));
  std::vector<Real> w(n);
  for (std::size_t i = 0; i < n; ++i) w[i] = (i == 0 || i == n - 1) ? third : (i % 2 == 1 ? 4 * third : 2 * third);
  return w;
}

/// Composite Simpson over grid samples on [a,b] within [0,1]. Endpoints
/// that are not grid nodes are linearly interpolated and the partial cells
/// are integrated with the trapezoid rule.
template <std::floating_point Real>
Real integrate_grid(const GridFunction<Real>& u, Real a, Real b) {
  if (u.size() < 3) throw std::invalid_argument("integrate_grid: resolution too small");
  if (!(a >= Real(0) && b <= Real(1) && a <= b)) throw std::invalid_argument("integrate_grid: [a,b] must lie in [0,1]");
  if (a == b) return Real(0);
  const std::size_t n = u.size();
  const Real h = u.step();
  const auto v = u.values();
  const Real scale = static_cast<Real>(n - 1);
  constexpr Real snap = 64 * std::numeric_limits<Real>::epsilon();

  auto first_node_at_or_after = [&](Real x) {
    const Real p = x * scale;
    const Real r = std::round(p);
    if (std::abs(p - r) <= snap * scale) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::ceil(p));
  };
  auto last_node_at_or_before = [&](Real x) {
    const Real p = x * scale;
    const Real r = std::round(p);
    if (std::abs(p - r) <= snap * scale) return static_cast<std::size_t>(r);
    return static_cast<std::size_t>(std::floor(p));
  };
  auto linear = [&](Real x) {
    const std::size_t cell = std::min(static_cast<std::size_t>(x * scale), n - 2);
    const Real frac = x * scale - static_cast<Real>(cell);
    return v[cell] + frac * (v[cell + 1] - v[cell]);
  };

  const std::size_t i0 = first_node_at_or_after(a);
  const std::size_t i1 = last_node_at_or_before(b);
  if (i0 > i1) {
    // [a,b] lies inside a single cell.
    return (b - a) * (linear(a) + linear(b)) / 2;
  }
  Real total = detail::simpson_nodes(v, i0, i1, h);
  const Real t0 = u.node(i0);
  const Real t1 = u.node(i1);
  if (a < t0) total += (t0 - a) * (linear(a) + v[i0]) / 2;
  if (b > t1) total += (b - t1) * (v[i1] + linear(b)) / 2;
  return total;
}

}  // namespace tpbvp
