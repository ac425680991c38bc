#pragma once

/**
 * @file io.hpp
 * @brief CSV serialization: grid functions as "t,u" and kernel dumps.
 *
 * Numbers use 17 significant digits so that doubles round-trip. Lines end
 * in LF regardless of platform.
 */

#include <concepts>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "tpbvp/grid.hpp"
#include "tpbvp/kernel.hpp"

namespace tpbvp {

/// printf-style %.17g.
inline std::string format_real(double x) {
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

template <std::floating_point Real>
void write_csv(std::ostream& os, const GridFunction<Real>& u) {
  os << "t,u\n";
  for (std::size_t i = 0; i < u.size(); ++i)
    os << format_real(static_cast<double>(u.node(i))) << ',' << format_real(static_cast<double>(u[i])) << '\n';
}

/// N x N table of G(t_i, s_j) on uniform nodes. The header row holds the
/// s values after an empty corner cell; each row starts with t.
template <std::floating_point Real = double>
void write_green_csv(std::ostream& os, std::size_t n) {
  if (n < 2) throw std::invalid_argument("kernel dump needs at least 2 nodes");
  os << 't';
  for (std::size_t j = 0; j < n; ++j) os << ',' << format_real(static_cast<double>(GridFunction<Real>::node(j, n)));
  os << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    const Real t = GridFunction<Real>::node(i, n);
    os << format_real(static_cast<double>(t));
    for (std::size_t j = 0; j < n; ++j)
      os << ',' << format_real(static_cast<double>(green(t, GridFunction<Real>::node(j, n))));
    os << '\n';
  }
}

}  // namespace tpbvp
