#pragma once

#include "tpbvp/expr.hpp"
#include "tpbvp/grid.hpp"
#include "tpbvp/quadrature.hpp"
#include "tpbvp/kernel.hpp"
#include "tpbvp/greens_solver.hpp"
#include "tpbvp/diagnostics.hpp"
#include "tpbvp/problem.hpp"
#include "tpbvp/classify.hpp"
#include "tpbvp/nonlinear.hpp"
#include "tpbvp/io.hpp"
