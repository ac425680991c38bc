// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tpbvp/tpbvp.hpp"

using namespace tpbvp;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void run(int id, const char* title, double time_limit, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.require(false, std::string("exception: ") + e.what());
  }
  const double elapsed = seconds_since(t0);
  if (time_limit > 0) out.require(elapsed < time_limit, fmt("runtime %.3g s", elapsed) + fmt(" < %g s", time_limit));
  if (!out.pass) ++failures;
  std::printf("%s criterion %d: %s :: %s\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str());
  std::fflush(stdout);
}

ExprAst random_polynomial(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::uniform_int_distribution<int> degree(0, 5);
  std::string src = fmt("%.17g", coef(rng));
  const int d = degree(rng);
  for (int k = 1; k <= d; ++k) src += fmt("+(%.17g)", coef(rng)) + "*s^" + std::to_string(k);
  return parse(src, "s");
}

std::vector<double> random_nonnegative(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> scale(0.0, 2.0), unit(0.0, 1.0);
  const double c = scale(rng);
  std::vector<double> v(n);
  for (double& x : v) x = c * unit(rng);
  return v;
}

}  // namespace

int main() {
  const auto rule = QuadratureRule<double>::gauss_legendre();
  const ExprAst g4 = parse("t^4", "t"), g6 = parse("t^6", "t");
  const ExprAst f41 = parse("u^2*exp(u)", "u"), f42 = parse("sqrt(u)+ln(1+u)", "u");

  run(1, "cone constants mu(t^4) = 1/7, mu(t^6) = 1/9", 0.1, [&](Outcome& o) {
    const double m4 = cone_constants<double>(g4, 0.25, rule).mu;
    const double m6 = cone_constants<double>(g6, 0.25, rule).mu;
    o.require(std::abs(m4 - 1.0 / 7) <= 1e-12, fmt("|mu4 - 1/7| = %.3g", std::abs(m4 - 1.0 / 7)));
    o.require(std::abs(m6 - 1.0 / 9) <= 1e-12, fmt("|mu6 - 1/9| = %.3g", std::abs(m6 - 1.0 / 9)));
  });

  run(2, "kernel bounds, 1001 x 1001 samples, theta = 0.25, tol 1e-14", 5.0, [&](Outcome& o) {
    const auto rep = verify_kernel_bounds<double>(1001, 0.25, 1e-14);
    o.require(rep.violations() == 0, "violations = " + std::to_string(rep.violations()));
    o.detail += fmt("; worst slacks: G>=0 %.3g", rep.nonnegative.worst_slack) +
                fmt(", rho %.3g", rep.lower_rho.worst_slack) + fmt(", upper %.3g", rep.upper.worst_slack) +
                fmt(", theta %.3g", rep.lower_theta.worst_slack);
  });

  run(3, "linear solver exactness and linearity", 0, [&](Outcome& o) {
    const auto u = solve_linear<double>([](double) { return 6.0; }, g4, 513, rule);
    const auto exact = GridFunction<double>::sample([](double t) { return 49.0 / 48 * t * t - t * t * t; }, 513);
    const double err = sup_distance(u, exact);
    o.require(err <= 1e-8, fmt("sup error vs (49/48)t^2 - t^3 = %.3g", err));

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-2.0, 2.0);
    const GreenOperator<double> op(g4, 513, rule);
    double worst = 0;
    for (int k = 0; k < 50; ++k) {
      const ExprAst p = random_polynomial(rng), q = random_polynomial(rng);
      const double a = coef(rng), b = coef(rng);
      const auto up = op.solve([&](double s) { return p.eval(s); });
      const auto uq = op.solve([&](double s) { return q.eval(s); });
      const auto uc = op.solve([&](double s) { return a * p.eval(s) + b * q.eval(s); });
      for (std::size_t i = 0; i < uc.size(); ++i) worst = std::max(worst, std::abs(uc[i] - (a * up[i] + b * uq[i])));
    }
    o.require(worst <= 1e-11, fmt("linearity defect over 50 pairs = %.3g", worst));
  });

  run(4, "cone mapping on 100 random nonnegative inputs per example", 0, [&](Outcome& o) {
    std::mt19937_64 rng(11);
    struct Case { const ExprAst* f; const ExprAst* g; const char* name; };
    for (const Case& c : {Case{&f41, &g4, "u^2 exp(u), t^4"}, Case{&f42, &g6, "sqrt(u)+ln(1+u), t^6"}}) {
      const GreenOperator<double> op(*c.g, 513, rule);
      const auto cone = cone_constants<double>(*c.g, 0.25, rule);
      int bad = 0;
      double worst = std::numeric_limits<double>::infinity();
      for (int k = 0; k < 100; ++k) {
        const double slack = cone_slack(op.apply(GridFunction<double>(random_nonnegative(rng, 513)), *c.f), cone);
        worst = std::min(worst, slack);
        if (slack < -1e-10) ++bad;
      }
      o.require(bad == 0, std::string(c.name) + ": failures = " + std::to_string(bad) + fmt(", worst slack %.3g", worst));
    }
  });

  run(5, "sublinear example end to end", 30.0, [&](Outcome& o) {
    const auto spec = ProblemSpec<double>::parse("sqrt(u)+ln(1+u)", "t^6");
    const auto search = find_positive_solution(spec);
    o.require(search.found(), "positive solution found");
    if (!search.found()) return;
    const auto& rep = *search.report;
    const auto& u = *rep.solution;
    o.require(rep.norm >= 1e-2, fmt("||u|| = %.6g >= 1e-2", rep.norm));
    o.require(rep.ode.sup <= 1e-3, fmt("ODE residual %.3g", rep.ode.sup));
    o.require(rep.boundary.max() <= 1e-8, fmt("boundary residual %.3g", rep.boundary.max()));
    const auto picard = picard_solve(spec, initial_guess(1.0, 513));
    const auto newton = newton_collocation(spec, picard.solution ? *picard.solution : u);
    o.require(picard.solution && newton.solution, std::string("picard ") + to_string(picard.status) +
                                                      ", collocation " + to_string(newton.status));
    if (picard.solution && newton.solution) {
      const double d = sup_distance(*picard.solution, *newton.solution);
      o.require(d <= 1e-6, fmt("picard vs collocation %.3g", d));
    }
  });

  run(6, "superlinear example end to end", 60.0, [&](Outcome& o) {
    const auto spec = ProblemSpec<double>::parse("u^2*exp(u)", "t^4");
    const auto search = find_positive_solution(spec);
    o.require(search.found(), "positive solution found");
    if (!search.found()) return;
    const auto& rep = *search.report;
    o.require(rep.norm >= spec.config.positivity_floor, fmt("||u|| = %.6g (nontrivial)", rep.norm));
    o.require(rep.ode.sup <= 1e-3, fmt("ODE residual %.3g", rep.ode.sup));
    o.require(rep.boundary.max() <= 1e-8, fmt("boundary residual %.3g", rep.boundary.max()));

    auto coarse_spec = spec;
    const auto coarse = newton_collocation(coarse_spec, *rep.solution);
    auto fine_spec = spec;
    fine_spec.config.grid = 1025;
    const auto fine = newton_collocation(fine_spec, resample(*rep.solution, 1025));
    o.require(coarse.solution && fine.solution, std::string("collocation n=513 ") + to_string(coarse.status) +
                                                    ", n=1025 " + to_string(fine.status));
    if (coarse.solution && fine.solution) {
      double d = 0;
      for (std::size_t i = 0; i < 513; ++i) d = std::max(d, std::abs((*coarse.solution)[i] - (*fine.solution)[2 * i]));
      o.require(d <= 5e-5, fmt("n=513 vs n=1025 %.3g", d));
    }
  });

  run(7, "growth classification", 0, [&](Outcome& o) {
    const auto v41 = classify_growth<double>(f41).verdict;
    const auto v42 = classify_growth<double>(f42).verdict;
    const auto vid = classify_growth<double>(parse("u", "u")).verdict;
    o.require(v41 == Verdict::superlinear, std::string("u^2 exp(u) -> ") + to_string(v41));
    o.require(v42 == Verdict::sublinear, std::string("sqrt(u)+ln(1+u) -> ") + to_string(v42));
    o.require(vid == Verdict::indeterminate, std::string("u -> ") + to_string(vid));
  });

  run(8, "collocation convergence order for f = 6", 0, [&](Outcome& o) {
    std::vector<double> errors;
    for (std::size_t n : {65u, 129u, 257u, 513u}) {
      auto spec = ProblemSpec<double>::parse("6", "t^4");
      spec.config.grid = n;
      const auto rep = newton_collocation(spec, GridFunction<double>::zeros(n));
      if (!rep.solution) throw std::runtime_error(std::string("collocation ") + to_string(rep.status));
      const auto exact = GridFunction<double>::sample([](double t) { return 49.0 / 48 * t * t - t * t * t; }, n);
      errors.push_back(sup_distance(*rep.solution, exact));
    }
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
      const double ratio = errors[k] / errors[k + 1];
      o.require(ratio >= 2.5 && ratio <= 6, fmt("ratio %.4g", ratio));
    }
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
