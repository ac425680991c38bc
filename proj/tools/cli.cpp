#include "cli.hpp"

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json_report.hpp"
#include "tpbvp/tpbvp.hpp"

namespace tpbvp::cli {
namespace {

struct SolveFlags {
  std::string f, g;
  std::size_t grid = 513;
  double theta = 0.25;
  double tol = 1e-10;
  std::size_t panels = 64;
  std::string out, report;
};

struct VerifyFlags {
  std::size_t samples = 1001;
  double theta = 0.25;
  std::string g = "t^4";
};

struct ClassifyFlags {
  std::string f, g;
};

bool write_file(const std::string& path, const std::string& text, std::ostream& err) {
  std::ofstream os(path, std::ios::binary);
  if (os) os << text;
  if (!os) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_solve(const SolveFlags& fl, std::ostream& out, std::ostream& err) {
  std::optional<ProblemSpec<double>> parsed;
  try {
    parsed = ProblemSpec<double>::parse(fl.f, fl.g);
    ProblemSpec<double>& spec = *parsed;
    spec.theta = fl.theta;
    spec.panels = fl.panels;
    spec.config.grid = fl.grid;
    spec.config.tol = fl.tol;
    spec.validate();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  const ProblemSpec<double>& spec = *parsed;

  Json report;
  report["command"] = "solve";
  report["config"] = to_json(spec);
  const HypothesisReport<double> hyp = check_hypotheses(spec);
  report["hypotheses"] = to_json(hyp);

  auto emit = [&](int code) {
    report["exit_code"] = code;
    if (fl.report.empty()) {
      out << dump(report);
    } else if (!write_file(fl.report, dump(report), err)) {
      return exit_usage;
    }
    return code;
  };

  if (!hyp.passed()) {
    err << "error: hypotheses not satisfied";
    if (!hyp.h1_passed) err << "; f: " << hyp.h1_detail;
    if (!hyp.h2_passed) err << "; g: " << hyp.h2_detail;
    err << '\n';
    report["verdict"] = to_string(Verdict::indeterminate);
    return emit(exit_hypothesis);
  }

  try {
    GrowthReport<double> growth = classify_growth<double>(spec.f);
    report["classification"] = to_json(growth);
  } catch (const LadderError& e) {
    report["classification"] = Json{{"error", e.what()}, {"u", e.u()}};
  }
  report["cone"] = to_json(cone_constants<double>(spec.g, spec.theta, spec.rule()));

  PositiveSolutionSearch<double> search;
  try {
    search = find_positive_solution(spec);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    report["verdict"] = to_string(Verdict::indeterminate);
    return emit(exit_not_found);
  }
  report["verdict"] = to_string(search.verdict);
  report["found"] = search.found();
  report["solution"] = search.found() ? to_json(*search.report) : Json(nullptr);
  Json attempts = Json::array();
  for (const auto& a : search.attempts) attempts.push_back(to_json(a));
  report["attempts"] = attempts;

  if (!search.found()) {
    err << "no positive solution found in the amplitude sweep (" << search.attempts.size() << " attempts)\n";
    return emit(exit_not_found);
  }
  if (!fl.out.empty()) {
    std::ostringstream csv;
    write_csv(csv, *search.report->solution);
    if (!write_file(fl.out, csv.str(), err)) return exit_usage;
  }
  return emit(exit_ok);
}

int cmd_verify(const VerifyFlags& fl, std::ostream& out, std::ostream& err) {
  if (fl.samples < 4) {
    err << "error: --samples must be at least 4\n";
    return exit_usage;
  }
  if (!(fl.theta > 0 && fl.theta < 0.5)) {
    err << "error: --theta must lie in (0, 1/2)\n";
    return exit_usage;
  }
  std::optional<ExprAst> parsed;
  ConeConstants<double> cone;
  const auto rule = QuadratureRule<double>::gauss_legendre();
  try {
    parsed = parse(fl.g, "t");
    cone = cone_constants<double>(*parsed, fl.theta, rule);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  if (!cone.h2_satisfied()) {
    err << "error: mu = " << cone.mu << " is not in (0, 1)\n";
    return exit_usage;
  }
  const ExprAst& g = *parsed;

  Json report;
  report["command"] = "verify";
  report["config"] = Json{{"samples", fl.samples},  {"theta", fl.theta},        {"g", g.to_string()},
                          {"grid", 513},            {"quadrature", to_json(rule)},
                          {"kernel_tolerance", 1e-14}, {"norm_tolerance", 1e-10}, {"cone_tolerance", 1e-10},
                          {"cone_trials", 100},     {"seed", 20240601}};
  report["cone"] = to_json(cone);
  std::size_t violations = 0;

  const KernelBoundReport<double> kernel = verify_kernel_bounds<double>(fl.samples, fl.theta);
  report["kernel"] = to_json(kernel);
  violations += kernel.violations();

  Json norms = Json::array();
  for (const char* src : {"1", "6", "s", "s^2", "exp(s)", "1-s", "sin(3*s)+1"}) {
    const NormBoundReport<double> nb = norm_bound_check<double>(parse(src, "s"), g, fl.theta, 513, rule);
    Json j = to_json(nb);
    j["h"] = src;
    norms.push_back(j);
    if (!nb.passed()) ++violations;
  }
  report["norm_bounds"] = norms;

  // Cone mapping on random nonnegative grid functions, fixed seed.
  Json cones = Json::array();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> amp(0.0, 2.0);
  for (const char* src : {"u^2*exp(u)", "sqrt(u)+ln(1+u)"}) {
    const ExprAst f = parse(src, "u");
    const GreenOperator<double> op(g, 513, rule);
    double worst = std::numeric_limits<double>::infinity();
    std::size_t failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> v(513);
      const double scale = amp(rng);
      for (double& x : v) x = scale * std::generate_canonical<double, 53>(rng);
      const double slack = cone_slack(op.apply(GridFunction<double>(std::move(v)), f), cone);
      worst = std::min(worst, slack);
      if (slack < -1e-10) ++failures;
    }
    cones.push_back(Json{{"f", src}, {"worst_slack", worst}, {"failures", failures}});
    violations += failures;
  }
  report["cone_mapping"] = cones;
  report["violations"] = violations;
  const int code = violations == 0 ? exit_ok : exit_violation;
  report["exit_code"] = code;
  out << dump(report);
  return code;
}

int cmd_classify(const ClassifyFlags& fl, std::ostream& out, std::ostream& err) {
  try {
    const ExprAst f = parse(fl.f, "u");
    GrowthReport<double> growth = classify_growth<double>(f);
    if (!fl.g.empty()) {
      ProblemSpec<double> spec{f, parse(fl.g, "t")};
      growth.hypotheses = check_hypotheses(spec);
    }
    Json report;
    report["command"] = "classify";
    report["config"] = Json{{"f", f.to_string()}, {"g", fl.g.empty() ? Json(nullptr) : Json(fl.g)}};
    const Json body = to_json(growth);
    for (const auto& [key, value] : body.items()) report[key] = value;
    out << dump(report);
    return exit_ok;
  } catch (const LadderError& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

int cmd_greens(std::size_t n, std::ostream& out, std::ostream& err) {
  if (n < 2) {
    err << "error: --dump needs at least 2 nodes\n";
    return exit_usage;
  }
  write_green_csv<double>(out, n);
  return exit_ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Third-order boundary value problems with an integral boundary condition"};
  app.require_subcommand(1);

  SolveFlags sf;
  auto* solve = app.add_subcommand("solve", "Find a positive solution and write CSV/JSON");
  solve->add_option("--f", sf.f, "Nonlinearity f(u)")->required();
  solve->add_option("--g", sf.g, "Boundary weight g(t)")->required();
  solve->add_option("--grid", sf.grid, "Odd number of grid nodes")->capture_default_str();
  solve->add_option("--theta", sf.theta, "Cone parameter in (0, 1/2)")->capture_default_str();
  solve->add_option("--tol", sf.tol, "Sup-norm update tolerance")->capture_default_str();
  solve->add_option("--panels", sf.panels, "Gauss-Legendre panels")->capture_default_str();
  solve->add_option("--out", sf.out, "Solution CSV path");
  solve->add_option("--report", sf.report, "JSON report path (default: stdout)");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Run the kernel, norm-bound and cone-mapping checks");
  verify->add_option("--samples", vf.samples, "Kernel grid size per axis")->capture_default_str();
  verify->add_option("--theta", vf.theta, "Cone parameter in (0, 1/2)")->capture_default_str();
  verify->add_option("--g", vf.g, "Boundary weight g(t)")->capture_default_str();

  ClassifyFlags cf;
  auto* classify = app.add_subcommand("classify", "Estimate f0 and f_inf");
  classify->add_option("--f", cf.f, "Nonlinearity f(u)")->required();
  classify->add_option("--g", cf.g, "Boundary weight g(t); adds the hypothesis checks");

  std::size_t dump_n = 0;
  auto* greens = app.add_subcommand("greens", "Dump G on an N x N grid as CSV");
  greens->add_option("--dump", dump_n, "Nodes per axis")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  if (solve->parsed()) return cmd_solve(sf, out, err);
  if (verify->parsed()) return cmd_verify(vf, out, err);
  if (classify->parsed()) return cmd_classify(cf, out, err);
  return cmd_greens(dump_n, out, err);
}

}  // namespace tpbvp::cli
