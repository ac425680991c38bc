#pragma once

// JSON views of the library reports. Key order is part of the output
// contract and is fixed by ordered_json insertion order.

#include <cmath>
#include <string>

#include "json.hpp"
#include "tpbvp/tpbvp.hpp"

namespace tpbvp::cli {

using Json = nlohmann::ordered_json;

inline Json number(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

inline Json to_json(const QuadratureRule<double>& rule) {
  return Json{{"scheme", rule.scheme() == QuadratureScheme::gauss_legendre ? "gauss-legendre" : "simpson"},
              {"panels", rule.panels()},
              {"nodes", rule.nodes().size()}};
}

inline Json to_json(const ProblemSpec<double>& spec) {
  const SolveConfig<double>& c = spec.config;
  Json j;
  j["f"] = spec.f.to_string();
  j["g"] = spec.g.to_string();
  j["theta"] = spec.theta;
  j["grid"] = c.grid;
  j["panels"] = spec.panels;
  j["quadrature"] = to_json(spec.rule());
  j["tol"] = c.tol;
  j["omega"] = c.omega;
  j["max_iterations"] = c.max_iterations;
  j["newton_max_iterations"] = c.newton_max_iterations;
  j["amplitudes"] = c.amplitudes;
  j["positivity_floor"] = c.positivity_floor;
  j["residual_cap"] = c.residual_cap;
  j["divergence_bound"] = c.divergence_bound;
  return j;
}

inline Json to_json(const ConeConstants<double>& c) {
  return Json{{"theta", c.theta}, {"mu", c.mu}, {"alpha", c.alpha}, {"beta", c.beta}, {"gamma", c.gamma}};
}

inline Json to_json(const LimitEstimate<double>& e) {
  return Json{{"kind", to_string(e.kind)}, {"value", number(e.value)}};
}

inline Json ladder_json(const std::vector<LadderPoint<double>>& pts) {
  Json a = Json::array();
  for (const auto& p : pts) a.push_back(Json{{"u", p.u}, {"ratio", number(p.ratio)}, {"overflow", p.overflow}});
  return a;
}

inline Json to_json(const HypothesisReport<double>& h) {
  Json j;
  j["h1"] = Json{{"passed", h.h1_passed},
                 {"note", HypothesisReport<double>::h1_note},
                 {"samples", h.h1_samples},
                 {"witness", h.h1_witness ? Json(*h.h1_witness) : Json(nullptr)},
                 {"detail", h.h1_detail}};
  j["h2"] = Json{{"passed", h.h2_passed},
                 {"mu", number(h.mu)},
                 {"g_nonnegative", h.g_nonnegative},
                 {"witness", h.h2_witness ? Json(*h.h2_witness) : Json(nullptr)},
                 {"detail", h.h2_detail}};
  j["passed"] = h.passed();
  return j;
}

inline Json to_json(const GrowthReport<double>& g) {
  Json j;
  j["f0"] = to_json(g.f0);
  j["f_inf"] = to_json(g.finf);
  j["verdict"] = to_string(g.verdict);
  j["descending"] = ladder_json(g.descending);
  j["ascending"] = ladder_json(g.ascending);
  if (g.hypotheses) j["hypotheses"] = to_json(*g.hypotheses);
  return j;
}

inline Json to_json(const SolveReport<double>& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["status"] = to_string(r.status);
  j["message"] = r.message;
  j["iterations"] = r.iterations;
  j["update_norm"] = number(r.update_norm);
  j["norm"] = r.norm;
  j["ode_residual"] = r.ode.sup;
  j["f_scale"] = r.ode.f_scale;
  j["boundary"] = Json{{"u0", r.boundary.value_at_zero},
                       {"du0", r.boundary.slope_at_zero},
                       {"integral", r.boundary.integral_condition}};
  j["cone_slack"] = r.cone_slack;
  j["fixed_point_residual"] = r.fixed_point_residual ? Json(*r.fixed_point_residual) : Json(nullptr);
  j["verdict"] = to_string(r.verdict);
  return j;
}

inline Json to_json(const SweepAttempt<double>& a) {
  return Json{{"amplitude", a.amplitude}, {"method", to_string(a.method)}, {"status", to_string(a.status)},
              {"iterations", a.iterations}, {"norm", a.norm},          {"accepted", a.accepted},
              {"message", a.message}};
}

inline Json to_json(const BoundCheck<double>& b) {
  return Json{{"worst_slack", number(b.worst_slack)}, {"at_t", b.worst_t}, {"at_s", b.worst_s},
              {"checked", b.checked},                 {"violations", b.violations}};
}

inline Json to_json(const KernelBoundReport<double>& k) {
  return Json{{"samples", k.samples},
              {"theta", k.theta},
              {"tolerance", k.tolerance},
              {"nonnegative", to_json(k.nonnegative)},
              {"lower_rho", to_json(k.lower_rho)},
              {"upper", to_json(k.upper)},
              {"lower_theta", to_json(k.lower_theta)},
              {"diagonal_gap", k.diagonal_gap},
              {"violations", k.violations()}};
}

inline Json to_json(const NormBoundReport<double>& n) {
  return Json{{"moment", n.moment},           {"norm", n.norm},
              {"band_min", n.band_min},       {"upper_bound", n.upper_bound},
              {"lower_bound", n.lower_bound}, {"upper_slack", n.upper_slack},
              {"lower_slack", n.lower_slack}, {"passed", n.passed()}};
}

}  // namespace tpbvp::cli
