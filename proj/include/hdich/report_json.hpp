#pragma once

#include <string>

#include "json.hpp"

#include "hdich/checkers.hpp"
#include "hdich/construct.hpp"
#include "hdich/version.hpp"

namespace hdich {

using json = nlohmann::json;

// JSON views of the report types. Key order is alphabetical (nlohmann's
// default object), doubles use shortest round-trip formatting, and nothing
// time- or path-dependent is emitted, so identical inputs serialize to
// identical bytes.

inline json to_json(const GrowthBound& g) {
  return json{{"K", g.K},
              {"mu", g.mu},
              {"max_violation", g.max_violation},
              {"inflation", g.inflation},
              {"degenerate", g.degenerate}};
}

inline json to_json(const DichotomyReport& r) {
  return json{{"max_violation_invariance", r.max_violation_invariance},
              {"max_violation_stable", r.max_violation_stable},
              {"max_violation_unstable", r.max_violation_unstable},
              {"tol", r.tol},
              {"pass", r.pass}};
}

inline json to_json(const ExpansivenessConstants& e) {
  json profile = json::array();
  for (const auto& [w, l] : e.window_profile) profile.push_back({{"width", w}, {"ratio", l}});
  return json{{"L", e.L},
              {"beta", e.beta},
              {"window_max", e.window_max},
              {"diverging", e.diverging},
              {"dense_L", e.dense_L},
              {"window_profile", profile}};
}

inline json to_json(const NoncriticalityConstants& n) {
  json profile = json::array();
  for (const auto& [s, th] : n.theta_profile) profile.push_back({{"sigma", s}, {"theta", th}});
  return json{{"theta", n.theta},
              {"C", n.C},
              {"pass", n.pass},
              {"dense_theta", n.dense_theta},
              {"theta_profile", profile}};
}

inline json to_json(const DerivedConstants& d) {
  return json{{"B", d.B}, {"alpha", d.alpha}, {"theta", d.theta}, {"C", d.C}, {"D", d.D}};
}

inline json to_json(const SubspacePair& p) {
  json s = json::array(), z = json::array();
  for (int i = 0; i < p.S_basis.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < p.S_basis.cols(); ++j) row.push_back(p.S_basis(i, j));
    s.push_back(row);
  }
  for (int i = 0; i < p.Z_basis.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < p.Z_basis.cols(); ++j) row.push_back(p.Z_basis(i, j));
    z.push_back(row);
  }
  return json{{"S_basis", s},
              {"Z_basis", z},
              {"anchor", p.anchor},
              {"gap_ratio", p.gap_ratio},
              {"stable_dim", p.stable_dim()}};
}

inline json to_json(const PipelineReport& r) {
  json nc = json::array();
  for (const auto& c : r.noncritical) nc.push_back(to_json(c));
  json rep{{"system", r.system},
           {"rate", r.rate},
           {"a0_star", r.a0_star},
           {"sigma_min", r.sigma_min},
           {"verdict", to_string(r.verdict)},
           {"cause", r.cause},
           {"growth", to_json(r.growth)},
           {"decay", to_json(r.decay)},
           {"subspace_ok", r.subspace_ok},
           {"subspace_error", r.subspace_error},
           {"gap_ratio", r.gap_ratio},
           {"stable_dim", r.stable_dim},
           {"noncritical", nc},
           {"skipped_windows", r.skipped_windows},
           {"theta_best", r.theta_best},
           {"C_best", r.C_best},
           {"expansive", to_json(r.expansive)},
           {"beta_used", r.beta_used},
           {"construct_attempted", r.construct_attempted},
           {"construct_ok", r.construct_ok},
           {"construct_error", r.construct_error},
           {"exit_code", r.exit_code()}};
  if (r.construct_attempted) {
    rep["construct"] = json{{"D", r.constructed.D},
                            {"derived", to_json(r.constructed.derived)},
                            {"reverify", to_json(r.constructed.reverify)},
                            {"growth_bound_crosscheck", r.constructed.growth_bound_crosscheck}};
  } else {
    rep["construct"] = nullptr;
  }
  if (r.rescale_check) {
    rep["rescale_check"] = json{{"theta_dev", r.rescale_check->theta_dev},
                                {"L_dev", r.rescale_check->L_dev},
                                {"verdict", r.rescale_check->verdict},
                                {"verdict_agrees", r.rescale_check->verdict_agrees}};
  } else {
    rep["rescale_check"] = nullptr;
  }
  return rep;
}

/// Common envelope: schema version, tool provenance, seed, inputs echo.
inline json report_envelope(const std::string& command, const json& inputs, std::uint64_t seed) {
  return json{{"schema", kReportSchema},
              {"tool", {{"name", kToolName}, {"version", kVersion}}},
              {"command", command},
              {"seed", seed},
              {"inputs", inputs}};
}

}  // namespace hdich
