#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hdich/errors.hpp"
#include "hdich/evolution_family.hpp"
#include "hdich/growth_rate.hpp"
#include "hdich/rescale.hpp"
#include "hdich/systems.hpp"

namespace hdich {

// ============================================================================
// Run configuration
// ============================================================================
//
// Two input encodings for the same schema:
//   * flat key/value text, one nesting level via dotted keys
//       system.name = diag-hyperbolic
//       rate.name   = poly
//       grid.points = 50
//       C_list      = 0.5,1,2
//   * JSON with the dots turned into one level of objects.
//
// Unknown keys are rejected; a fixed seed makes every downstream report
// byte-identical.

struct RateSpec {
  std::string name = "exp";  // exp | poly | log | table
  double degree = 1.0;       // poly only
  std::vector<std::pair<double, double>> table;  // table only: strictly increasing (t, h)
};

struct SystemSpec {
  std::string name = "diag-hyperbolic";  // diag-hyperbolic | scalar-stable | rotation |
                                         // neutral | identity | matrix-ode
  std::string kind = "closed";           // closed | ode
  double lambda = 1.0;
  double omega = 1.0;
  int dim = 2;
  double integrator_step = 0.002;
  std::vector<std::vector<double>> matrix;  // matrix-ode: constant generator rows
  double conj_angle = 0.0;                  // conjugate 2x2 systems by a fixed rotation
  bool rescaled = false;                    // wrap in the rescaling; effective rate becomes exp
};

struct GridSpec {
  double sigma_min = 0.0;
  double sigma_max = 8.0;
  int points = 50;
};

struct RunConfig {
  SystemSpec system;
  RateSpec rate;
  GridSpec grid;
  std::optional<double> a0_star;  // overrides grid.sigma_min via sigma = ln h(a0*)
  double C = 1.0;
  std::vector<double> C_list{0.5, 1.0, 2.0};
  double beta = 1.0;
  double lambda = 1.0;
  double D = 1.0;
  double margin = 0.5;  // expansiveness -> noncriticality conversion margin
  double horizon = 8.0;
  double gap_threshold = 100.0;
  std::vector<double> projection_diag;  // 0/1 diagonal for check-dichotomy
  std::uint64_t seed = 0;
  int sphere_samples = 10000;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_flat_text(std::istream& in);
  nlohmann::json echo() const;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
  return out;
}

inline double parse_num(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw ConfigError("");
    return v;
  } catch (...) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + s + "'");
  }
}

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_num(tok, key));
  return out;
}

inline bool parse_bool(const std::string& s, const std::string& key) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  throw ConfigError("config: key '" + key + "' expects true/false");
}

// t1:h1,t2:h2,... pairs for table rates
inline std::vector<std::pair<double, double>> parse_pairs(const std::string& s,
                                                          const std::string& key) {
  std::vector<std::pair<double, double>> out;
  for (const auto& tok : split(s, ',')) {
    const auto parts = split(tok, ':');
    if (parts.size() != 2) throw ConfigError("config: key '" + key + "' expects t:h pairs");
    out.emplace_back(parse_num(parts[0], key), parse_num(parts[1], key));
  }
  return out;
}

}  // namespace detail

inline RunConfig RunConfig::from_flat_text(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config: line " + std::to_string(lineno) + " has an empty key or value");
    if (kv.count(key)) throw ConfigError("config: duplicate key '" + key + "'");
    kv[key] = val;
  }

  RunConfig rc;
  auto take = [&kv](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("system.name")) rc.system.name = *v;
  if (auto v = take("system.kind")) rc.system.kind = *v;
  if (auto v = take("system.lambda")) rc.system.lambda = detail::parse_num(*v, "system.lambda");
  if (auto v = take("system.omega")) rc.system.omega = detail::parse_num(*v, "system.omega");
  if (auto v = take("system.dim"))
    rc.system.dim = static_cast<int>(detail::parse_num(*v, "system.dim"));
  if (auto v = take("system.integrator_step"))
    rc.system.integrator_step = detail::parse_num(*v, "system.integrator_step");
  if (auto v = take("system.conj_angle"))
    rc.system.conj_angle = detail::parse_num(*v, "system.conj_angle");
  if (auto v = take("system.rescaled")) rc.system.rescaled = detail::parse_bool(*v, "system.rescaled");
  for (int r = 0; r < 8; ++r) {
    if (auto v = take("system.matrix.row" + std::to_string(r)))
      rc.system.matrix.push_back(detail::parse_list(*v, "system.matrix"));
  }

  if (auto v = take("rate.name")) rc.rate.name = *v;
  if (auto v = take("rate.degree")) rc.rate.degree = detail::parse_num(*v, "rate.degree");
  if (auto v = take("rate.table")) rc.rate.table = detail::parse_pairs(*v, "rate.table");

  if (auto v = take("grid.sigma_min")) rc.grid.sigma_min = detail::parse_num(*v, "grid.sigma_min");
  if (auto v = take("grid.sigma_max")) rc.grid.sigma_max = detail::parse_num(*v, "grid.sigma_max");
  if (auto v = take("grid.points"))
    rc.grid.points = static_cast<int>(detail::parse_num(*v, "grid.points"));

  if (auto v = take("a0_star")) rc.a0_star = detail::parse_num(*v, "a0_star");
  if (auto v = take("C")) rc.C = detail::parse_num(*v, "C");
  if (auto v = take("C_list")) rc.C_list = detail::parse_list(*v, "C_list");
  if (auto v = take("beta")) rc.beta = detail::parse_num(*v, "beta");
  if (auto v = take("lambda")) rc.lambda = detail::parse_num(*v, "lambda");
  if (auto v = take("D")) rc.D = detail::parse_num(*v, "D");
  if (auto v = take("margin")) rc.margin = detail::parse_num(*v, "margin");
  if (auto v = take("horizon")) rc.horizon = detail::parse_num(*v, "horizon");
  if (auto v = take("gap_threshold")) rc.gap_threshold = detail::parse_num(*v, "gap_threshold");
  if (auto v = take("projection")) rc.projection_diag = detail::parse_list(*v, "projection");
  if (auto v = take("seed"))
    rc.seed = static_cast<std::uint64_t>(detail::parse_num(*v, "seed"));
  if (auto v = take("sphere_samples"))
    rc.sphere_samples = static_cast<int>(detail::parse_num(*v, "sphere_samples"));

  if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");
  return rc;
}

inline RunConfig RunConfig::from_json(const nlohmann::json& j) {
  // Reuse the flat-text path by flattening one level.
  std::ostringstream flat;
  try {
    for (const auto& [key, val] : j.items()) {
      if (val.is_object()) {
        for (const auto& [k2, v2] : val.items()) {
          if (key == "system" && k2 == "matrix") {
            int r = 0;
            for (const auto& row : v2) {
              flat << "system.matrix.row" << r++ << " = ";
              for (std::size_t c = 0; c < row.size(); ++c)
                flat << (c ? "," : "") << row[c].dump();
              flat << "\n";
            }
          } else if (key == "rate" && k2 == "table") {
            flat << "rate.table = ";
            bool first = true;
            for (const auto& pair : v2) {
              flat << (first ? "" : ",") << pair[0].dump() << ":" << pair[1].dump();
              first = false;
            }
            flat << "\n";
          } else if (v2.is_string()) {
            flat << key << "." << k2 << " = " << v2.get<std::string>() << "\n";
          } else {
            flat << key << "." << k2 << " = " << v2.dump() << "\n";
          }
        }
      } else if (val.is_array()) {
        flat << key << " = ";
        for (std::size_t c = 0; c < val.size(); ++c) flat << (c ? "," : "") << val[c].dump();
        flat << "\n";
      } else if (val.is_string()) {
        flat << key << " = " << val.get<std::string>() << "\n";
      } else {
        flat << key << " = " << val.dump() << "\n";
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: malformed JSON structure: ") + e.what());
  }
  std::istringstream in(flat.str());
  return from_flat_text(in);
}

inline RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config: JSON parse error: ") + e.what());
    }
    return from_json(j);
  }
  std::istringstream flat(text);
  return from_flat_text(flat);
}

inline nlohmann::json RunConfig::echo() const {
  nlohmann::json sys{{"name", system.name},
                     {"kind", system.kind},
                     {"lambda", system.lambda},
                     {"omega", system.omega},
                     {"dim", system.dim},
                     {"integrator_step", system.integrator_step},
                     {"conj_angle", system.conj_angle},
                     {"rescaled", system.rescaled}};
  if (!system.matrix.empty()) sys["matrix"] = system.matrix;
  nlohmann::json rt{{"name", rate.name}, {"degree", rate.degree}};
  if (!rate.table.empty()) {
    nlohmann::json tb = nlohmann::json::array();
    for (const auto& [t, ht] : rate.table) tb.push_back({t, ht});
    rt["table"] = tb;
  }
  nlohmann::json out{{"system", sys},
                     {"rate", rt},
                     {"grid",
                      {{"sigma_min", grid.sigma_min},
                       {"sigma_max", grid.sigma_max},
                       {"points", grid.points}}},
                     {"C", C},
                     {"C_list", C_list},
                     {"beta", beta},
                     {"lambda", lambda},
                     {"D", D},
                     {"margin", margin},
                     {"horizon", horizon},
                     {"gap_threshold", gap_threshold},
                     {"seed", seed},
                     {"sphere_samples", sphere_samples}};
  if (a0_star) out["a0_star"] = *a0_star;
  if (!projection_diag.empty()) out["projection"] = projection_diag;
  return out;
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

inline GrowthRate make_rate(const RateSpec& spec) {
  if (spec.name == "exp") return GrowthRate::exponential();
  if (spec.name == "poly") return GrowthRate::polynomial(spec.degree);
  if (spec.name == "log") return GrowthRate::logarithmic();
  if (spec.name == "table") {
    if (spec.table.empty()) throw ConfigError("config: rate.table is required for table rates");
    return GrowthRate::from_table(spec.table);
  }
  throw ConfigError("config: unknown rate '" + spec.name + "'");
}

struct BuiltSystem {
  EvolutionFamily family;
  GrowthRate rate;  // effective rate (exp once rescaled)
};

inline BuiltSystem build_system(const RunConfig& rc) {
  const GrowthRate h = make_rate(rc.rate);
  const bool ode = rc.system.kind == "ode";
  if (rc.system.kind != "closed" && rc.system.kind != "ode")
    throw ConfigError("config: system.kind must be closed or ode");

  std::optional<EvolutionFamily> family;
  const auto& s = rc.system;
  if (s.name == "diag-hyperbolic") {
    family = ode ? systems::diagonal_hyperbolic_ode(h, s.lambda, s.integrator_step)
                 : systems::diagonal_hyperbolic(h, s.lambda);
  } else if (s.name == "scalar-stable") {
    if (ode) throw ConfigError("config: scalar-stable has no ode variant");
    family = systems::scalar_stable(h, s.lambda);
  } else if (s.name == "rotation") {
    family = ode ? systems::rotation_ode(s.omega, s.integrator_step) : systems::rotation(h, s.omega);
    if (ode && h.name() != "exp")
      throw ConfigError("config: rotation ode is generated in t; use rate.name = exp");
  } else if (s.name == "neutral") {
    family = ode ? systems::neutral_ode(h, s.lambda, s.integrator_step)
                 : systems::neutral(h, s.lambda);
  } else if (s.name == "identity") {
    if (ode) throw ConfigError("config: identity has no ode variant");
    family = systems::identity(h, s.dim);
  } else if (s.name == "matrix-ode") {
    if (s.matrix.empty()) throw ConfigError("config: matrix-ode requires system.matrix rows");
    const int n = static_cast<int>(s.matrix.size());
    Matrix a(n, n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(s.matrix[i].size()) != n)
        throw ConfigError("config: system.matrix must be square");
      for (int j = 0; j < n; ++j) a(i, j) = s.matrix[i][j];
    }
    family = systems::constant_ode(a, h.a0(), s.integrator_step);
  } else {
    throw ConfigError("config: unknown system '" + s.name + "'");
  }

  if (s.conj_angle != 0.0) {
    if (family->dim() != 2)
      throw ConfigError("config: system.conj_angle needs a 2-dimensional system");
    family = systems::conjugated(*family, systems::planar_rotation(s.conj_angle));
  }

  if (s.rescaled) {
    family = rescale_family(*family, h);
    return BuiltSystem{*family, GrowthRate::exponential()};
  }
  return BuiltSystem{*family, h};
}

}  // namespace hdich
