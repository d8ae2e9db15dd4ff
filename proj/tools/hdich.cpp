// Batch front end: parse a system/rate/config description, run the checkers
// or the full pipeline, and emit machine-readable reports plus plot-ready CSV.
//
// Exit codes: 0 pass/dichotomic, 1 fail/not-dichotomic, 2 inconclusive,
// 64 configuration error, 70 numerical error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hdich/hdich.hpp"
#include "hdich/report_json.hpp"
#include "hdich/run_config.hpp"

namespace fs = std::filesystem;
using namespace hdich;

namespace {

constexpr int kExitConfig = 64;
constexpr int kExitNumerical = 70;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "json";  // json | csv (csv is emitted in addition)
  std::optional<std::uint64_t> seed;
  std::optional<double> C, beta, lambda, D, horizon, margin;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool config_required = true) {
  auto* opt = cmd->add_option("--config", args.config_path, "run configuration file (flat text or JSON)");
  if (config_required) opt->required();
  cmd->add_option("--out", args.out_dir, "output directory for reports");
  cmd->add_option("--seed", args.seed, "seed for the sphere sampling");
  cmd->add_option("--format", args.format, "json (default) or csv to also emit plot data")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--C", args.C, "noncriticality window in sigma units");
  cmd->add_option("--beta", args.beta, "expansiveness exponent");
  cmd->add_option("--lambda", args.lambda, "dichotomy exponent to verify");
  cmd->add_option("--D", args.D, "dichotomy constant to verify");
  cmd->add_option("--horizon", args.horizon, "subspace-splitting horizon in sigma units");
  cmd->add_option("--margin", args.margin, "margin for the expansiveness-to-noncriticality window");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig rc = RunConfig::from_file(args.config_path);
  if (args.seed) rc.seed = *args.seed;
  if (args.C) rc.C = *args.C;
  if (args.beta) rc.beta = *args.beta;
  if (args.lambda) rc.lambda = *args.lambda;
  if (args.D) rc.D = *args.D;
  if (args.horizon) rc.horizon = *args.horizon;
  if (args.margin) rc.margin = *args.margin;
  return rc;
}

SigmaGrid make_grid(const RunConfig& rc, const GrowthRate& h) {
  double smin = rc.grid.sigma_min;
  if (rc.a0_star) smin = h.log_eval(*rc.a0_star);
  if (!(rc.grid.sigma_max > smin))
    throw ConfigError("config: grid.sigma_max must exceed the effective sigma_min");
  return SigmaGrid(h, smin, rc.grid.sigma_max, rc.grid.points);
}

SphereSearchConfig sphere_config(const RunConfig& rc) {
  SphereSearchConfig sc;
  sc.dense_samples = rc.sphere_samples;
  sc.seed = rc.seed;
  return sc;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

void write_report(const CommonArgs& args, const std::string& name, const json& report) {
  fs::create_directories(args.out_dir);
  const fs::path path = fs::path(args.out_dir) / (name + "_report.json");
  write_text(path, report.dump(2) + "\n");
  std::cout << "report: " << path.string() << "\n";
}

// sigma, t, ||T(t, t0)||, ||T(t0, t)|| per grid node.
void write_grid_csv(const CommonArgs& args, const std::string& name, const SigmaGrid& grid,
                    const EvolutionFamily& family) {
  if (args.format != "csv") return;
  std::string csv = "sigma,t,norm_from_start,norm_to_start\n";
  char buf[160];
  for (int i = 0; i < grid.size(); ++i) {
    const double fwd = operator_norm(family(grid.t(i), grid.t(0)));
    const double bwd = operator_norm(family(grid.t(0), grid.t(i)));
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", grid.sigma(i), grid.t(i), fwd, bwd);
    csv += buf;
  }
  const fs::path path = fs::path(args.out_dir) / (name + ".csv");
  write_text(path, csv);
  std::cout << "csv: " << path.string() << "\n";
}

void write_profile_csv(const CommonArgs& args, const std::string& name,
                       const std::string& header,
                       const std::vector<std::pair<double, double>>& rows) {
  if (args.format != "csv") return;
  std::string csv = header + "\n";
  char buf[80];
  for (const auto& [a, b] : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", a, b);
    csv += buf;
  }
  const fs::path path = fs::path(args.out_dir) / (name + ".csv");
  write_text(path, csv);
  std::cout << "csv: " << path.string() << "\n";
}

int cmd_check_growth(const CommonArgs& args, BoundMode mode) {
  const RunConfig rc = load_config(args);
  const auto [family, rate] = build_system(rc);
  const SigmaGrid grid = make_grid(rc, rate);
  const std::string name = mode == BoundMode::Growth ? "check-growth" : "check-decay";
  const GrowthBound gb = fit_growth_bound(family, rate, grid, mode);
  json rep = report_envelope(name, rc.echo(), rc.seed);
  rep["result"] = to_json(gb);
  rep["verdict"] = "pass";
  rep["exit_code"] = 0;
  write_report(args, name, rep);
  write_grid_csv(args, name, grid, family);
  std::printf("%s: K=%.6g mu=%.6g%s\n", name.c_str(), gb.K, gb.mu,
              gb.degenerate ? " (degenerate fit)" : "");
  return 0;
}

int cmd_check_dichotomy(const CommonArgs& args) {
  const RunConfig rc = load_config(args);
  const auto [family, rate] = build_system(rc);
  const SigmaGrid grid = make_grid(rc, rate);
  if (rc.projection_diag.empty())
    throw ConfigError("check-dichotomy requires 'projection' (diagonal 0/1 entries)");
  if (static_cast<int>(rc.projection_diag.size()) != family.dim())
    throw ConfigError("check-dichotomy: projection size must match the system dimension");
  Matrix p = Matrix::Zero(family.dim(), family.dim());
  for (int i = 0; i < family.dim(); ++i) p(i, i) = rc.projection_diag[i];
  const ProjectionFamily proj = ProjectionFamily::constant(p);
  const DichotomyReport dr = verify_h_dichotomy(family, rate, proj, {rc.D, rc.lambda}, grid);
  json rep = report_envelope("check-dichotomy", rc.echo(), rc.seed);
  rep["result"] = to_json(dr);
  rep["verdict"] = dr.pass ? "pass" : "fail";
  rep["exit_code"] = dr.pass ? 0 : 1;
  write_report(args, "check-dichotomy", rep);
  write_grid_csv(args, "check-dichotomy", grid, family);
  std::printf("check-dichotomy: %s (max violation %.3g, tol %.3g)\n",
              dr.pass ? "pass" : "fail",
              std::max({dr.max_violation_invariance, dr.max_violation_stable,
                        dr.max_violation_unstable}),
              dr.tol);
  return dr.pass ? 0 : 1;
}

int cmd_check_expansive(const CommonArgs& args) {
  const RunConfig rc = load_config(args);
  const auto [family, rate] = build_system(rc);
  const SigmaGrid grid = make_grid(rc, rate);
  const ExpansivenessConstants ex =
      estimate_expansiveness(family, rate, rc.beta, grid, sphere_config(rc));
  json rep = report_envelope("check-expansive", rc.echo(), rc.seed);
  rep["result"] = to_json(ex);
  if (!ex.diverging) rep["induced_noncritical"] = to_json(expansive_to_noncritical(ex, rc.margin));
  rep["verdict"] = ex.diverging ? "fail" : "pass";
  rep["exit_code"] = ex.diverging ? 1 : 0;
  write_report(args, "check-expansive", rep);
  write_profile_csv(args, "check-expansive", "window_width,max_ratio", ex.window_profile);
  std::printf("check-expansive: %s (L=%.6g at beta=%.6g%s)\n", ex.diverging ? "fail" : "pass",
              ex.L, ex.beta, ex.diverging ? ", ratios diverge with window width" : "");
  return ex.diverging ? 1 : 0;
}

int cmd_check_noncritical(const CommonArgs& args) {
  const RunConfig rc = load_config(args);
  const auto [family, rate] = build_system(rc);
  const SigmaGrid grid = make_grid(rc, rate);
  const NoncriticalityConstants nc =
      estimate_noncriticality(family, rate, rc.C, grid, sphere_config(rc));
  json rep = report_envelope("check-noncritical", rc.echo(), rc.seed);
  rep["result"] = to_json(nc);
  rep["verdict"] = nc.pass ? "pass" : "fail";
  rep["exit_code"] = nc.pass ? 0 : 1;
  write_report(args, "check-noncritical", rep);
  write_profile_csv(args, "check-noncritical", "sigma,theta", nc.theta_profile);
  std::printf("check-noncritical: %s (theta=%.6g at C=%.6g)\n", nc.pass ? "pass" : "fail",
              nc.theta, nc.C);
  return nc.pass ? 0 : 1;
}

int cmd_rescale(const CommonArgs& args) {
  RunConfig rc = load_config(args);
  if (rc.system.rescaled) throw ConfigError("rescale: system is already rescaled");
  const auto [family, rate] = build_system(rc);
  if (rate.name() == "exp")
    std::cout << "note: rate is already exponential; rescaling is the identity\n";
  const EvolutionFamily rescaled = rescale_family(family, rate);
  const GrowthRate expr = GrowthRate::exponential();
  const SigmaGrid grid = make_grid(rc, rate);
  const SigmaGrid sgrid(expr, grid.sigma_min(), grid.sigma_max(), grid.size());

  // Evolution-family invariants of the rescaled family on the sigma grid.
  double max_identity = 0, max_cocycle = 0, max_inverse = 0;
  const int n = sgrid.size();
  const Matrix id = Matrix::Identity(family.dim(), family.dim());
  for (int i = 0; i < n; ++i)
    max_identity = std::max(max_identity, operator_norm(rescaled(sgrid.t(i), sgrid.t(i)) - id));
  const int stride = std::max(1, n / 10);
  for (int i = 0; i < n; i += stride)
    for (int j = 0; j <= i; j += stride) {
      max_inverse = std::max(max_inverse,
                             operator_norm(rescaled(sgrid.t(i), sgrid.t(j)) *
                                               rescaled(sgrid.t(j), sgrid.t(i)) -
                                           id));
      for (int k = 0; k <= j; k += stride)
        max_cocycle = std::max(
            max_cocycle, operator_norm(rescaled(sgrid.t(i), sgrid.t(k)) -
                                       rescaled(sgrid.t(i), sgrid.t(j)) *
                                           rescaled(sgrid.t(j), sgrid.t(k))));
    }
  const double tol = family.native_tol();
  const bool pass = max_identity <= tol && max_cocycle <= tol && max_inverse <= tol;

  // Emit a config for the rescaled family; downstream runs use rate = exp.
  RunConfig emitted = rc;
  emitted.system.rescaled = true;
  fs::create_directories(args.out_dir);
  const fs::path cfg_path = fs::path(args.out_dir) / "rescaled_config.json";
  write_text(cfg_path, emitted.echo().dump(2) + "\n");

  json rep = report_envelope("rescale", rc.echo(), rc.seed);
  rep["result"] = {{"max_identity", max_identity},
                   {"max_cocycle", max_cocycle},
                   {"max_inverse_consistency", max_inverse},
                   {"tol", tol},
                   {"emitted_config", cfg_path.string()}};
  rep["verdict"] = pass ? "pass" : "fail";
  rep["exit_code"] = pass ? 0 : 1;
  write_report(args, "rescale", rep);
  write_grid_csv(args, "rescale", sgrid, rescaled);
  std::printf("rescale: %s (cocycle %.3g, emitted %s)\n", pass ? "pass" : "fail", max_cocycle,
              cfg_path.string().c_str());
  return pass ? 0 : 1;
}

int cmd_construct(const CommonArgs& args) {
  const RunConfig rc = load_config(args);
  const auto [family, rate] = build_system(rc);
  const SigmaGrid grid = make_grid(rc, rate);
  const double a0_star = rc.a0_star ? *rc.a0_star : grid.t(0);
  json rep = report_envelope("construct", rc.echo(), rc.seed);
  try {
    const SubspacePair pair = stable_subspace(family, rate, a0_star, rc.horizon, rc.gap_threshold);
    const ProjectionFamily proj = build_projections(family, pair);
    const double d_bound = uniform_stable_bound(family, proj, grid);
    const NoncriticalityConstants nc =
        estimate_noncriticality(family, rate, rc.C, grid, sphere_config(rc));
    rep["subspace"] = to_json(pair);
    rep["D"] = d_bound;
    rep["noncritical"] = to_json(nc);
    if (!(nc.theta < 1.0)) {
      rep["verdict"] = "fail";
      rep["exit_code"] = 1;
      write_report(args, "construct", rep);
      std::printf("construct: fail (theta=%.6g >= 1 at C=%.6g)\n", nc.theta, nc.C);
      return 1;
    }
    const DerivedConstants derived = derive_constants(nc.theta, nc.C, d_bound);
    const DichotomyReport reverify =
        verify_h_dichotomy(family, rate, proj, {derived.B, derived.alpha}, grid);
    rep["derived"] = to_json(derived);
    rep["reverify"] = to_json(reverify);
    rep["verdict"] = reverify.pass ? "pass" : "fail";
    rep["exit_code"] = reverify.pass ? 0 : 1;
    write_report(args, "construct", rep);
    std::printf("construct: %s (B=%.6g alpha=%.6g D=%.6g)\n", reverify.pass ? "pass" : "fail",
                derived.B, derived.alpha, d_bound);
    return reverify.pass ? 0 : 1;
  } catch (const NoGapError& e) {
    rep["subspace"] = nullptr;
    rep["error"] = e.what();
    rep["verdict"] = "fail";
    rep["exit_code"] = 1;
    write_report(args, "construct", rep);
    std::printf("construct: fail (%s)\n", e.what());
    return 1;
  }
}

int cmd_pipeline(const CommonArgs& args) {
  const RunConfig rc = load_config(args);
  const auto [family, rate] = build_system(rc);
  const SigmaGrid grid = make_grid(rc, rate);
  const double a0_star = rc.a0_star ? *rc.a0_star : grid.t(0);
  PipelineConfig pc;
  pc.sigma_span = grid.sigma_max() - grid.sigma_min();
  pc.grid_points = grid.size();
  pc.horizon_sigma = rc.horizon;
  pc.gap_threshold = rc.gap_threshold;
  pc.C_list = rc.C_list;
  pc.sphere = sphere_config(rc);
  const PipelineReport pr = equivalence_pipeline(family, rate, a0_star, pc);
  json rep = report_envelope("pipeline", rc.echo(), rc.seed);
  rep["result"] = to_json(pr);
  rep["verdict"] = to_string(pr.verdict);
  rep["exit_code"] = pr.exit_code();
  write_report(args, "pipeline", rep);
  write_grid_csv(args, "pipeline", grid, family);
  std::printf("pipeline: %s", to_string(pr.verdict).c_str());
  if (pr.verdict == Verdict::Dichotomic)
    std::printf(" (theta=%.6g at C=%.6g, B=%.6g, alpha=%.6g)", pr.theta_best, pr.C_best,
                pr.constructed.derived.B, pr.constructed.derived.alpha);
  else if (!pr.cause.empty())
    std::printf(" (%s)", pr.cause.c_str());
  std::printf("\n");
  return pr.exit_code();
}

int cmd_demo(const CommonArgs& args) {
  // Reference systems with their closed-form ratios next to the estimates.
  struct Row {
    std::string label;
    PipelineReport rep;
    double theta_formula;
  };
  std::vector<Row> rows;
  SphereSearchConfig sc;
  sc.dense_samples = 4000;
  sc.seed = args.seed.value_or(0);
  PipelineConfig pc;
  pc.sigma_span = 6.0;
  pc.grid_points = 31;
  pc.horizon_sigma = 6.0;
  pc.C_list = {1.0};
  pc.sphere = sc;

  const auto poly = GrowthRate::polynomial();
  const auto expr = GrowthRate::exponential();
  rows.push_back({"scalar-stable  h=poly",
                  equivalence_pipeline(systems::scalar_stable(poly, 1.0), poly, 1.0, pc),
                  std::exp(-1.0)});
  rows.push_back({"diag-hyperbolic h=poly",
                  equivalence_pipeline(systems::diagonal_hyperbolic(poly, 1.0), poly, 1.0, pc),
                  1.0 / std::sqrt(std::cosh(2.0))});
  rows.push_back({"rotation       h=exp",
                  equivalence_pipeline(systems::rotation(expr, 1.0), expr, 0.0, pc), 1.0});
  rows.push_back({"neutral        h=poly",
                  equivalence_pipeline(systems::neutral(poly, 1.0), poly, 1.0, pc), 1.0});

  std::printf("%-24s %12s %14s %10s  %s\n", "system", "theta(C=1)", "theta formula", "L", "verdict");
  json table = json::array();
  for (const auto& row : rows) {
    std::printf("%-24s %12.6f %14.6f %10.6f  %s\n", row.label.c_str(), row.rep.theta_best,
                row.theta_formula, row.rep.expansive.L, to_string(row.rep.verdict).c_str());
    table.push_back({{"system", row.label},
                     {"theta_est", row.rep.theta_best},
                     {"theta_formula", row.theta_formula},
                     {"L_est", row.rep.expansive.L},
                     {"verdict", to_string(row.rep.verdict)},
                     {"report", to_json(row.rep)}});
  }
  json rep = report_envelope("demo", json::object(), sc.seed);
  rep["result"] = table;
  rep["exit_code"] = 0;
  write_report(args, "demo", rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized-dichotomy toolkit for evolution families"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);

  CommonArgs args;
  auto* growth = app.add_subcommand("check-growth", "fit a bounded-growth envelope");
  add_common(growth, args);
  auto* decay = app.add_subcommand("check-decay", "fit a bounded-decay envelope");
  add_common(decay, args);
  auto* dich = app.add_subcommand("check-dichotomy", "verify dichotomy bounds for given P, D, lambda");
  add_common(dich, args);
  auto* expans = app.add_subcommand("check-expansive", "estimate the expansiveness constant L");
  add_common(expans, args);
  auto* noncrit = app.add_subcommand("check-noncritical", "estimate the noncriticality ratio theta");
  add_common(noncrit, args);
  auto* resc = app.add_subcommand("rescale", "validate the rescaled family and emit its config");
  add_common(resc, args);
  auto* constr = app.add_subcommand("construct", "build projections and dichotomy constants");
  add_common(constr, args);
  auto* pipe = app.add_subcommand("pipeline", "run the full equivalence pipeline");
  add_common(pipe, args);
  auto* demo = app.add_subcommand("demo", "run the reference systems and print a comparison table");
  add_common(demo, args, /*config_required=*/false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (growth->parsed()) return cmd_check_growth(args, BoundMode::Growth);
    if (decay->parsed()) return cmd_check_growth(args, BoundMode::Decay);
    if (dich->parsed()) return cmd_check_dichotomy(args);
    if (expans->parsed()) return cmd_check_expansive(args);
    if (noncrit->parsed()) return cmd_check_noncritical(args);
    if (resc->parsed()) return cmd_rescale(args);
    if (constr->parsed()) return cmd_construct(args);
    if (pipe->parsed()) return cmd_pipeline(args);
    if (demo->parsed()) return cmd_demo(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const RangeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const EmptyRegionError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
