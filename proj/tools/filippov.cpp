// filippov: command line front end (analyze, simulate, classify-omega,
// chaos-check, scenario).
//
// Exit codes: 0 ok / expectation met, 1 error, 2 mismatch, 3 hypothesis
// warning under --strict.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "filippov/errors.hpp"
#include "filippov/io.hpp"
#include "filippov/report.hpp"
#include "filippov/scenarios.hpp"

using namespace filippov;

namespace {

struct Common {
  std::string system;
  std::vector<std::string> tol;  // name=value
  std::string config;
  std::string json, svg, csv;
};

struct Globals {
  std::uint64_t seed = 1;
  bool seed_set = false;
  bool strict = false;
};

Globals G;

// A path, or the name of a registered scenario.
PiecewiseSystem system_arg(const std::string& s) {
  if (!std::filesystem::exists(s)) {
    for (const auto& n : scenario_names())
      if (n == s) return builtin_scenario(n).system;
  }
  return load_system(s);
}

Tolerances tolerances(const Common& c, const RunConfig* cfg) {
  Tolerances t = Tolerances{}.with_env_overrides();
  if (cfg) t = cfg->apply(t);
  for (const auto& kv : c.tol) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--tol expects name=value, got '" + kv + "'");
    try {
      t.set(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
    } catch (const std::invalid_argument&) {
      throw ConfigError("--tol value is not a number: '" + kv + "'");
    }
  }
  return t;
}

void out_json(const std::string& path, const Json& j) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << render_json(j);
  } else {
    write_text(path, render_json(j));
  }
}

int strict_code(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return G.strict && !warnings.empty() ? 3 : 0;
}

std::string pt(Vec2 p) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "(%.10g, %.10g)", p.x, p.y);
  return buf;
}

// X = A p + b with f = x or f = -x, the form the exact linear test needs.
std::optional<LinearSpec> linear_spec_of(const PiecewiseSystem& sys) {
  const Poly2& f = sys.curve().f();
  if (f.degree() != 1 || f.coeff(0, 1) != 0 || f.coeff(0, 0) != 0) return std::nullopt;
  for (const PolyField* F : {&sys.X(), &sys.Y()})
    if (F->u.degree() > 1 || F->v.degree() > 1) return std::nullopt;
  auto mat = [](const PolyField& F) {
    return Mat2{{{F.u.coeff(1, 0), F.u.coeff(0, 1)}, {F.v.coeff(1, 0), F.v.coeff(0, 1)}}};
  };
  auto vec = [](const PolyField& F) { return Vec2{F.u.coeff(0, 0), F.v.coeff(0, 0)}; };
  const bool x_right = f.coeff(1, 0) > 0;
  const PolyField& P = x_right ? sys.X() : sys.Y();
  const PolyField& M = x_right ? sys.Y() : sys.X();
  return LinearSpec{mat(P), mat(M), vec(P), vec(M)};
}

// ---------------------------------------------------------------------------

int cmd_analyze(const Common& c) {
  const PiecewiseSystem sys = system_arg(c.system);
  const Tolerances tol = tolerances(c, nullptr);
  const SigmaAnalysis a = analyze(sys, tol);
  std::cout << "system " << (sys.name.empty() ? c.system : sys.name) << "\n";
  for (const auto& iv : a.partition.intervals)
    std::cout << "  chart " << iv.chart << " [" << iv.lo << ", " << iv.hi << "] " << to_string(iv.kind)
              << "\n";
  for (const auto& r : a.breakpoint_reports) {
    std::cout << "  breakpoint " << pt(r.point) << " " << to_string(r.region) << " X:" << to_string(r.visX)
              << " Y:" << to_string(r.visY);
    if (r.dbl != DoubleKind::None) std::cout << " " << to_string(r.dbl);
    if (r.special != Special::None) std::cout << " " << to_string(r.special);
    std::cout << "\n";
  }
  for (const auto& pe : a.pseudo_eqs)
    std::cout << "  pseudo-equilibrium " << pt(pe.point) << " " << to_string(pe.stability) << "\n";
  out_json(c.json, to_json(a, sys));
  if (!c.svg.empty()) write_text(c.svg, render_svg(HybridModel(sys, tol), SvgLayers{}));
  return strict_code(a.warnings);
}

struct RunArgs {
  std::vector<double> p0;
  double t_budget = 100.0;
  std::string policy = "stay-sliding";
  std::string expect;
};

struct Prepared {
  PiecewiseSystem sys;
  Tolerances tol;
  Vec2 p0;
  double T = 100.0;
  std::string policy;
  std::uint64_t seed = 1;
  std::string csv, svg, json;
};

Prepared prepare(const Common& c, const RunArgs& r) {
  std::optional<RunConfig> cfg;
  if (!c.config.empty()) cfg = load_run_config(c.config);
  Prepared p;
  const std::string sys_path = !c.system.empty() ? c.system : cfg ? cfg->system : "";
  if (sys_path.empty()) throw ConfigError("no system given");
  p.sys = system_arg(sys_path);
  p.tol = tolerances(c, cfg ? &*cfg : nullptr);
  if (r.p0.size() == 2) {
    p.p0 = {r.p0[0], r.p0[1]};
  } else if (cfg && cfg->p0) {
    p.p0 = *cfg->p0;
  } else {
    throw ConfigError("no starting point (--p0 or config p0)");
  }
  p.T = cfg && cfg->t_budget ? *cfg->t_budget : r.t_budget;
  p.policy = cfg && cfg->policy ? *cfg->policy : r.policy;
  p.seed = G.seed_set ? G.seed : cfg && cfg->seed ? *cfg->seed : G.seed;
  p.csv = !c.csv.empty() ? c.csv : cfg ? cfg->csv : "";
  p.svg = !c.svg.empty() ? c.svg : cfg ? cfg->svg : "";
  p.json = !c.json.empty() ? c.json : cfg ? cfg->report : "";
  return p;
}

int cmd_simulate(const Common& c, const RunArgs& r, bool classify) {
  const Prepared p = prepare(c, r);
  const HybridModel model(p.sys, p.tol);
  const Trajectory traj = simulate(model, Start{p.p0}, p.T, Policy::parse(p.policy, p.seed));
  std::cout << "arcs " << traj.arcs.size() << ", visits " << traj.visits.size() << ", terminal "
            << to_string(traj.terminal.kind) << " at t=" << traj.terminal.t << " " << pt(traj.terminal.point)
            << "\n";
  Json j = Json::object();
  j["policy"] = p.policy;
  j["seed"] = p.seed;
  j["p0"] = to_json(p.p0);
  j["trajectory"] = trajectory_summary(traj);
  std::optional<OmegaReport> rep;
  int code = 0;
  if (classify) {
    rep = classify_omega(model, traj);
    std::cout << "verdict " << rep->tag();
    if (rep->evidence.limit_point) std::cout << " at " << pt(*rep->evidence.limit_point);
    if (!rep->evidence.note.empty()) std::cout << " (" << rep->evidence.note << ")";
    std::cout << "\n";
    j["omega"] = to_json(*rep);
    if (!r.expect.empty()) {
      j["expected"] = r.expect;
      if (rep->tag() != r.expect) {
        std::cout << "mismatch: expected " << r.expect << "\n";
        code = 2;
      }
    }
  }
  if (!p.csv.empty()) write_text(p.csv, trajectory_csv(traj));
  if (!p.svg.empty()) {
    SvgLayers layers;
    layers.trajectory = &traj;
    if (rep && rep->evidence.lambda) layers.lambda = &*rep->evidence.lambda;
    write_text(p.svg, render_svg(model, layers));
  }
  out_json(p.json, j);
  const int s = strict_code(analyze(p.sys, p.tol).warnings);
  return s ? s : code;
}

struct ChaosArgs {
  std::optional<double> tangency;
  std::size_t probes = 20;
  double grid = 1e-2;
  double t_budget = 400.0;
};

int cmd_chaos(const Common& c, const ChaosArgs& a) {
  const PiecewiseSystem sys = system_arg(c.system);
  const Tolerances tol = tolerances(c, nullptr);
  const HybridModel model(sys, tol);
  Json j = Json::object();
  const ChaosConditions cc = chaos_conditions(model, G.seed, a.t_budget);
  std::cout << "double tangency            " << cc.double_tangency << "\n"
            << "parabolic or hyperbolic    " << cc.parabolic_or_hyperbolic << "\n"
            << "no crossing region in K    " << cc.no_crossing_in_K << "\n"
            << "two-sided visits witness   " << cc.two_sided_visits_witness << "\n";
  if (!cc.note.empty()) std::cout << "note: " << cc.note << "\n";
  j["conditions"] = to_json(cc);
  bool ok = cc.all();
  if (auto spec = linear_spec_of(sys)) {
    const LinearChaosReport lr = linear_chaos_conditions(*spec, tol);
    std::cout << "linear (i) " << lr.coincident << " [" << lr.coincidence_value << "]  (ii) " << lr.direction
              << "  (iii) " << lr.opposite_a12 << "  geometric agrees " << lr.consistent << "\n";
    j["linear"] = to_json(lr);
  }
  std::optional<LambdaRegion> L;
  if (a.tangency) {
    L = construct_lambda(model, *a.tangency);
  } else if (cc.tangency && cc.all()) {
    L = construct_lambda(model, *cc.tangency);
  }
  if (L) {
    std::cout << "lambda " << to_string(L->kind) << " area " << L->area() << " boundary gap " << L->max_gap
              << " holes " << L->holes.size() << "\n";
    j["lambda"] = to_json(*L);
    if (a.probes > 0) {
      const Theorem2Report t2 = theorem2_probes(model, *L, a.probes, G.seed, a.grid);
      std::cout << "probes (a) " << t2.a << " (b) " << t2.b << " coverage " << t2.coverage.covered << "/"
                << t2.coverage.interior << " (c) " << t2.c << " (d) " << t2.d << "\n";
      j["probes"] = to_json(t2);
      ok = ok && t2.pass();
    }
  }
  if (!c.svg.empty()) {
    SvgLayers layers;
    if (L) layers.lambda = &*L;
    write_text(c.svg, render_svg(model, layers));
  }
  out_json(c.json, j);
  const int s = strict_code(analyze(sys, tol).warnings);
  return s ? s : ok ? 0 : 2;
}

struct ScenarioArgs {
  std::string name;
  std::string file;
  std::string out;
  std::string export_dir;
  bool list = false;
  bool no_minimality = false;
};

int cmd_scenario(const Common& c, const ScenarioArgs& a) {
  if (a.list) {
    for (const auto& n : scenario_names()) std::cout << n << "\n";
    return 0;
  }
  if (!a.export_dir.empty()) {
    std::filesystem::create_directories(a.export_dir);
    for (const auto& n : scenario_names()) {
      const std::string path = a.export_dir + "/" + n + ".json";
      write_text(path, dump_scenario(builtin_scenario(n)));
      std::cout << path << "\n";
    }
    return 0;
  }
  ScenarioSpec spec;
  if (!a.file.empty()) {
    spec = load_scenario(a.file);
  } else if (!a.name.empty()) {
    spec = builtin_scenario(a.name);
  } else {
    throw ConfigError("scenario name or --file required");
  }
  ScenarioOverrides ov;
  if (G.seed_set) ov.seed = G.seed;
  ov.tol = tolerances(c, nullptr);
  ov.strict = G.strict;
  ov.minimality = !a.no_minimality;
  ov.out_dir = a.out;
  if (!ov.out_dir.empty()) std::filesystem::create_directories(ov.out_dir);
  const ScenarioResult r = run_scenario(spec, ov);
  std::cout << r.log;
  if (!c.json.empty()) {
    Json j = Json::object();
    j["scenario"] = r.name;
    Json runs = Json::array();
    for (const auto& o : r.runs) {
      Json jr = Json::object();
      jr["label"] = o.spec.label;
      jr["expected"] = o.spec.expect;
      jr["matched"] = o.matched;
      jr["omega"] = to_json(o.report);
      runs.push_back(jr);
    }
    j["runs"] = runs;
    if (r.minimality) j["minimality"] = to_json(r.minimality->report);
    j["warnings"] = r.warnings;
    j["exit"] = r.exit_code;
    out_json(c.json, j);
  }
  return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Filippov system analysis: sliding regions, hybrid simulation, limit sets"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.add_option("--seed", G.seed, "seed for every randomized policy and probe")
      ->each([](const std::string&) { G.seed_set = true; });
  app.add_flag("--strict", G.strict, "exit 3 when hypothesis checks warn");

  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_system) {
    auto* o = sub->add_option("system", common.system, "system JSON file or registered scenario name");
    if (needs_system) o->required();
    sub->add_option("--tol", common.tol, "tolerance override name=value (repeatable)");
    sub->add_option("--json", common.json, "JSON report path ('-' for stdout)");
    sub->add_option("--svg", common.svg, "SVG portrait path");
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "partition the switching curve and classify its points");
  add_common(analyze_cmd, true);

  RunArgs run;
  auto add_run = [&](CLI::App* sub) {
    add_common(sub, false);
    sub->add_option("--config", common.config, "run configuration JSON");
    sub->add_option("--p0", run.p0, "starting point x,y")->expected(2)->delimiter(',');
    sub->add_option("-T,--t-budget", run.t_budget, "time budget");
    sub->add_option("--policy", run.policy,
                    "always-x, always-y, stay-sliding, random, or a script such as \"X,S,Y\"");
    sub->add_option("--csv", common.csv, "trajectory CSV path");
  };
  auto* sim_cmd = app.add_subcommand("simulate", "integrate one hybrid trajectory");
  add_run(sim_cmd);
  auto* omega_cmd = app.add_subcommand("classify-omega", "simulate and classify the omega-limit set");
  add_run(omega_cmd);
  omega_cmd->add_option("--expect", run.expect, "expected verdict tag; exit 2 on mismatch");

  ChaosArgs chaos;
  auto* chaos_cmd = app.add_subcommand("chaos-check", "chaos conditions, region construction and probes");
  add_common(chaos_cmd, true);
  chaos_cmd->add_option("--tangency", chaos.tangency, "curve parameter of the double tangency");
  chaos_cmd->add_option("--probes", chaos.probes, "number of sampled probe points (0 to skip)");
  chaos_cmd->add_option("--grid", chaos.grid, "coverage grid spacing");
  chaos_cmd->add_option("-T,--t-budget", chaos.t_budget, "budget of the two-sided witness run");

  ScenarioArgs sc;
  auto* sc_cmd = app.add_subcommand("scenario", "run a registered scenario against its expectations");
  sc_cmd->add_option("name", sc.name, "scenario name");
  sc_cmd->add_option("--file", sc.file, "scenario JSON file instead of a registered name");
  sc_cmd->add_option("--out", sc.out, "directory for CSV, SVG and JSON outputs");
  sc_cmd->add_option("--export", sc.export_dir, "write every registered scenario as JSON into a directory");
  sc_cmd->add_option("--tol", common.tol, "tolerance override name=value (repeatable)");
  sc_cmd->add_option("--json", common.json, "JSON summary path ('-' for stdout)");
  sc_cmd->add_flag("--list", sc.list, "list registered scenarios");
  sc_cmd->add_flag("--no-minimality", sc.no_minimality, "skip the minimality probe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(common);
    if (*sim_cmd) return cmd_simulate(common, run, false);
    if (*omega_cmd) return cmd_simulate(common, run, true);
    if (*chaos_cmd) return cmd_chaos(common, chaos);
    if (*sc_cmd) return cmd_scenario(common, sc);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
