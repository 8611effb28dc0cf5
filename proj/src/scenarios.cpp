#include "filippov/scenarios.hpp"

#include <cstdio>
#include <limits>

#include "filippov/errors.hpp"
#include "filippov/models.hpp"
#include "filippov/report.hpp"

namespace filippov {

namespace {

constexpr double kKeyTol = 1e-6;

RunSpec run(std::string label, Vec2 p0, double T, std::string policy, std::uint64_t seed,
            std::string expect, std::optional<Vec2> point = std::nullopt) {
  RunSpec r;
  r.label = std::move(label);
  r.p0 = p0;
  r.t_budget = T;
  r.policy = std::move(policy);
  r.seed = seed;
  r.expect = std::move(expect);
  r.expect_point = point;
  return r;
}

std::string fmt(const char* f, double a, double b) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

}  // namespace

std::vector<std::string> scenario_names() {
  return {"three-zone", "linear-center-center", "relay-template", "fold-fold-connection"};
}

ScenarioSpec builtin_scenario(const std::string& name) {
  ScenarioSpec s;
  s.name = name;
  if (name == "three-zone") {
    s.description = "X = (-y-1, x) outside the strip |x| < 1, Y = (-2y, x) inside";
    s.system = three_zone();
    s.runs.push_back(run("outer-circuit", {-1, 0}, 100, "X", 0, "MildPseudoCycle(I)", Vec2{-1, 0}));
    MinimalitySpec m;
    m.hub = {-1, 0};
    m.region = "circuit";
    m.outer = "X";
    m.hole = "Y";
    m.samples = 20;
    m.seed = 5;
    s.minimality = m;
  } else if (name == "linear-center-center") {
    s.description = "linear centers on both sides of x = 0, double tangency at (0,-1)";
    s.system = linear_center_center();
    s.runs.push_back(run("random", {2, 0}, 400, "random", 7, "ChaoticTypeIII", Vec2{0, -1}));
    s.runs.push_back(run("stay-sliding", {2, 0}, 500, "stay-sliding", 0, "PseudoEquilibrium", Vec2{0, 0}));
    MinimalitySpec m;
    m.hub = {0, -1};
    m.region = "lambda";
    m.samples = 20;
    m.seed = 5;
    s.minimality = m;
  } else if (name == "relay-template") {
    s.description = "relay feedback x' = A x + B sgn(C x), damped oscillator";
    s.system = relay_template();
    s.runs.push_back(run("always-x", {5, 0}, 400, "always-x", 0, "PseudoCycle(Crossing)"));
  } else if (name == "fold-fold-connection") {
    s.description = "two visible folds joined by an X-arc and a Y-arc around a pseudo-saddle";
    s.system = fold_fold_connection();
    const double a = fold_fold_a(s.system);
    s.runs.push_back(run("connection", {0, a}, 200, "always-x", 0, "PseudoCycle(Tangent)", Vec2{0, a}));
  } else {
    std::string known;
    for (const auto& n : scenario_names()) known += (known.empty() ? "" : ", ") + n;
    throw UnknownScenario("unknown scenario '" + name + "' (known: " + known + ")");
  }
  s.system.name = name;
  return s;
}

double key_distance(const OmegaReport& r, const Trajectory& traj, Vec2 p) {
  double d = std::numeric_limits<double>::infinity();
  const auto& e = r.evidence;
  if (e.limit_point) d = std::min(d, distance(*e.limit_point, p));
  if (e.vertex) d = std::min(d, distance(*e.vertex, p));
  if (e.period > 0 && e.cycle_time > 0) {
    // Σ-visits of the final repetition
    const double from = traj.t_end() - e.cycle_time * (1 + 1e-9);
    for (const auto& v : traj.visits)
      if (v.t >= from) d = std::min(d, distance(v.point, p));
  }
  return d;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, const ScenarioOverrides& ov) {
  ScenarioResult res;
  res.name = spec.name;
  const Tolerances tol = ov.tol.value_or(Tolerances{});
  const HybridModel model(spec.system, tol);
  std::string& log = res.log;
  log += "scenario " + spec.name + "\n";

  const SigmaAnalysis an = analyze(spec.system, tol);
  res.warnings = an.warnings;
  for (const auto& w : an.warnings) log += "warning " + w + "\n";
  for (const auto& iv : an.partition.intervals)
    log += "interval chart " + std::to_string(iv.chart) + fmt(" [%.9g, %.9g] ", iv.lo, iv.hi) +
           to_string(iv.kind) + "\n";
  for (const auto& pe : an.pseudo_eqs)
    log += "pseudo-equilibrium " + fmt("(%.9g, %.9g) ", pe.point.x, pe.point.y) +
           to_string(pe.stability) + "\n";

  bool mismatch = false;
  const auto emit = [&](const std::string& file, const std::string& text) {
    const std::string path = ov.out_dir + "/" + file;
    write_text(path, text);
    res.files.push_back(path);
  };

  for (const RunSpec& rs : spec.runs) {
    RunOutcome out;
    out.spec = rs;
    const std::uint64_t seed = ov.seed.value_or(rs.seed);
    out.trajectory = simulate(model, Start{rs.p0}, rs.t_budget, Policy::parse(rs.policy, seed));
    out.report = classify_omega(model, out.trajectory);
    const std::string tag = out.report.tag();
    log += "run " + rs.label + " policy " + rs.policy + " seed " + std::to_string(seed) + " arcs " +
           std::to_string(out.trajectory.arcs.size()) + " terminal " +
           to_string(out.trajectory.terminal.kind) + "\n";
    for (const auto& ev : out.trajectory.policy_log)
      log += "  branch " + fmt("t=%.9g s=%.9g ", ev.t, ev.loc ? ev.loc->s : 0.0) + ev.detail + "\n";
    log += "verdict " + rs.label + " " + tag;
    if (!rs.expect.empty() && tag != rs.expect) {
      out.matched = false;
      out.mismatch = "expected " + rs.expect;
    }
    if (rs.expect_point) {
      const double d = key_distance(out.report, out.trajectory, *rs.expect_point);
      if (!(d <= kKeyTol)) {
        out.matched = false;
        out.mismatch += (out.mismatch.empty() ? "" : "; ") +
                        fmt("key point (%.9g, %.9g)", rs.expect_point->x, rs.expect_point->y) +
                        " not on the limit set";
      }
    }
    log += out.matched ? " ok\n" : " MISMATCH " + out.mismatch + "\n";
    mismatch = mismatch || !out.matched;

    if (!ov.out_dir.empty()) {
      const std::string stem = spec.name + "-" + rs.label;
      emit(stem + ".csv", trajectory_csv(out.trajectory));
      SvgLayers layers;
      layers.trajectory = &out.trajectory;
      if (out.report.evidence.lambda) layers.lambda = &*out.report.evidence.lambda;
      emit(stem + ".svg", render_svg(model, layers));
      Json j = Json::object();
      j["scenario"] = spec.name;
      j["run"] = rs.label;
      j["policy"] = rs.policy;
      j["seed"] = seed;
      j["expected"] = rs.expect;
      j["matched"] = out.matched;
      j["omega"] = to_json(out.report);
      j["trajectory"] = trajectory_summary(out.trajectory);
      emit(stem + ".json", render_json(j));
    }
    res.runs.push_back(std::move(out));
  }

  if (spec.minimality && ov.minimality) {
    const MinimalitySpec& m = *spec.minimality;
    const auto loc = spec.system.curve().locate(m.hub, tol.on_sigma);
    if (!loc) throw ConfigError(fmt("minimality hub (%.9g, %.9g) is not on the curve", m.hub.x, m.hub.y));
    const LambdaRegion region = m.region == "lambda" ? construct_lambda(model, *loc)
                                                      : circuit_region(model, *loc, m.outer, m.hole);
    MinimalityOutcome mo;
    mo.area = region.area();
    mo.report = minimality_probe(model, region, m.hub, m.samples, ov.seed.value_or(m.seed));
    log += "minimality " + m.region + fmt(" hub (%.9g, %.9g)", m.hub.x, m.hub.y) + " samples " +
           std::to_string(mo.report.samples.size()) + " unreachable " +
           std::to_string(mo.report.unreachable_to_hub.size()) + "/" +
           std::to_string(mo.report.unreachable_from_hub.size()) +
           (mo.report.pass() ? " ok\n" : " MISMATCH\n");
    mismatch = mismatch || !mo.report.pass();
    if (!ov.out_dir.empty()) {
      SvgLayers layers;
      layers.lambda = &region;
      emit(spec.name + "-region.svg", render_svg(model, layers));
    }
    res.minimality = mo;
  }

  res.exit_code = ov.strict && !res.warnings.empty() ? 3 : mismatch ? 2 : 0;
  log += "exit " + std::to_string(res.exit_code) + "\n";
  return res;
}

ScenarioResult run_scenario(const std::string& name, const ScenarioOverrides& ov) {
  return run_scenario(builtin_scenario(name), ov);
}

}  // namespace filippov
