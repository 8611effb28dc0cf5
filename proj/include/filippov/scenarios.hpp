#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov/io.hpp"

namespace filippov {

/// three-zone, linear-center-center, relay-template, fold-fold-connection
std::vector<std::string> scenario_names();

/// Throws UnknownScenario.
ScenarioSpec builtin_scenario(const std::string& name);

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;  // replaces every run and probe seed
  std::optional<Tolerances> tol;
  bool strict = false;       // hypothesis warnings -> exit 3
  bool minimality = true;    // run the minimality probe when the scenario has one
  std::string out_dir;       // CSV, SVG and JSON per run when set
};

struct RunOutcome {
  RunSpec spec;
  OmegaReport report;
  bool matched = true;
  std::string mismatch;
  Trajectory trajectory;
};

struct MinimalityOutcome {
  MinimalityReport report;
  double area = 0.0;
};

struct ScenarioResult {
  std::string name;
  std::vector<std::string> warnings;
  std::vector<RunOutcome> runs;
  std::optional<MinimalityOutcome> minimality;
  std::vector<std::string> files;
  std::string log;  // deterministic one-line-per-check transcript
  int exit_code = 0;  // 0 match, 2 mismatch, 3 strict warning
};

ScenarioResult run_scenario(const ScenarioSpec& spec, const ScenarioOverrides& ov = {});
ScenarioResult run_scenario(const std::string& name, const ScenarioOverrides& ov = {});

/// Distance from `p` to the key location of the verdict: limit point,
/// graph vertex, or the Σ-visits of the final cycle.
double key_distance(const OmegaReport& r, const Trajectory& traj, Vec2 p);

}  // namespace filippov
