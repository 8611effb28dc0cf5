#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "filippov/limitset.hpp"

namespace filippov {

// ---------------------------------------------------------------------------
// system files
//
// {
//   "name": "three-zone",                       optional
//   "f": [[i, j, c], ...],
//   "X": [[[i, j, c], ...], [[i, j, c], ...]],
//   "Y": [...],
//   "K": [xmin, xmax, ymin, ymax],
//   "sigma": {"kind": "vertical-line", "x0": 1, "alpha": -3, "beta": 3}
//            or a list of such charts,
//   "scenario": {...}                           optional, see ScenarioSpec
// }
//
// Chart parameters: vertical-line {x0}, circle {center: [x, y], radius},
// explicit-parametric {px: [c0, c1, ...], py: [...]}; all carry alpha, beta.

/// Throws ParseError (with line and column) or SchemaError (with field path).
PiecewiseSystem load_system(const std::string& path);
PiecewiseSystem parse_system(const std::string& text, const std::string& origin = "<string>");
std::string dump_system(const PiecewiseSystem& sys);
void save_system(const PiecewiseSystem& sys, const std::string& path);

// ---------------------------------------------------------------------------
// scenarios

struct RunSpec {
  std::string label;
  Vec2 p0;
  double t_budget = 100.0;
  std::string policy = "stay-sliding";
  std::uint64_t seed = 0;
  std::string expect;                 // verdict tag, empty for none
  std::optional<Vec2> expect_point;   // key location of the limit set
};

struct MinimalitySpec {
  Vec2 hub;
  std::string region = "lambda";  // "lambda" or "circuit"
  std::string outer, hole;        // circuit scripts
  std::size_t samples = 20;
  std::uint64_t seed = 1;
};

struct ScenarioSpec {
  std::string name;
  std::string description;
  PiecewiseSystem system;
  std::vector<RunSpec> runs;
  std::optional<MinimalitySpec> minimality;
};

ScenarioSpec load_scenario(const std::string& path);
ScenarioSpec parse_scenario(const std::string& text, const std::string& origin = "<string>");
std::string dump_scenario(const ScenarioSpec& spec);

// ---------------------------------------------------------------------------
// run configuration
//
// {"system": "path.json", "p0": [x, y], "t_budget": 100, "policy": "random",
//  "seed": 7, "tolerances": {"flow": 1e-12}, "csv": "...", "svg": "...",
//  "report": "..."}

struct RunConfig {
  std::string system;
  std::optional<Vec2> p0;
  std::optional<double> t_budget;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::map<std::string, double> tolerances;
  std::string csv, svg, report;

  /// Defaults with the overrides applied; throws ConfigError when out of range.
  Tolerances apply(Tolerances base) const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<string>");

// ---------------------------------------------------------------------------
// emitted files

/// Columns t,x,y,mode,arc_index,event_flag; one row per arc sample.
std::string trajectory_csv(const Trajectory& traj);

struct SvgLayers {
  const Trajectory* trajectory = nullptr;
  const LambdaRegion* lambda = nullptr;
  bool partition = true;
};

/// Deterministic 800x800 portrait of K (5% margin): the curve colored by
/// region kind, breakpoints and pseudo-equilibria marked, arcs by mode.
std::string render_svg(const HybridModel& model, const SvgLayers& layers);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);  // IoError

}  // namespace filippov
