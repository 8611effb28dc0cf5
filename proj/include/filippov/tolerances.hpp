#pragma once

#include <string>

namespace filippov {

/// Numerical thresholds shared by every module. All are overridable from the
/// CLI, a run config, or FILIPPOV_TOL_<NAME> environment variables.
struct Tolerances {
  double on_sigma = 1e-9;   // |f| for membership of the switching curve
  double tan = 1e-9;        // Lie-derivative zero test
  double root = 1e-10;      // root isolation resolution
  double event = 1e-11;     // |f| at a located crossing
  double flow = 1e-12;      // integrator local error target
  double speed = 1e-9;      // sliding speed treated as stopped
  double cycle = 1e-6;      // return-map agreement for cycle detection
  double dedup = 1e-7;      // branch-tree state merging
  double graze = 1e-8;      // depth of a tangential touch counted as contact
  int max_order = 8;        // highest Lie derivative probed for contact order

  /// Every scalar tolerance multiplied by `k` (used by the halving check).
  Tolerances scaled(double k) const;

  /// Applies FILIPPOV_TOL_* overrides from the process environment.
  Tolerances with_env_overrides() const;

  /// Sets one named tolerance; throws ConfigError for unknown names or values
  /// outside [1e-14, 1e-2].
  void set(const std::string& name, double value);
};

}  // namespace filippov
