#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov/system.hpp"

namespace filippov {

enum class RegionKind { Sewing, Sliding, Escaping, TangencyX, TangencyY, DoubleTangency };
enum class Visibility { NotTangent, Visible, Invisible };
enum class DoubleKind { None, Elliptic, Parabolic, Hyperbolic };
enum class Special { None, TypeI, TypeII };
enum class Stability { Attracting, Repelling, SemiStable };

std::string to_string(RegionKind k);
std::string to_string(Visibility v);
std::string to_string(DoubleKind k);
std::string to_string(Special s);
std::string to_string(Stability s);

/// Region kind from the two first Lie derivatives (no tangency tolerance).
RegionKind region_from_signs(double Xf, double Yf);

/// Visibility from a contact order: X is invisible at an even order with
/// negative sign, Y at an even order with positive sign; odd orders are visible.
Visibility visibility(Side side, ContactOrder c);

/// Whether the field can leave the switching curve into its own region from p.
bool departs(const PiecewiseSystem& sys, Side side, Vec2 p, const Tolerances& tol);

struct SigmaPointReport {
  SigmaLoc loc;
  Vec2 point;
  double Xf = 0.0, Yf = 0.0;  // first Lie derivatives at the point
  RegionKind region = RegionKind::Sewing;
  ContactOrder orderX, orderY;  // order 1 when transversal
  Visibility visX = Visibility::NotTangent, visY = Visibility::NotTangent;
  bool equilibriumX = false, equilibriumY = false;  // field vanishes at the point
  DoubleKind dbl = DoubleKind::None;
  Special special = Special::None;
};

SigmaPointReport classify_point(const PiecewiseSystem& sys, SigmaLoc loc,
                                const Tolerances& tol = {});

struct SigmaInterval {
  int chart = 0;
  double lo = 0.0, hi = 0.0;
  RegionKind kind = RegionKind::Sewing;
  bool contains(int c, double s) const { return c == chart && s > lo && s < hi; }
};

struct SigmaBreakpoint {
  int chart = 0;
  double s = 0.0;
  bool endpoint = false;  // chart end (K boundary)
  bool tanX = false, tanY = false;
};

struct SigmaPartition {
  std::vector<SigmaBreakpoint> breakpoints;  // ordered by (chart, s)
  std::vector<SigmaInterval> intervals;      // tile every chart
  const SigmaInterval* find(int chart, double s) const;
  /// Interior breakpoint within `tol` of s on the chart, if any.
  const SigmaBreakpoint* breakpoint_near(int chart, double s, double tol) const;
};

SigmaPartition partition_sigma(const PiecewiseSystem& sys, const Tolerances& tol = {});

/// (X.f Y - Y.f X) / (X.f - Y.f) at sigma(s); throws NotSlidingOrEscaping
/// unless X.f and Y.f have strictly opposite signs.
Vec2 filippov_field(const PiecewiseSystem& sys, SigmaLoc loc);
Vec2 filippov_field_at(const PiecewiseSystem& sys, Vec2 p);

/// ds/dt of the sliding motion.
double sliding_speed(const PiecewiseSystem& sys, SigmaLoc loc);

struct Extension {
  enum class Kind { RegularFlowThrough, ExtendedPseudoEquilibrium, NotExtendable };
  Kind kind = Kind::NotExtendable;
  int direction = 0;  // sign of ds/dt for RegularFlowThrough
  std::optional<double> speed_below, speed_above;  // one-sided limits of ds/dt
};
std::string to_string(Extension::Kind k);

/// One-sided limits of the sliding field at a boundary point of the
/// sliding/escaping set.
Extension extend_filippov(const PiecewiseSystem& sys, SigmaLoc boundary,
                          const Tolerances& tol = {});

struct PseudoEquilibrium {
  SigmaLoc loc;
  Vec2 point;
  Stability stability = Stability::Attracting;
  RegionKind region = RegionKind::Sliding;
};

std::vector<PseudoEquilibrium> pseudo_equilibria(const PiecewiseSystem& sys,
                                                 const SigmaPartition& part,
                                                 const Tolerances& tol = {});

/// Everything `analyze` reports.
struct SigmaAnalysis {
  SigmaPartition partition;
  std::vector<SigmaPointReport> breakpoint_reports;
  std::vector<PseudoEquilibrium> pseudo_eqs;
  std::vector<Vec2> equilibriaX, equilibriaY;
  std::vector<std::string> warnings;
};
SigmaAnalysis analyze(const PiecewiseSystem& sys, const Tolerances& tol = {});

}  // namespace filippov
