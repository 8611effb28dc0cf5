#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "filippov/integrator.hpp"

namespace filippov {

// ---------------------------------------------------------------------------
// return sequences

struct ReturnEvent {
  double t = 0.0;
  SigmaLoc loc;
  Vec2 point;
  RegionKind region = RegionKind::Sewing;
  std::optional<Mode> mode_in, mode_out;
  EventKind arrival = EventKind::Start;
  bool branched = false;
  std::string choice;
};

struct ReturnSequence {
  std::vector<ReturnEvent> events;
  EventRecord terminal;
};

ReturnSequence return_sequence(const Trajectory& traj);

/// Compact label of a return event, e.g. "Sewing:X>Y".
std::string signature_token(const ReturnEvent& e);

// ---------------------------------------------------------------------------
// chaotic regions

struct Polygon {
  std::vector<Vec2> pts;  // closed implicitly
  double signed_area() const;
  bool contains(Vec2 p) const;  // even-odd rule
};

/// Compact region bounded by trajectory arcs and pieces of the curve.
struct LambdaRegion {
  enum class Kind { Parabolic, Hyperbolic, Circuit };
  Kind kind = Kind::Parabolic;
  std::vector<Arc> boundary_arcs;  // outer boundary in order, then the holes
  Polygon outer;
  std::vector<Polygon> holes;
  int chart = 0;
  double tangency_s = 0.0;
  double q_e_plus = 0.0, q_e_minus = 0.0;  // exits whose Y- (X-) orbit bounds the region
  double p_s = 0.0, p_e = 0.0;
  double sigma_lo = 0.0, sigma_hi = 0.0;  // curve segment inside the region
  Vec2 hub;
  double max_gap = 0.0;  // largest junction gap of the boundary
  bool curve_only = false;  // the region is the closed curve itself
  std::string script;       // circuit regions: policy script of the outer curve
  double period = 0.0;      // circuit regions: time around the outer curve

  double area() const;
  bool contains(Vec2 p) const;
  Box bbox() const;
  double boundary_distance(Vec2 p) const;
};
std::string to_string(LambdaRegion::Kind k);

/// Region of the coincident-tangency construction: bounded by the X- and
/// Y-orbits of the outermost escaping exits that still return to the sliding
/// side, with the closed orbits through the tangency removed.
LambdaRegion construct_lambda(const HybridModel& model, SigmaLoc tangency);
LambdaRegion construct_lambda(const HybridModel& model, double tangency_s);

/// Region swept by a closed scripted circuit from `hub`, minus the closed
/// circuit given by `hole_script` (empty for none).
LambdaRegion circuit_region(const HybridModel& model, SigmaLoc hub, const std::string& outer_script,
                            const std::string& hole_script);

/// The closed circuit alone, as a region without interior.
LambdaRegion cycle_region(const HybridModel& model, SigmaLoc hub, const std::string& script);

// ---------------------------------------------------------------------------
// ω-limit classification

enum class Verdict {
  EquilibriumX,
  EquilibriumY,
  PeriodicOrbitX,
  PeriodicOrbitY,
  GraphXorY,
  PseudoEquilibrium,
  PseudoCycle,
  MildPseudoCycle,
  PseudoGraph,
  TangencyTypeI,
  TangencyTypeII,
  ChaoticTypeIII,
  Undetermined,
};
std::string to_string(Verdict v);

enum class CycleKind { Crossing, Tangent, Sliding };
enum class MildKind { I, II, III };
std::string to_string(CycleKind k);
std::string to_string(MildKind k);

struct OmegaEvidence {
  std::string note;
  std::optional<Vec2> limit_point;
  double distance = -1.0;  // to the certified object (equilibrium, re-hit, ...)
  std::optional<EventRecord> terminal;
  // cycles
  int period = 0;
  std::vector<std::string> signature;
  std::vector<double> cycle_s;
  double rehit = -1.0;
  double cycle_time = 0.0;
  bool invariance_fails = false;
  bool properness_fails = false;
  std::optional<Vec2> vertex;  // equilibrium or pseudo-equilibrium on a graph
  // chaotic sets
  std::optional<LambdaRegion> lambda;
  int sliding_visits = 0, escaping_visits = 0;
};

struct OmegaReport {
  Verdict verdict = Verdict::Undetermined;
  std::optional<CycleKind> cycle;
  std::optional<MildKind> mild;
  OmegaEvidence evidence;
  /// e.g. "PseudoCycle(Crossing)", "MildPseudoCycle(I)", "EquilibriumX"
  std::string tag() const;
};

struct ClassifyOptions {
  int repetitions = 3;   // full repetitions that must agree
  int max_period = 64;   // longest signature period searched
  int chaos_min_visits = 3;
};

OmegaReport classify_omega(const HybridModel& model, const Trajectory& traj,
                           const ClassifyOptions& opt = {});

// ---------------------------------------------------------------------------
// chaos conditions

struct ChaosConditions {
  bool double_tangency = false;
  bool parabolic_or_hyperbolic = false;
  bool no_crossing_in_K = false;
  bool two_sided_visits_witness = false;
  std::optional<SigmaLoc> tangency;
  std::string note;
  bool all() const {
    return double_tangency && parabolic_or_hyperbolic && no_crossing_in_K &&
           two_sided_visits_witness;
  }
};

ChaosConditions chaos_conditions(const HybridModel& model, std::uint64_t seed = 1,
                                 double t_budget = 400.0);

struct LinearChaosReport {
  bool coincident = false;   // (i) a12- b1+ - a12+ b1- = 0, exactly
  bool direction = false;    // (ii)
  bool opposite_a12 = false; // (iii) a12+ a12- < 0
  std::string coincidence_value;  // exact value of the (i) expression
  bool geometric_coincident = false;
  bool consistent = false;   // (i) agrees with the geometric tangency check
  bool all() const { return coincident && direction && opposite_a12; }
};

LinearChaosReport linear_chaos_conditions(const LinearSpec& spec, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// probes

/// A constructive route between two points: forced first decision at the
/// start site, then deterministic (or policy-driven) continuation for `time`.
struct Route {
  bool found = false;
  Decision first;
  double time = 0.0;
  double gap = -1.0;  // distance between the re-simulated end and the target
};

/// Route hub -> q: slide from the hub to an escaping exit, leave by the field
/// whose backward orbit from q lands there (through sewing crossings).
Route route_from_hub(const HybridModel& model, const SigmaSite& hub, Vec2 q, int max_links = 40);

/// Whether the forward branch tree from p contains a visit at `target`.
struct ReachResult {
  bool reached = false;
  double time = 0.0;  // along the first witness found
  bool two_sided = false;  // witness visited sliding and escaping points
};
ReachResult reaches_forward(const HybridModel& model, Vec2 p, SigmaLoc target, int depth = 6,
                            double t_segment = 150.0);

struct CoverageGrid {
  double h = 1e-2;
  std::size_t interior = 0, covered = 0;
  double fraction() const { return interior ? double(covered) / double(interior) : 0.0; }
};

/// Grid cells of the region (away from the boundary) reachable from the hub
/// through route_from_hub. OpenMP parallel over rows.
CoverageGrid coverage_grid(const HybridModel& model, const LambdaRegion& region, double h);
/// Serial reference of coverage_grid.
CoverageGrid coverage_grid_serial(const HybridModel& model, const LambdaRegion& region, double h);

std::vector<Vec2> sample_region(const LambdaRegion& region, std::size_t n, std::uint64_t seed,
                                double margin = 1e-3);

struct SampleProbe {
  Vec2 q;
  bool periodic = false;   // (a) closed concatenation through the hub
  double closure_gap = -1.0;
  bool recurrent = false;  // (c)/(d) return within eps_rec visiting both sides
  bool to_hub = false, from_hub = false;
};

struct Theorem2Report {
  std::vector<SampleProbe> samples;
  CoverageGrid coverage;  // (b)
  bool a = false, b = false, c = false, d = false;
  bool pass() const { return a && b && c && d; }
};

/// Throws std::invalid_argument for points outside the region.
SampleProbe probe_point(const HybridModel& model, const LambdaRegion& lambda, Vec2 q);

Theorem2Report theorem2_probes(const HybridModel& model, const LambdaRegion& lambda,
                               std::size_t n_samples, std::uint64_t seed, double grid_h = 1e-2);

struct MinimalityReport {
  std::vector<Vec2> samples;
  std::vector<Vec2> unreachable_to_hub, unreachable_from_hub;
  bool pass() const { return unreachable_to_hub.empty() && unreachable_from_hub.empty(); }
};

MinimalityReport minimality_probe(const HybridModel& model, const LambdaRegion& region, Vec2 hub,
                                  std::size_t n_samples, std::uint64_t seed);

}  // namespace filippov
