#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "filippov/sigma.hpp"

namespace filippov {

enum class Mode { FlowX, FlowY, Slide };
std::string to_string(Mode m);

enum class EventKind {
  Start,
  HitSigma,              // transversal arrival at the switching curve
  Graze,                 // tangential touch of the switching curve
  ReachBreakpoint,       // sliding motion reached a tangency
  ReachExitPoint,        // sliding motion reached a policy-selected exit
  LeaveSigmaAtTangency,  // departure by a flow at a tangency point
  LeaveSigma,            // departure by a flow elsewhere
  PolicyBranch,
  ReachPseudoEq,
  ReachTypeII,
  ReachTypeI,
  DeadEnd,
  ExitK,
  TimeBudget,
  ArcBudget,
  BranchPending,  // stopped at a branch point on request
};
std::string to_string(EventKind k);

struct EventRecord {
  EventKind kind = EventKind::Start;
  double t = 0.0;
  Vec2 point;
  std::optional<SigmaLoc> loc;
  int arc = -1;
  std::string detail;  // choice taken, "asymptotic", ...
};

struct Sample {
  double t;
  Vec2 p;
};

struct Arc {
  Mode mode = Mode::FlowX;
  double t0 = 0.0, t1 = 0.0;
  std::vector<Sample> samples;
  EventRecord entry, exit;
  int chart = -1;  // sliding arcs only
  Vec2 start() const { return samples.front().p; }
  Vec2 end() const { return samples.back().p; }
};

// ---------------------------------------------------------------------------
// smooth flows

enum class FlowStop { HitSigma, Graze, ExitK, TimeUp };

struct FlowResult {
  FlowStop stop = FlowStop::TimeUp;
  double t = 0.0;
  Vec2 p;
  std::vector<Sample> samples;
};

/// Integrates `field` from p0 for at most t_max. With stop_on_sigma the run
/// stops when `side_sign * f` crosses to <= 0 (located to |f| <= tol.event)
/// or touches 0 tangentially within tol.graze. Direction -1 integrates
/// backward in time (no switching events).
FlowResult integrate_flow(const PolyField& field, const Poly2& f, int side_sign, const Box& K,
                          Vec2 p0, double t0, double t_max, bool stop_on_sigma,
                          const Tolerances& tol, int direction = 1);

/// Smooth arc of `field` with mode taken from the side of f it starts on.
Arc integrate_arc(const PolyField& field, const Poly2& f, const Box& K, Vec2 start, double t_max,
                  bool stop_on_sigma, const Tolerances& tol = {});

// ---------------------------------------------------------------------------
// decisions on the switching curve

enum class Choice { X, Y, Slide, Stay };
std::string to_string(Choice c);

struct Option {
  Choice choice = Choice::Stay;
  int dir = 0;  // for Slide: +1 towards larger s
  bool operator==(const Option&) const = default;
};

struct SlideWindow {
  int dir = 0;
  RegionKind kind = RegionKind::Sliding;
  double s_end = 0.0;       // next breakpoint or pseudo-equilibrium
  bool ends_at_pe = false;  // s_end is a pseudo-equilibrium
};

/// Everything that can legally happen next at a point of the curve.
struct SigmaSite {
  SigmaLoc loc;
  Vec2 point;
  RegionKind region = RegionKind::Sewing;
  bool at_breakpoint = false;
  bool at_pseudo_eq = false;
  bool canX = false, canY = false, canStay = false;
  std::vector<SlideWindow> slides;
  std::vector<Option> options() const;
};

struct ExitPlan {
  Side side = Side::X;
  double s = 0.0;
};

struct Decision {
  Option option;
  std::optional<ExitPlan> exit;  // slide into an escaping segment, leave at s
};

/// Resolves non-deterministic continuations. Copies carry their own script
/// position and random state, so simulations stay pure.
class Policy {
 public:
  enum class Kind { AlwaysX, AlwaysY, StaySliding, Scripted, SeededRandom };

  static Policy always_x();
  static Policy always_y();
  static Policy stay_sliding();
  /// Tokens X, Y, S (slide), T (stay), optionally X@s / Y@s; separators
  /// (commas, spaces) are optional. The script wraps around when exhausted.
  static Policy scripted(const std::string& script);
  static Policy seeded_random(std::uint64_t seed);
  /// "always-x", "always-y", "stay-sliding", "random", or a script.
  static Policy parse(const std::string& text, std::uint64_t seed);

  Decision choose(const SigmaSite& site);
  Kind kind() const { return kind_; }
  std::string describe() const;

 private:
  struct Token {
    Choice choice;
    std::optional<double> at;
  };
  Decision by_order(const SigmaSite& site, std::initializer_list<Choice> order) const;
  double uniform();

  Kind kind_ = Kind::StaySliding;
  std::vector<Token> script_;
  std::string text_;
  std::size_t pos_ = 0;
  std::uint64_t seed_ = 0;
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// hybrid model and trajectories

/// A Σ-visit: the trajectory is at a point of the curve and picks how to go on.
struct SigmaVisit {
  double t = 0.0;
  SigmaLoc loc;
  Vec2 point;
  RegionKind region = RegionKind::Sewing;
  std::optional<Mode> mode_in, mode_out;
  EventKind arrival = EventKind::Start;
  bool branched = false;  // more than one legal option
  std::string choice;
};

struct Trajectory {
  std::vector<Arc> arcs;
  std::vector<EventRecord> events;
  std::vector<EventRecord> policy_log;
  std::vector<SigmaVisit> visits;
  EventRecord terminal;
  std::optional<SigmaSite> pending;  // set with EventKind::BranchPending
  double t_end() const { return terminal.t; }
};

struct SimOptions {
  int max_arcs = 10000;
  bool stop_at_branch = false;
};

struct Start {
  Vec2 p;
  double t = 0.0;
  std::optional<Decision> first;  // forced choice at the first Σ-visit
};

/// Precomputed analysis of a system used by every trajectory routine.
class HybridModel {
 public:
  explicit HybridModel(PiecewiseSystem sys, Tolerances tol = {});

  const PiecewiseSystem& system() const { return sys_; }
  const Tolerances& tol() const { return tol_; }
  const SigmaPartition& partition() const { return part_; }
  const std::vector<PseudoEquilibrium>& pseudo_eqs() const { return pes_; }

  /// Legal continuations at a curve point (snapped to a breakpoint within
  /// `snap`).
  SigmaSite site(SigmaLoc loc, double snap) const;

  FlowResult flow(Side side, Vec2 start, double t0, double t_max, bool stop_on_sigma) const;

  struct SlideResult {
    enum class Stop { Breakpoint, Target, PseudoEq, ExitK, TimeUp } stop;
    Arc arc;
    SigmaLoc end;
  };
  SlideResult slide(SigmaLoc from, int dir, double t0, double t_max,
                    std::optional<double> target) const;

  double speed(int chart, double s) const;  // extended sliding speed

 private:
  PiecewiseSystem sys_;
  Tolerances tol_;
  SigmaPartition part_;
  std::vector<PseudoEquilibrium> pes_;
};

Trajectory simulate(const HybridModel& model, const Start& start, double t_budget, Policy policy,
                    const SimOptions& opt = {});
Trajectory simulate(const PiecewiseSystem& sys, Vec2 p0, double t_budget, Policy policy,
                    const Tolerances& tol = {});

/// One step: from a Σ-visit or flow start to the next Σ-visit or terminal.
struct AdvanceState {
  std::optional<Mode> mode;  // nullopt when sitting on the curve
  Vec2 point;
  double t = 0.0;
};
std::pair<std::optional<Mode>, Arc> advance(const HybridModel& model, const AdvanceState& state,
                                            Policy& policy, double t_max);

/// Transition-table and continuity checks; returns violations.
std::vector<std::string> check_trajectory(const HybridModel& model, const Trajectory& traj);

// ---------------------------------------------------------------------------
// branch enumeration

struct BranchNode {
  Option choice;           // option taken at the parent's branch point
  Trajectory segment;      // from the parent's branch point to the next one
  std::vector<BranchNode> children;
  int depth = 0;
};

struct BranchOptions {
  int max_depth = 12;
  double t_segment = 100.0;  // time budget of each segment
  std::size_t max_nodes = 20000;
};

/// Breadth-first enumeration of all legal choices at branch points up to
/// `depth` levels. States re-meeting the curve within tol.dedup of an
/// already expanded branch point are not expanded again.
BranchNode branch_tree(const HybridModel& model, Vec2 p0, int depth,
                       const BranchOptions& opt = {});

}  // namespace filippov
