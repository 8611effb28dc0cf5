#include "filippov/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "filippov/errors.hpp"
#include "filippov/ode.hpp"

namespace filippov {

std::string to_string(Mode m) {
  switch (m) {
    case Mode::FlowX: return "FlowX";
    case Mode::FlowY: return "FlowY";
    case Mode::Slide: return "Slide";
  }
  return "?";
}

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::Start: return "Start";
    case EventKind::HitSigma: return "HitSigma";
    case EventKind::Graze: return "Graze";
    case EventKind::ReachBreakpoint: return "ReachBreakpoint";
    case EventKind::ReachExitPoint: return "ReachExitPoint";
    case EventKind::LeaveSigmaAtTangency: return "LeaveSigmaAtTangency";
    case EventKind::LeaveSigma: return "LeaveSigma";
    case EventKind::PolicyBranch: return "PolicyBranch";
    case EventKind::ReachPseudoEq: return "ReachPseudoEq";
    case EventKind::ReachTypeII: return "ReachTypeII";
    case EventKind::ReachTypeI: return "ReachTypeI";
    case EventKind::DeadEnd: return "DeadEnd";
    case EventKind::ExitK: return "ExitK";
    case EventKind::TimeBudget: return "TimeBudget";
    case EventKind::ArcBudget: return "ArcBudget";
    case EventKind::BranchPending: return "BranchPending";
  }
  return "?";
}

// ---------------------------------------------------------------------------

HybridModel::HybridModel(PiecewiseSystem sys, Tolerances tol)
    : sys_(std::move(sys)), tol_(tol) {
  part_ = partition_sigma(sys_, tol_);
  pes_ = pseudo_equilibria(sys_, part_, tol_);
}

double HybridModel::speed(int chart, double s) const {
  const SigmaChart& c = sys_.curve().chart(chart);
  const Vec2 p = c.point(s);
  double a = sys_.lie(Side::X, 1, p), b = sys_.lie(Side::Y, 1, p);
  if (a == b) {
    // exact double tangency: ratio of the derivatives along the chart
    const Poly2& gx = sys_.lie(Side::X, 1);
    const Poly2& gy = sys_.lie(Side::Y, 1);
    const Vec2 t = c.tangent(s);
    a = dot(Vec2{gx.dx()(p), gx.dy()(p)}, t);
    b = dot(Vec2{gy.dx()(p), gy.dy()(p)}, t);
    if (a == b) return 0.0;
  }
  const Vec2 Z = (a * sys_.Y()(p) - b * sys_.X()(p)) / (a - b);
  const Vec2 t = c.tangent(s);
  return dot(Z, t) / dot(t, t);
}

FlowResult HybridModel::flow(Side side, Vec2 start, double t0, double t_max,
                             bool stop_on_sigma) const {
  return integrate_flow(sys_.field(side), sys_.curve().f(), side == Side::X ? 1 : -1, sys_.K(),
                        start, t0, t_max, stop_on_sigma, tol_);
}

SigmaSite HybridModel::site(SigmaLoc loc, double snap) const {
  SigmaSite st;
  const SigmaChart& c = sys_.curve().chart(loc.chart);
  st.loc = loc;
  const SigmaBreakpoint* bp = part_.breakpoint_near(loc.chart, loc.s, snap);
  if (bp) {
    st.loc.s = bp->s;
    st.at_breakpoint = true;
  } else {
    for (const auto& pe : pes_)
      if (pe.loc.chart == loc.chart && std::abs(pe.loc.s - loc.s) <= snap) {
        st.loc.s = pe.loc.s;
        st.at_pseudo_eq = true;
      }
  }
  st.point = c.point(st.loc.s);
  const Vec2 p = st.point;
  const double a = sys_.lie(Side::X, 1, p), b = sys_.lie(Side::Y, 1, p);

  // window from s in direction dir inside interval iv: up to the first
  // pseudo-equilibrium strictly ahead, else to the interval end
  auto window = [&](const SigmaInterval& iv, double s, int dir) {
    SlideWindow w;
    w.dir = dir;
    w.kind = iv.kind;
    w.s_end = dir > 0 ? iv.hi : iv.lo;
    for (const auto& pe : pes_) {
      if (pe.loc.chart != iv.chart) continue;
      const double ahead = (pe.loc.s - s) * dir;
      if (ahead > snap && ahead < (w.s_end - s) * dir) {
        w.s_end = pe.loc.s;
        w.ends_at_pe = true;
      }
    }
    return w;
  };

  if (st.at_breakpoint) {
    st.region = bp->tanX && bp->tanY ? RegionKind::DoubleTangency
                : bp->tanX           ? RegionKind::TangencyX
                                     : RegionKind::TangencyY;
    st.canX = departs(sys_, Side::X, p, tol_);
    st.canY = departs(sys_, Side::Y, p, tol_);
    for (int dir : {-1, 1}) {
      const SigmaInterval* iv = nullptr;
      for (const auto& cand : part_.intervals)
        if (cand.chart == loc.chart && (dir < 0 ? cand.hi == bp->s : cand.lo == bp->s)) iv = &cand;
      if (!iv || (iv->kind != RegionKind::Sliding && iv->kind != RegionKind::Escaping)) continue;
      const double d = 1e-6 * (iv->hi - iv->lo);
      if (speed(loc.chart, bp->s + dir * d) * dir > 0) st.slides.push_back(window(*iv, bp->s, dir));
    }
    const Extension ext = extend_filippov(sys_, st.loc, tol_);
    const bool zero_limits = (ext.speed_below || ext.speed_above) &&
                             (!ext.speed_below || std::abs(*ext.speed_below) <= 1e-6) &&
                             (!ext.speed_above || std::abs(*ext.speed_above) <= 1e-6);
    st.canStay = ext.kind == Extension::Kind::ExtendedPseudoEquilibrium || zero_limits ||
                 norm(sys_.X()(p)) <= tol_.tan || norm(sys_.Y()(p)) <= tol_.tan;
    if (st.canStay) st.at_pseudo_eq = true;
    return st;
  }

  const SigmaInterval* iv = part_.find(loc.chart, st.loc.s);
  st.region = iv ? iv->kind : region_from_signs(a, b);
  switch (st.region) {
    case RegionKind::Sewing:
      st.canX = a > 0;
      st.canY = b < 0;
      break;
    case RegionKind::Sliding:
    case RegionKind::Escaping: {
      const double v = speed(loc.chart, st.loc.s);
      if (st.at_pseudo_eq || std::abs(v) <= tol_.speed) {
        st.at_pseudo_eq = true;
        st.canStay = true;
      } else if (iv) {
        st.slides.push_back(window(*iv, st.loc.s, v > 0 ? 1 : -1));
      }
      st.canX = st.canY = st.region == RegionKind::Escaping;
      break;
    }
    default:
      st.canX = departs(sys_, Side::X, p, tol_);
      st.canY = departs(sys_, Side::Y, p, tol_);
  }
  return st;
}

HybridModel::SlideResult HybridModel::slide(SigmaLoc from, int dir, double t0, double t_max,
                                            std::optional<double> target) const {
  SlideResult res;
  const SigmaChart& c = sys_.curve().chart(from.chart);
  // the next breakpoint strictly ahead
  double s_bp = dir > 0 ? c.beta : c.alpha;
  bool chart_end = true;
  for (const auto& b : part_.breakpoints) {
    if (b.chart != from.chart) continue;
    const double ahead = (b.s - from.s) * dir;
    if (ahead > 1e-12 && ahead <= (s_bp - from.s) * dir) {
      s_bp = b.s;
      chart_end = b.endpoint;
    }
  }
  double s_stop = s_bp;
  auto stop_kind = chart_end ? SlideResult::Stop::ExitK : SlideResult::Stop::Breakpoint;
  if (target && (*target - from.s) * dir > 0 && (*target - from.s) * dir < (s_bp - from.s) * dir) {
    s_stop = *target;
    stop_kind = SlideResult::Stop::Target;
  }

  Arc& arc = res.arc;
  arc.mode = Mode::Slide;
  arc.chart = from.chart;
  arc.t0 = t0;
  arc.samples.push_back({t0, c.point(from.s)});

  auto rhs = [&](double s) { return speed(from.chart, s); };
  const double t_end = t0 + t_max;
  double t = t0, s = from.s, h = 1e-3;
  auto done = [&](SlideResult::Stop k, double te, double se) {
    res.stop = k;
    res.end = {from.chart, se};
    arc.t1 = te;
    arc.samples.push_back({te, c.point(se)});
    return res;
  };
  const double near_pe = 1e-6 * std::max(1.0, c.beta - c.alpha);
  while (true) {
    if (t >= t_end) return done(SlideResult::Stop::TimeUp, t, s);
    const double hh = std::min({h, 0.05, t_end - t});
    double err = 0.0;
    const double s1 = dopri5_step(rhs, s, hh, err);
    const double e = err_norm(err, s, s1, tol_.flow, tol_.flow);
    if (!(e <= 1.0)) {
      h = hh * (std::isfinite(e) ? StepControl::factor(e) : 0.2);
      if (h < 1e-12) throw StiffnessFailure("sliding step underflow at t = " + std::to_string(t));
      continue;
    }
    if ((s1 - s_stop) * dir >= 0) {
      double lo = 0.0, hi = hh;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        double er;
        if ((dopri5_step(rhs, s, m, er) - s_stop) * dir >= 0) hi = m;
        else lo = m;
      }
      return done(stop_kind, t + hi, s_stop);
    }
    t += hh;
    s = s1;
    arc.samples.push_back({t, c.point(s)});
    h = hh * StepControl::factor(e);
    if (std::abs(rhs(s)) < tol_.speed) {
      for (const auto& pe : pes_)
        if (pe.loc.chart == from.chart && std::abs(pe.loc.s - s) <= near_pe)
          return done(SlideResult::Stop::PseudoEq, t, pe.loc.s);
      if (std::abs(s_bp - s) <= near_pe && !chart_end)
        return done(SlideResult::Stop::Breakpoint, t, s_bp);
    }
  }
}

// ---------------------------------------------------------------------------

namespace {

Mode mode_of(Side s) { return s == Side::X ? Mode::FlowX : Mode::FlowY; }

std::string decision_text(const Decision& d) {
  std::ostringstream os;
  if (d.exit) {
    os << (d.exit->side == Side::X ? "X" : "Y") << "@" << d.exit->s;
    return os.str();
  }
  os << to_string(d.option.choice);
  if (d.option.choice == Choice::Slide) os << (d.option.dir > 0 ? "+" : "-");
  return os.str();
}

class Runner {
 public:
  Runner(const HybridModel& m, Policy& pol, const SimOptions& opt)
      : m_(m), sys_(m.system()), tol_(m.tol()), pol_(pol), opt_(opt) {}

  Trajectory run(const Start& start, double budget) {
    t_ = start.t;
    t_end_ = start.t + budget;
    first_ = start.first;
    const Vec2 p = start.p;
    if (!sys_.K().contains(p, 1e-12)) return terminate(EventKind::ExitK, p, std::nullopt, "");
    push_event(EventKind::Start, p, std::nullopt, "");
    const auto loc = std::abs(sys_.f(p)) <= tol_.on_sigma ? sys_.curve().locate(p, 1e-6)
                                                          : std::nullopt;
    if (loc) return on_sigma(*loc, EventKind::Start, std::nullopt, tol_.tan);
    return flow(sys_.f(p) > 0 ? Side::X : Side::Y, p, EventKind::Start);
  }

 private:
  void push_event(EventKind k, Vec2 p, std::optional<SigmaLoc> loc, std::string detail) {
    tr_.events.push_back({k, t_, p, loc, static_cast<int>(tr_.arcs.size()) - 1, std::move(detail)});
  }

  Trajectory terminate(EventKind k, Vec2 p, std::optional<SigmaLoc> loc, std::string detail) {
    push_event(k, p, loc, std::move(detail));
    tr_.terminal = tr_.events.back();
    return std::move(tr_);
  }

  bool arc_budget_hit() const { return static_cast<int>(tr_.arcs.size()) >= opt_.max_arcs; }

  // The trajectory sits on the curve; pick and run the continuation.
  Trajectory on_sigma(SigmaLoc loc, EventKind arrival, std::optional<Mode> mode_in, double snap) {
    while (true) {
      const SigmaSite site = m_.site(loc, snap);
      SigmaVisit v;
      v.t = t_;
      v.loc = site.loc;
      v.point = site.point;
      v.region = site.region;
      v.mode_in = mode_in;
      v.arrival = arrival;
      const auto opts = site.options();
      if (opts.empty()) {
        tr_.visits.push_back(v);
        const SigmaPointReport rep = classify_point(sys_, site.loc, tol_);
        const EventKind k = rep.special == Special::TypeII  ? EventKind::ReachTypeII
                            : rep.special == Special::TypeI ? EventKind::ReachTypeI
                                                            : EventKind::DeadEnd;
        return terminate(k, site.point, site.loc, "no legal continuation");
      }
      Decision dec;
      if (first_) {
        dec = *first_;
        first_.reset();
        if (std::find(opts.begin(), opts.end(), dec.option) == opts.end())
          throw DeadEnd("forced first choice is not legal at s = " + std::to_string(site.loc.s));
        v.branched = opts.size() > 1;
      } else if (opts.size() == 1) {
        dec = {opts.front(), std::nullopt};
      } else {
        if (opt_.stop_at_branch) {
          tr_.visits.push_back(v);
          tr_.pending = site;
          return terminate(EventKind::BranchPending, site.point, site.loc, "");
        }
        dec = pol_.choose(site);
        v.branched = true;
      }
      v.choice = decision_text(dec);
      if (v.branched) {
        push_event(EventKind::PolicyBranch, site.point, site.loc, v.choice);
        tr_.policy_log.push_back(tr_.events.back());
      }
      if (arc_budget_hit()) {
        tr_.visits.push_back(v);
        return terminate(EventKind::ArcBudget, site.point, site.loc, "");
      }

      switch (dec.option.choice) {
        case Choice::Stay:
          tr_.visits.push_back(v);
          return terminate(EventKind::ReachPseudoEq, site.point, site.loc,
                           arrival == EventKind::ReachPseudoEq ? "asymptotic" : "finite-time");
        case Choice::X:
        case Choice::Y: {
          const Side side = dec.option.choice == Choice::X ? Side::X : Side::Y;
          v.mode_out = mode_of(side);
          tr_.visits.push_back(v);
          push_event(site.at_breakpoint ? EventKind::LeaveSigmaAtTangency : EventKind::LeaveSigma,
                     site.point, site.loc, to_string(side));
          return flow(side, site.point, EventKind::LeaveSigma);
        }
        case Choice::Slide: {
          v.mode_out = Mode::Slide;
          tr_.visits.push_back(v);
          const auto target = dec.exit ? std::optional<double>(dec.exit->s) : std::nullopt;
          const auto r = m_.slide(site.loc, dec.option.dir, t_, t_end_ - t_, target);
          tr_.arcs.push_back(r.arc);
          tr_.arcs.back().entry = tr_.events.back();
          t_ = r.arc.t1;
          const Vec2 q = r.arc.end();
          using Stop = HybridModel::SlideResult::Stop;
          switch (r.stop) {
            case Stop::TimeUp: return terminate(EventKind::TimeBudget, q, r.end, "");
            case Stop::ExitK: return terminate(EventKind::ExitK, q, r.end, "");
            case Stop::Breakpoint:
              push_event(EventKind::ReachBreakpoint, q, r.end, "");
              tr_.arcs.back().exit = tr_.events.back();
              loc = r.end;
              arrival = EventKind::ReachBreakpoint;
              break;
            case Stop::PseudoEq:
              push_event(EventKind::ReachBreakpoint, q, r.end, "pseudo-equilibrium (asymptotic)");
              tr_.arcs.back().exit = tr_.events.back();
              loc = r.end;
              arrival = EventKind::ReachPseudoEq;
              break;
            case Stop::Target: {
              push_event(EventKind::ReachExitPoint, q, r.end, decision_text(dec));
              tr_.arcs.back().exit = tr_.events.back();
              SigmaVisit ev;
              ev.t = t_;
              ev.loc = r.end;
              ev.point = q;
              const SigmaInterval* iv = m_.partition().find(r.end.chart, r.end.s);
              ev.region = iv ? iv->kind : RegionKind::Escaping;
              ev.mode_in = Mode::Slide;
              ev.mode_out = mode_of(dec.exit->side);
              ev.arrival = EventKind::ReachExitPoint;
              ev.choice = decision_text(dec);
              tr_.visits.push_back(ev);
              if (arc_budget_hit()) return terminate(EventKind::ArcBudget, q, r.end, "");
              push_event(EventKind::LeaveSigma, q, r.end, to_string(dec.exit->side));
              return flow(dec.exit->side, q, EventKind::LeaveSigma);
            }
          }
          mode_in = Mode::Slide;
          snap = 1e-12;
          continue;
        }
      }
    }
  }

  Trajectory flow(Side side, Vec2 p, EventKind) {
    while (true) {
      if (arc_budget_hit()) return terminate(EventKind::ArcBudget, p, std::nullopt, "");
      const FlowResult r = m_.flow(side, p, t_, t_end_ - t_, true);
      Arc arc;
      arc.mode = mode_of(side);
      arc.t0 = t_;
      arc.t1 = r.t;
      arc.samples = r.samples;
      arc.entry = tr_.events.back();
      t_ = r.t;
      switch (r.stop) {
        case FlowStop::TimeUp:
          tr_.arcs.push_back(std::move(arc));
          return terminate(EventKind::TimeBudget, r.p, std::nullopt, "");
        case FlowStop::ExitK:
          tr_.arcs.push_back(std::move(arc));
          return terminate(EventKind::ExitK, r.p, std::nullopt, "");
        case FlowStop::HitSigma:
        case FlowStop::Graze: {
          const bool graze = r.stop == FlowStop::Graze;
          const auto loc = sys_.curve().locate(r.p, 1e-6);
          if (!loc) {
            tr_.arcs.push_back(std::move(arc));
            return terminate(EventKind::ExitK, r.p, std::nullopt, "curve left K");
          }
          const Vec2 q = sys_.curve().point(*loc);
          arc.samples.push_back({t_, q});
          tr_.arcs.push_back(std::move(arc));
          const double snap = graze ? 100.0 * tol_.graze : tol_.tan;
          // the site may snap to a breakpoint; keep junctions continuous
          const SigmaSite s = m_.site(*loc, snap);
          if (s.loc.s != loc->s) tr_.arcs.back().samples.push_back({t_, s.point});
          push_event(graze ? EventKind::Graze : EventKind::HitSigma, s.point, s.loc, "");
          tr_.arcs.back().exit = tr_.events.back();
          return on_sigma(s.loc, graze ? EventKind::Graze : EventKind::HitSigma, mode_of(side),
                          1e-15);
        }
      }
    }
  }

  const HybridModel& m_;
  const PiecewiseSystem& sys_;
  const Tolerances& tol_;
  Policy& pol_;
  SimOptions opt_;
  Trajectory tr_;
  double t_ = 0.0, t_end_ = 0.0;
  std::optional<Decision> first_;
};

}  // namespace

Trajectory simulate(const HybridModel& model, const Start& start, double t_budget, Policy policy,
                    const SimOptions& opt) {
  Runner r(model, policy, opt);
  return r.run(start, t_budget);
}

Trajectory simulate(const PiecewiseSystem& sys, Vec2 p0, double t_budget, Policy policy,
                    const Tolerances& tol) {
  const HybridModel m(sys, tol);
  return simulate(m, Start{p0}, t_budget, std::move(policy));
}

std::pair<std::optional<Mode>, Arc> advance(const HybridModel& model, const AdvanceState& state,
                                            Policy& policy, double t_max) {
  SimOptions opt;
  opt.max_arcs = 1;
  Runner r(model, policy, opt);
  Trajectory tr = r.run(Start{state.point, state.t}, t_max);
  if (tr.arcs.empty()) throw DeadEnd("no continuation from the given state");
  Arc a = tr.arcs.front();
  std::optional<Mode> next;
  if (tr.terminal.kind == EventKind::ArcBudget) next = a.mode;
  return {next, a};
}

std::vector<std::string> check_trajectory(const HybridModel& model, const Trajectory& traj) {
  std::vector<std::string> bad;
  const auto& sys = model.system();
  const auto& tol = model.tol();
  for (std::size_t i = 0; i < traj.arcs.size(); ++i) {
    const Arc& a = traj.arcs[i];
    if (i > 0) {
      const double gap = distance(traj.arcs[i - 1].end(), a.start());
      if (gap > 1e-8) bad.push_back("junction gap " + std::to_string(gap) + " before arc " +
                                    std::to_string(i));
    }
    for (const auto& smp : a.samples) {
      const double fv = sys.f(smp.p);
      const double slack = 1e-6;  // tangential touches and projections
      if (a.mode == Mode::FlowX && fv < -slack) bad.push_back("FlowX sample below the curve");
      if (a.mode == Mode::FlowY && fv > slack) bad.push_back("FlowY sample above the curve");
      if (a.mode == Mode::Slide && std::abs(fv) > tol.on_sigma * 10)
        bad.push_back("sliding sample off the curve");
    }
  }
  // transition table on the Σ-visits
  for (const auto& v : traj.visits) {
    if (!v.mode_in || !v.mode_out) continue;
    const Mode in = *v.mode_in, out = *v.mode_out;
    const bool tangency = v.region == RegionKind::TangencyX || v.region == RegionKind::TangencyY ||
                          v.region == RegionKind::DoubleTangency;
    if (in != Mode::Slide && out == Mode::Slide && !(v.region == RegionKind::Sliding || tangency))
      bad.push_back("flow enters sliding outside the sliding region at t = " + std::to_string(v.t));
    if (in == Mode::Slide && out != Mode::Slide && !(v.region == RegionKind::Escaping || tangency))
      bad.push_back("sliding leaves the curve outside a tangency or escaping point");
    if (in != Mode::Slide && out != Mode::Slide && in != out &&
        !(v.region == RegionKind::Sewing || tangency))
      bad.push_back("crossing outside the sewing region at t = " + std::to_string(v.t));
  }
  return bad;
}

// ---------------------------------------------------------------------------

BranchNode branch_tree(const HybridModel& model, Vec2 p0, int depth, const BranchOptions& opt) {
  if (depth > opt.max_depth)
    throw BudgetExceeded("branch depth " + std::to_string(depth) + " above the maximum " +
                         std::to_string(opt.max_depth));
  SimOptions so;
  so.stop_at_branch = true;
  BranchNode root;
  root.segment = simulate(model, Start{p0}, opt.t_segment, Policy::stay_sliding(), so);
  std::vector<BranchNode*> frontier{&root};
  std::vector<SigmaLoc> expanded;
  std::size_t nodes = 1;
  for (int level = 0; level < depth && !frontier.empty(); ++level) {
    struct Task {
      BranchNode* parent;
      Option opt;
    };
    std::vector<Task> tasks;
    for (BranchNode* n : frontier) {
      if (!n->segment.pending) continue;
      const SigmaSite& s = *n->segment.pending;
      bool seen = false;
      for (const auto& e : expanded)
        seen = seen || (e.chart == s.loc.chart && std::abs(e.s - s.loc.s) <= model.tol().dedup);
      if (seen) continue;
      expanded.push_back(s.loc);
      for (const Option& o : s.options()) tasks.push_back({n, o});
    }
    nodes += tasks.size();
    if (nodes > opt.max_nodes)
      throw BudgetExceeded("branch tree exceeds " + std::to_string(opt.max_nodes) + " nodes");
    std::vector<BranchNode> built(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      const SigmaSite& s = *tasks[i].parent->segment.pending;
      built[i].choice = tasks[i].opt;
      built[i].depth = level + 1;
      built[i].segment = simulate(model, Start{s.point, tasks[i].parent->segment.t_end(),
                                               Decision{tasks[i].opt, std::nullopt}},
                                  opt.t_segment, Policy::stay_sliding(), so);
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) tasks[i].parent->children.push_back(std::move(built[i]));
    std::vector<BranchNode*> next;
    for (BranchNode* n : frontier)
      for (auto& c : n->children) next.push_back(&c);
    frontier = std::move(next);
  }
  return root;
}

}  // namespace filippov
