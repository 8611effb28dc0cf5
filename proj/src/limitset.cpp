#include "filippov/limitset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <tuple>

#include "filippov/errors.hpp"
#include "filippov/ode.hpp"

namespace filippov {

namespace {

std::string short_mode(const std::optional<Mode>& m) {
  if (!m) return "-";
  switch (*m) {
    case Mode::FlowX: return "X";
    case Mode::FlowY: return "Y";
    case Mode::Slide: return "S";
  }
  return "?";
}

bool same_point(const SigmaLoc& a, const SigmaLoc& b, double tol) {
  return a.chart == b.chart && std::abs(a.s - b.s) <= tol;
}

// raw end of a flow arc: the located event point before any projection
Vec2 raw_end(const Arc& a) {
  for (const Sample& s : a.samples)
    if (s.t == a.t1) return s.p;
  return a.end();
}

double seg_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double L2 = dot(d, d);
  const double t = L2 > 0 ? std::clamp(dot(p - a, d) / L2, 0.0, 1.0) : 0.0;
  return distance(p, a + t * d);
}

double poly_distance(const Polygon& poly, Vec2 p) {
  double d = std::numeric_limits<double>::infinity();
  const auto& v = poly.pts;
  for (std::size_t i = 0; i < v.size(); ++i) d = std::min(d, seg_distance(p, v[i], v[(i + 1) % v.size()]));
  return d;
}

Arc curve_piece(const SigmaChart& c, double s0, double s1, int n = 200) {
  Arc a;
  a.mode = Mode::Slide;
  for (int i = 0; i <= n; ++i) a.samples.push_back({0.0, c.point(s0 + (s1 - s0) * i / n)});
  return a;
}

Arc flow_piece(Side side, const FlowResult& r) {
  Arc a;
  a.mode = side == Side::X ? Mode::FlowX : Mode::FlowY;
  a.t0 = r.samples.empty() ? 0.0 : r.samples.front().t;
  a.t1 = r.t;
  a.samples = r.samples;
  return a;
}

void append(std::vector<Vec2>& out, const Arc& a, bool reversed = false) {
  if (reversed)
    for (auto it = a.samples.rbegin(); it != a.samples.rend(); ++it) out.push_back(it->p);
  else
    for (const Sample& s : a.samples) out.push_back(s.p);
}

}  // namespace

// ---------------------------------------------------------------------------

ReturnSequence return_sequence(const Trajectory& traj) {
  ReturnSequence rs;
  for (const SigmaVisit& v : traj.visits)
    rs.events.push_back({v.t, v.loc, v.point, v.region, v.mode_in, v.mode_out, v.arrival, v.branched,
                         v.choice});
  rs.terminal = traj.terminal;
  return rs;
}

std::string signature_token(const ReturnEvent& e) {
  return "c" + std::to_string(e.loc.chart) + ":" + to_string(e.region) + ":" +
         short_mode(e.mode_in) + ">" + short_mode(e.mode_out);
}

// ---------------------------------------------------------------------------

double Polygon::signed_area() const {
  double a = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) a += cross(pts[i], pts[(i + 1) % pts.size()]);
  return 0.5 * a;
}

bool Polygon::contains(Vec2 p) const {
  bool in = false;
  for (std::size_t i = 0, j = pts.size() - 1; i < pts.size(); j = i++) {
    const Vec2 a = pts[i], b = pts[j];
    if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) in = !in;
  }
  return in;
}

double LambdaRegion::area() const {
  if (curve_only) return 0.0;
  double a = std::abs(outer.signed_area());
  for (const auto& h : holes) a -= std::abs(h.signed_area());
  return a;
}

bool LambdaRegion::contains(Vec2 p) const {
  if (curve_only) return boundary_distance(p) <= 1e-6;
  if (!outer.contains(p)) return false;
  for (const auto& h : holes)
    if (h.contains(p)) return false;
  return true;
}

Box LambdaRegion::bbox() const {
  Box b{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
        std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (Vec2 p : outer.pts) {
    b.xmin = std::min(b.xmin, p.x);
    b.xmax = std::max(b.xmax, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

double LambdaRegion::boundary_distance(Vec2 p) const {
  double d = poly_distance(outer, p);
  for (const auto& h : holes) d = std::min(d, poly_distance(h, p));
  return d;
}

std::string to_string(LambdaRegion::Kind k) {
  switch (k) {
    case LambdaRegion::Kind::Parabolic: return "parabolic";
    case LambdaRegion::Kind::Hyperbolic: return "hyperbolic";
    case LambdaRegion::Kind::Circuit: return "circuit";
  }
  return "?";
}

LambdaRegion construct_lambda(const HybridModel& model, double tangency_s) {
  const SigmaPartition& part = model.partition();
  for (const auto& b : part.breakpoints)
    if (!b.endpoint && b.tanX && b.tanY && std::abs(b.s - tangency_s) <= 1e-6)
      return construct_lambda(model, SigmaLoc{b.chart, b.s});
  throw NotChaoticConfiguration("no double tangency near s = " + std::to_string(tangency_s));
}

LambdaRegion construct_lambda(const HybridModel& model, SigmaLoc tangency) {
  const PiecewiseSystem& sys = model.system();
  const Tolerances& tol = model.tol();
  const SigmaPartition& part = model.partition();
  const SigmaBreakpoint* bp = part.breakpoint_near(tangency.chart, tangency.s, 1e-6);
  if (!bp || !bp->tanX || !bp->tanY)
    throw NotChaoticConfiguration("no double tangency at s = " + std::to_string(tangency.s));
  const double st = bp->s;
  const SigmaLoc at{bp->chart, st};
  const SigmaPointReport rep = classify_point(sys, at, tol);
  if (rep.dbl != DoubleKind::Parabolic && rep.dbl != DoubleKind::Hyperbolic)
    throw NotChaoticConfiguration("double tangency is " + to_string(rep.dbl));

  const SigmaInterval *below = nullptr, *above = nullptr;
  for (const auto& iv : part.intervals) {
    if (iv.chart != at.chart) continue;
    if (iv.hi == st) below = &iv;
    if (iv.lo == st) above = &iv;
  }
  if (!below || !above)
    throw NotChaoticConfiguration("the double tangency is at the end of the curve");
  const SigmaInterval* esc = nullptr;
  const SigmaInterval* sli = nullptr;
  for (const SigmaInterval* iv : {below, above}) {
    if (iv->kind == RegionKind::Escaping) esc = iv;
    if (iv->kind == RegionKind::Sliding) sli = iv;
  }
  if (!esc || !sli)
    throw NotChaoticConfiguration("crossing region next to the double tangency");
  const int dir = esc == above ? 1 : -1;  // from the tangency into the escaping side
  const Extension ext = extend_filippov(sys, at, tol);
  if (ext.kind != Extension::Kind::RegularFlowThrough || ext.direction != dir)
    throw NotChaoticConfiguration("sliding motion does not flow through the tangency into the "
                                  "escaping segment");

  // nearest pseudo-equilibria (or segment ends) on each side
  double p_e = dir > 0 ? esc->hi : esc->lo;
  double p_s = dir > 0 ? sli->lo : sli->hi;
  for (const auto& pe : model.pseudo_eqs()) {
    if (pe.loc.chart != at.chart) continue;
    const double off = (pe.loc.s - st) * dir;
    if (off > 0 && off < (p_e - st) * dir) p_e = pe.loc.s;
    if (off < 0 && off > (p_s - st) * dir) p_s = pe.loc.s;
  }

  const SigmaChart& chart = sys.curve().chart(at.chart);
  const double len = chart.beta - chart.alpha;
  // landing parameter on [p_s, st) of the orbit of `side` leaving sigma(q)
  auto shoot = [&](Side side, double q) -> std::optional<std::pair<double, FlowResult>> {
    FlowResult r = model.flow(side, chart.point(q), 0.0, 200.0, true);
    if (r.stop != FlowStop::HitSigma && r.stop != FlowStop::Graze) return std::nullopt;
    const auto loc = sys.curve().locate(r.p, 1e-6);
    if (!loc || loc->chart != at.chart) return std::nullopt;
    const double off = (loc->s - st) * dir;
    if (off >= 0 || off < (p_s - st) * dir) return std::nullopt;
    return std::make_pair(loc->s, std::move(r));
  };

  LambdaRegion L;
  L.kind = rep.dbl == DoubleKind::Parabolic ? LambdaRegion::Kind::Parabolic
                                            : LambdaRegion::Kind::Hyperbolic;
  L.chart = at.chart;
  L.tangency_s = st;
  L.p_s = p_s;
  L.p_e = p_e;
  L.hub = chart.point(st);

  struct Bound {
    double q, land;
    FlowResult r;
  };
  auto outermost = [&](Side side) {
    if (auto hit = shoot(side, p_e)) return Bound{p_e, hit->first, std::move(hit->second)};
    double lo = st + dir * 1e-6 * len, hi = p_e;
    auto good = shoot(side, lo);
    if (!good)
      throw NotChaoticConfiguration("orbits leaving the escaping segment do not return to the "
                                    "sliding segment");
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (auto h = shoot(side, mid)) {
        lo = mid;
        good = std::move(h);
      } else {
        hi = mid;
      }
    }
    return Bound{lo, good->first, std::move(good->second)};
  };
  const Bound bx = outermost(Side::X);
  const Bound by = outermost(Side::Y);
  L.q_e_minus = bx.q;
  L.q_e_plus = by.q;

  // outer boundary: X-orbit, curve, reversed Y-orbit, curve
  const Arc gx = flow_piece(Side::X, bx.r);
  const Arc gy = flow_piece(Side::Y, by.r);
  const Arc c1 = curve_piece(chart, bx.land, by.land);
  const Arc c2 = curve_piece(chart, by.q, bx.q, 20);
  L.boundary_arcs = {gx, c1, gy, c2};
  append(L.outer.pts, gx);
  append(L.outer.pts, c1);
  append(L.outer.pts, gy, true);
  append(L.outer.pts, c2);
  L.max_gap = std::max({distance(gx.end(), c1.start()), distance(c1.end(), gy.end()),
                        distance(gy.start(), c2.start()), distance(c2.end(), gx.start())});
  L.sigma_lo = std::min({bx.land, by.land, bx.q, by.q});
  L.sigma_hi = std::max({bx.land, by.land, bx.q, by.q});

  // closed orbits through the tangency are not part of the region
  for (Side side : {Side::X, Side::Y}) {
    const Visibility vis = side == Side::X ? rep.visX : rep.visY;
    if (vis != Visibility::Visible) continue;
    const FlowResult r = model.flow(side, L.hub, 0.0, 200.0, true);
    if (r.stop != FlowStop::Graze && r.stop != FlowStop::HitSigma) continue;
    if (distance(r.p, L.hub) > 1e-6) continue;
    Arc a = flow_piece(side, r);
    Polygon h;
    append(h.pts, a);
    L.max_gap = std::max(L.max_gap, distance(a.end(), a.start()));
    L.boundary_arcs.push_back(std::move(a));
    L.holes.push_back(std::move(h));
  }
  if (!(L.area() > 0))
    throw NotChaoticConfiguration("region has empty interior");
  return L;
}

namespace {

struct Circuit {
  std::vector<Arc> arcs;
  double period = 0.0;
  double gap = 0.0;
};

Circuit closed_circuit(const HybridModel& model, SigmaLoc hub, const std::string& script) {
  const Vec2 h = model.system().curve().point(hub);
  SimOptions so;
  so.max_arcs = 400;
  const Trajectory tr = simulate(model, Start{h}, 400.0, Policy::scripted(script), so);
  for (std::size_t i = 1; i < tr.visits.size(); ++i) {
    const SigmaVisit& v = tr.visits[i];
    if (v.t <= 0 || !same_point(v.loc, hub, 1e-9)) continue;
    Circuit c;
    c.period = v.t;
    for (const Arc& a : tr.arcs)
      if (a.t1 <= v.t + 1e-12) c.arcs.push_back(a);
    c.gap = distance(raw_end(c.arcs.back()), h);
    return c;
  }
  throw NotChaoticConfiguration("circuit '" + script + "' does not return to the hub");
}

}  // namespace

LambdaRegion circuit_region(const HybridModel& model, SigmaLoc hub, const std::string& outer_script,
                            const std::string& hole_script) {
  LambdaRegion L;
  L.kind = LambdaRegion::Kind::Circuit;
  L.chart = hub.chart;
  L.tangency_s = hub.s;
  L.hub = model.system().curve().point(hub);
  L.script = outer_script;
  const Circuit outer = closed_circuit(model, hub, outer_script);
  L.period = outer.period;
  L.max_gap = outer.gap;
  for (const Arc& a : outer.arcs) {
    append(L.outer.pts, a);
    L.boundary_arcs.push_back(a);
  }
  if (!hole_script.empty()) {
    const Circuit hole = closed_circuit(model, hub, hole_script);
    Polygon h;
    for (const Arc& a : hole.arcs) {
      append(h.pts, a);
      L.boundary_arcs.push_back(a);
    }
    L.holes.push_back(std::move(h));
    L.max_gap = std::max(L.max_gap, hole.gap);
  }
  return L;
}

LambdaRegion cycle_region(const HybridModel& model, SigmaLoc hub, const std::string& script) {
  LambdaRegion L = circuit_region(model, hub, script, "");
  L.curve_only = true;
  return L;
}

// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::EquilibriumX: return "EquilibriumX";
    case Verdict::EquilibriumY: return "EquilibriumY";
    case Verdict::PeriodicOrbitX: return "PeriodicOrbitX";
    case Verdict::PeriodicOrbitY: return "PeriodicOrbitY";
    case Verdict::GraphXorY: return "GraphXorY";
    case Verdict::PseudoEquilibrium: return "PseudoEquilibrium";
    case Verdict::PseudoCycle: return "PseudoCycle";
    case Verdict::MildPseudoCycle: return "MildPseudoCycle";
    case Verdict::PseudoGraph: return "PseudoGraph";
    case Verdict::TangencyTypeI: return "TangencyTypeI";
    case Verdict::TangencyTypeII: return "TangencyTypeII";
    case Verdict::ChaoticTypeIII: return "ChaoticTypeIII";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

std::string to_string(CycleKind k) {
  switch (k) {
    case CycleKind::Crossing: return "Crossing";
    case CycleKind::Tangent: return "Tangent";
    case CycleKind::Sliding: return "Sliding";
  }
  return "?";
}

std::string to_string(MildKind k) {
  switch (k) {
    case MildKind::I: return "I";
    case MildKind::II: return "II";
    case MildKind::III: return "III";
  }
  return "?";
}

std::string OmegaReport::tag() const {
  std::string t = to_string(verdict);
  if (cycle) t += "(" + to_string(*cycle) + ")";
  if (mild) t += "(" + to_string(*mild) + ")";
  return t;
}

namespace {

bool is_tangency(RegionKind k) {
  return k == RegionKind::TangencyX || k == RegionKind::TangencyY ||
         k == RegionKind::DoubleTangency;
}

// Side a slide arrives from, relative to s of the arrival point.
int slide_side(const ReturnEvent& prev, const ReturnEvent& cur) {
  if (prev.loc.chart != cur.loc.chart) return 0;
  return prev.loc.s < cur.loc.s ? -1 : 1;
}

struct Arrival {
  Mode mode;
  int from = 0;  // Slide: side of s it comes from
  bool operator<(const Arrival& o) const {
    return std::tie(mode, from) < std::tie(o.mode, o.from);
  }
};

// Ways a trajectory can arrive at a curve point.
std::set<Arrival> backward_options(const HybridModel& model, SigmaLoc loc) {
  const PiecewiseSystem& sys = model.system();
  const Tolerances& tol = model.tol();
  const SigmaPointReport rep = classify_point(sys, loc, tol);
  std::set<Arrival> out;
  auto arrives = [](Side side, const ContactOrder& c) {
    if (c.infinite() || c.sign == 0) return false;
    if (c.n % 2 == 0) return visibility(side, c) == Visibility::Visible;
    return side == Side::X ? c.sign < 0 : c.sign > 0;
  };
  if (arrives(Side::X, rep.orderX)) out.insert({Mode::FlowX, 0});
  if (arrives(Side::Y, rep.orderY)) out.insert({Mode::FlowY, 0});
  const SigmaChart& c = sys.curve().chart(loc.chart);
  for (int side : {-1, 1}) {
    const SigmaInterval* iv = nullptr;
    for (const auto& cand : model.partition().intervals) {
      if (cand.chart != loc.chart) continue;
      const double probe = loc.s + side * 1e-9 * (c.beta - c.alpha);
      if (probe > cand.lo && probe < cand.hi) iv = &cand;
    }
    if (!iv || (iv->kind != RegionKind::Sliding && iv->kind != RegionKind::Escaping)) continue;
    const double d = std::min(1e-6 * (iv->hi - iv->lo), 0.5 * std::abs(loc.s - (side > 0 ? iv->hi : iv->lo)));
    if (model.speed(loc.chart, loc.s + side * d) * side < 0) out.insert({Mode::Slide, side});
  }
  return out;
}

struct CycleFit {
  int period = 0;
  double rehit = 0.0;
};

// Period k whose last `repetitions` copies agree within tol.cycle and whose
// token pattern holds over the whole window t >= t_window.
std::optional<CycleFit> find_cycle(const std::vector<ReturnEvent>& E, double t_window,
                                   const Tolerances& tol, const ClassifyOptions& opt) {
  const int n = static_cast<int>(E.size());
  for (int k = 1; k <= opt.max_period && k * opt.repetitions <= n; ++k) {
    double rehit = 0.0;
    bool ok = true;
    for (int r = 1; r < opt.repetitions && ok; ++r)
      for (int j = 0; j < k && ok; ++j) {
        const ReturnEvent& a = E[n - 1 - j];
        const ReturnEvent& b = E[n - 1 - j - r * k];
        const double d = std::abs(a.loc.s - b.loc.s);
        ok = a.loc.chart == b.loc.chart && signature_token(a) == signature_token(b) &&
             d <= tol.cycle;
        rehit = std::max(rehit, d);
      }
    for (int i = n - 1; ok && i - k >= 0 && E[i - k].t >= t_window; --i)
      ok = E[i].loc.chart == E[i - k].loc.chart && signature_token(E[i]) == signature_token(E[i - k]);
    if (ok) return CycleFit{k, rehit};
  }
  return std::nullopt;
}

// Refine the crossing of the section {(p - c).n = 0} between two samples.
Vec2 section_crossing(const PolyField& F, const Sample& a, const Sample& b, Vec2 c, Vec2 n,
                      double* t_out) {
  auto rhs = [&](const Vec2& p) { return F(p); };
  auto state_at = [&](double tau) {
    Vec2 y = a.p;
    const int m = 8;
    Vec2 err;
    for (int i = 0; i < m; ++i) y = dopri5_step(rhs, y, tau / m, err);
    return y;
  };
  double lo = 0.0, hi = b.t - a.t;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dot(state_at(mid) - c, n) < 0) lo = mid;
    else hi = mid;
  }
  *t_out = a.t + hi;
  return state_at(hi);
}

OmegaReport smooth_tail(const HybridModel& model, const Trajectory& traj, double t_from) {
  OmegaReport rep;
  const Arc& arc = traj.arcs.back();
  const Side side = arc.mode == Mode::FlowX ? Side::X : Side::Y;
  const PolyField& F = model.system().field(side);
  const Tolerances& tol = model.tol();
  std::vector<Sample> tail;
  for (const Sample& s : arc.samples)
    if (s.t >= t_from) tail.push_back(s);
  if (tail.size() < 8) {
    rep.evidence.note = "tail too short";
    return rep;
  }
  const Vec2 last = tail.back().p;
  rep.evidence.limit_point = last;

  // (i) point convergence
  const double t_last = tail.back().t, t_span = t_last - tail.front().t;
  Box bb{last.x, last.x, last.y, last.y};
  for (const Sample& s : tail)
    if (s.t >= t_last - 0.1 * t_span) {
      bb.xmin = std::min(bb.xmin, s.p.x);
      bb.xmax = std::max(bb.xmax, s.p.x);
      bb.ymin = std::min(bb.ymin, s.p.y);
      bb.ymax = std::max(bb.ymax, s.p.y);
    }
  const std::vector<Vec2> eqs = equilibria(F, model.system().K(), tol.root);
  // (iii) monotone approach to a saddle; checked first because an orbit
  // lingering near the saddle also looks like point convergence
  for (Vec2 e : eqs) {
    const double ux = F.u.dx()(e), uy = F.u.dy()(e), vx = F.v.dx()(e), vy = F.v.dy()(e);
    if (ux * vy - uy * vx >= 0) continue;
    std::vector<double> minima;
    for (std::size_t i = 1; i + 1 < tail.size(); ++i) {
      const double d0 = distance(tail[i - 1].p, e), d1 = distance(tail[i].p, e),
                   d2 = distance(tail[i + 1].p, e);
      if (d1 < d0 && d1 <= d2) minima.push_back(d1);
    }
    if (minima.size() < 4) continue;
    bool mono = true;
    for (std::size_t i = 1; i < minima.size(); ++i) mono = mono && minima[i] < minima[i - 1];
    if (mono) {
      rep.verdict = Verdict::GraphXorY;
      rep.evidence.vertex = e;
      rep.evidence.distance = minima.back();
      rep.evidence.note = std::to_string(minima.size()) + " loops approaching the saddle";
      return rep;
    }
  }

  if (bb.diameter() <= tol.cycle) {
    double best = std::numeric_limits<double>::infinity();
    for (Vec2 e : eqs) best = std::min(best, distance(e, last));
    rep.evidence.distance = best;
    if (best <= tol.cycle) {
      rep.verdict = side == Side::X ? Verdict::EquilibriumX : Verdict::EquilibriumY;
      rep.evidence.note = "tail spread " + std::to_string(bb.diameter());
    } else {
      rep.evidence.note = "tail converged away from every equilibrium";
    }
    return rep;
  }

  // (ii) re-hits of a transversal section through the last point
  const Vec2 n = F(last) / norm(F(last));
  double diam = 0;
  {
    Box all{last.x, last.x, last.y, last.y};
    for (const Sample& s : tail) {
      all.xmin = std::min(all.xmin, s.p.x);
      all.xmax = std::max(all.xmax, s.p.x);
      all.ymin = std::min(all.ymin, s.p.y);
      all.ymax = std::max(all.ymax, s.p.y);
    }
    diam = all.diameter();
  }
  std::vector<std::pair<double, Vec2>> hits;
  for (std::size_t i = 0; i + 1 < tail.size(); ++i) {
    const double g0 = dot(tail[i].p - last, n), g1 = dot(tail[i + 1].p - last, n);
    if (!(g0 < 0 && g1 >= 0)) continue;
    if (distance(tail[i].p, last) > 0.25 * diam) continue;
    double t;
    const Vec2 p = section_crossing(F, tail[i], tail[i + 1], last, n, &t);
    hits.push_back({t, p});
  }
  if (hits.size() >= 4) {
    double rehit = 0;
    for (std::size_t i = hits.size() - 3; i < hits.size(); ++i)
      rehit = std::max(rehit, distance(hits[i].second, hits[i - 1].second));
    if (rehit <= tol.cycle) {
      rep.verdict = side == Side::X ? Verdict::PeriodicOrbitX : Verdict::PeriodicOrbitY;
      rep.evidence.rehit = rehit;
      rep.evidence.distance = rehit;
      rep.evidence.cycle_time = hits.back().first - hits[hits.size() - 2].first;
      rep.evidence.limit_point = hits.back().second;
      rep.evidence.note = "section re-hit";
      return rep;
    }
  }

  rep.evidence.note = "no smooth limit detected";
  return rep;
}

}  // namespace

OmegaReport classify_omega(const HybridModel& model, const Trajectory& traj,
                           const ClassifyOptions& opt) {
  const Tolerances& tol = model.tol();
  const PiecewiseSystem& sys = model.system();
  OmegaReport rep;
  rep.evidence.terminal = traj.terminal;
  const EventRecord& term = traj.terminal;
  switch (term.kind) {
    case EventKind::ExitK:
      rep.evidence.note = "trajectory left K";
      return rep;
    case EventKind::ReachPseudoEq:
      rep.verdict = Verdict::PseudoEquilibrium;
      rep.evidence.limit_point = term.point;
      rep.evidence.note = term.detail;
      if (term.loc) rep.evidence.distance = std::abs(model.speed(term.loc->chart, term.loc->s));
      return rep;
    case EventKind::ReachTypeII:
      rep.verdict = Verdict::TangencyTypeII;
      rep.evidence.limit_point = term.point;
      return rep;
    case EventKind::ReachTypeI:
      rep.verdict = Verdict::TangencyTypeI;
      rep.evidence.limit_point = term.point;
      return rep;
    case EventKind::TimeBudget:
    case EventKind::ArcBudget:
      break;
    default:
      rep.evidence.note = "terminal " + to_string(term.kind);
      return rep;
  }

  const std::vector<ReturnEvent> E = return_sequence(traj).events;
  const double t0 = traj.events.empty() ? 0.0 : traj.events.front().t;
  const double half = t0 + 0.5 * (traj.t_end() - t0);
  const bool quiet_tail =
      std::none_of(E.begin(), E.end(), [&](const ReturnEvent& e) { return e.t > half; });
  if (quiet_tail && !traj.arcs.empty() && traj.arcs.back().mode != Mode::Slide &&
      traj.arcs.back().t0 <= half)
    return smooth_tail(model, traj, half);

  if (const auto fit = find_cycle(E, half, tol, opt)) {
    const int n = static_cast<int>(E.size()), k = fit->period;
    OmegaEvidence& ev = rep.evidence;
    ev.period = k;
    ev.rehit = fit->rehit;
    ev.distance = fit->rehit;
    ev.cycle_time = E[n - 1].t - E[n - 1 - k].t;
    ev.limit_point = E[n - 1].point;
    std::vector<ReturnEvent> W(E.end() - k, E.end());
    for (const auto& e : W) {
      ev.signature.push_back(signature_token(e));
      ev.cycle_s.push_back(e.loc.s);
    }

    // vertices on the cycle
    for (const auto& e : W)
      for (const auto& pe : model.pseudo_eqs())
        if (same_point(e.loc, pe.loc, tol.cycle)) ev.vertex = pe.point;
    if (!ev.vertex) {
      std::vector<Vec2> eqs = equilibria(sys.X(), sys.K(), tol.root);
      for (Vec2 q : equilibria(sys.Y(), sys.K(), tol.root)) eqs.push_back(q);
      const double ta = E[n - 1 - k].t, tb = E[n - 1].t;
      for (const Arc& a : traj.arcs) {
        if (a.t1 < ta || a.t0 > tb) continue;
        for (const Sample& s : a.samples)
          for (Vec2 q : eqs)
            if (distance(s.p, q) <= tol.cycle) ev.vertex = q;
      }
    }
    if (ev.vertex) {
      rep.verdict = Verdict::PseudoGraph;
      ev.note = "cycle through an equilibrium or pseudo-equilibrium";
      return rep;
    }

    // properness: a strictly shorter closed sub-signature
    for (int i = 0; i < k && !ev.properness_fails; ++i)
      for (int j = i + 1; j < k; ++j)
        if (same_point(W[i].loc, W[j].loc, tol.cycle)) ev.properness_fails = true;

    // invariance: every forward (or every backward) alternative stays on the cycle
    bool forward_ok = true, backward_ok = true;
    std::vector<std::vector<int>> groups;  // visits of the same point
    for (int i = 0; i < k; ++i) {
      auto g = std::find_if(groups.begin(), groups.end(), [&](const std::vector<int>& idx) {
        return same_point(W[idx.front()].loc, W[i].loc, tol.cycle);
      });
      if (g == groups.end()) groups.push_back({i});
      else g->push_back(i);
    }
    for (const auto& idx : groups) {
      const ReturnEvent& e = W[idx.front()];
      const SigmaSite site = model.site(e.loc, 1e-12);
      for (const Option& o : site.options()) {
        bool on = false;
        for (int i : idx) {
          const ReturnEvent& w = W[i];
          if (o.choice == Choice::X) on = on || w.mode_out == Mode::FlowX;
          if (o.choice == Choice::Y) on = on || w.mode_out == Mode::FlowY;
          if (o.choice == Choice::Slide && w.mode_out == Mode::Slide) {
            const ReturnEvent& nx = W[(i + 1) % k];
            on = on || nx.loc.chart != w.loc.chart || (nx.loc.s - w.loc.s) * o.dir > 0;
          }
        }
        forward_ok = forward_ok && on;
      }
      for (const Arrival& a : backward_options(model, e.loc)) {
        bool on = false;
        for (int i : idx) {
          const ReturnEvent& w = W[i];
          if (w.mode_in != a.mode) continue;
          if (a.mode != Mode::Slide) on = true;
          else on = on || slide_side(W[(i + k - 1) % k], w) == a.from;
        }
        backward_ok = backward_ok && on;
      }
    }
    ev.invariance_fails = !forward_ok && !backward_ok;

    if (ev.invariance_fails || ev.properness_fails) {
      rep.verdict = Verdict::MildPseudoCycle;
      rep.mild = ev.invariance_fails && ev.properness_fails ? MildKind::III
                 : ev.invariance_fails                      ? MildKind::I
                                                            : MildKind::II;
      ev.note = std::string(ev.invariance_fails ? "not invariant" : "invariant") + ", " +
                (ev.properness_fails ? "contains a closed sub-trajectory" : "proper");
      return rep;
    }
    rep.verdict = Verdict::PseudoCycle;
    const bool sliding = std::any_of(W.begin(), W.end(), [](const ReturnEvent& e) {
      return e.mode_out == Mode::Slide || e.mode_in == Mode::Slide;
    });
    const bool tangent = std::any_of(W.begin(), W.end(), [](const ReturnEvent& e) {
      return is_tangency(e.region) || e.arrival == EventKind::Graze;
    });
    rep.cycle = sliding ? CycleKind::Sliding : tangent ? CycleKind::Tangent : CycleKind::Crossing;
    ev.note = "periodic return signature";
    return rep;
  }

  // two-sided visits near a coincident tangency
  int ns = 0, ne = 0;
  for (const auto& e : E) {
    if (e.t <= half) continue;
    ns += e.region == RegionKind::Sliding;
    ne += e.region == RegionKind::Escaping;
  }
  rep.evidence.sliding_visits = ns;
  rep.evidence.escaping_visits = ne;
  if (ns >= opt.chaos_min_visits && ne >= opt.chaos_min_visits) {
    for (const auto& b : model.partition().breakpoints) {
      if (b.endpoint || !b.tanX || !b.tanY) continue;
      try {
        rep.evidence.lambda = construct_lambda(model, SigmaLoc{b.chart, b.s});
      } catch (const NotChaoticConfiguration&) {
        continue;
      }
      rep.verdict = Verdict::ChaoticTypeIII;
      rep.evidence.limit_point = model.system().curve().point(SigmaLoc{b.chart, b.s});
      rep.evidence.note = "aperiodic returns on both sides of a coincident tangency";
      return rep;
    }
    rep.evidence.note = "two-sided returns without a chaotic configuration";
    return rep;
  }
  rep.evidence.note = "no periodic return signature";
  return rep;
}

// ---------------------------------------------------------------------------

ChaosConditions chaos_conditions(const HybridModel& model, std::uint64_t seed, double t_budget) {
  const PiecewiseSystem& sys = model.system();
  ChaosConditions cc;
  const bool continuous = sys.X() == sys.Y();
  for (const auto& b : model.partition().breakpoints) {
    if (b.endpoint || !b.tanX || !b.tanY || continuous) continue;
    cc.double_tangency = true;
    cc.tangency = SigmaLoc{b.chart, b.s};
    const DoubleKind k = classify_point(sys, *cc.tangency, model.tol()).dbl;
    if (k == DoubleKind::Parabolic || k == DoubleKind::Hyperbolic) {
      cc.parabolic_or_hyperbolic = true;
      break;
    }
  }
  cc.no_crossing_in_K = std::none_of(
      model.partition().intervals.begin(), model.partition().intervals.end(),
      [](const SigmaInterval& iv) { return iv.kind == RegionKind::Sewing; });

  std::optional<Vec2> start;
  if (cc.tangency) start = sys.curve().point(*cc.tangency);
  for (const auto& iv : model.partition().intervals)
    if (!start && (iv.kind == RegionKind::Sliding || iv.kind == RegionKind::Escaping))
      start = sys.curve().point(SigmaLoc{iv.chart, 0.5 * (iv.lo + iv.hi)});
  if (start) {
    const Trajectory tr = simulate(model, Start{*start}, t_budget, Policy::seeded_random(seed));
    bool s = false, e = false;
    for (const auto& v : tr.visits) {
      s = s || v.region == RegionKind::Sliding;
      e = e || v.region == RegionKind::Escaping;
    }
    cc.two_sided_visits_witness = s && e;
    cc.note = std::to_string(tr.visits.size()) + " visits in the witness run";
  }
  return cc;
}

LinearChaosReport linear_chaos_conditions(const LinearSpec& spec, const Tolerances& tol) {
  using R = Rational;
  const R a12p(spec.Ap[0][1]), a22p(spec.Ap[1][1]), b1p(spec.bp.x), b2p(spec.bp.y);
  const R a12m(spec.Am[0][1]), a22m(spec.Am[1][1]), b1m(spec.bm.x), b2m(spec.bm.y);
  if (a12p == 0 || a12m == 0) throw DegenerateA12("a12 vanishes; tangency point undefined");
  LinearChaosReport r;
  const R i = a12m * b1p - a12p * b1m;
  r.coincident = i == 0;
  r.coincidence_value = i.str();
  r.direction = (a12m * b2m - a22m * b1m < 0) || (a12p * b2p - a22p * b1p > 0);
  r.opposite_a12 = a12p * a12m < 0;

  // geometric cross-check on the switching line
  const double pp = -spec.bp.x / spec.Ap[0][1], pm = -spec.bm.x / spec.Am[0][1];
  const Box K{-1.0, 1.0, std::min(pp, pm) - 1.0, std::max(pp, pm) + 1.0};
  const PiecewiseSystem sys = from_linear(spec, K);
  const auto tx = tangencies(sys, Side::X, tol), ty = tangencies(sys, Side::Y, tol);
  if (!tx[0].empty() && !ty[0].empty())
    r.geometric_coincident = std::abs(tx[0].front() - ty[0].front()) <= tol.tan;
  r.consistent = r.geometric_coincident == r.coincident;
  return r;
}

}  // namespace filippov
