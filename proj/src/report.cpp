#include "filippov/report.hpp"

namespace filippov {

namespace {

Json order_json(const ContactOrder& c) {
  if (c.infinite()) return "infinite";
  return Json::array({c.n, c.sign});
}

Json event_json(const EventRecord& e) {
  Json o = Json::object();
  o["kind"] = to_string(e.kind);
  o["t"] = e.t;
  o["point"] = to_json(e.point);
  if (e.loc) o["sigma"] = Json::array({e.loc->chart, e.loc->s});
  if (!e.detail.empty()) o["detail"] = e.detail;
  return o;
}

}  // namespace

Json to_json(Vec2 p) { return Json::array({p.x, p.y}); }

Json to_json(const SigmaAnalysis& a, const PiecewiseSystem& sys) {
  Json o = Json::object();
  if (!sys.name.empty()) o["system"] = sys.name;
  Json iv = Json::array();
  for (const auto& i : a.partition.intervals) {
    Json j = Json::object();
    j["chart"] = i.chart;
    j["lo"] = i.lo;
    j["hi"] = i.hi;
    j["kind"] = to_string(i.kind);
    iv.push_back(j);
  }
  o["intervals"] = iv;
  Json bp = Json::array();
  for (const auto& r : a.breakpoint_reports) {
    Json j = Json::object();
    j["chart"] = r.loc.chart;
    j["s"] = r.loc.s;
    j["point"] = to_json(r.point);
    j["region"] = to_string(r.region);
    j["Xf"] = r.Xf;
    j["Yf"] = r.Yf;
    j["orderX"] = order_json(r.orderX);
    j["orderY"] = order_json(r.orderY);
    j["visX"] = to_string(r.visX);
    j["visY"] = to_string(r.visY);
    if (r.dbl != DoubleKind::None) j["double"] = to_string(r.dbl);
    if (r.special != Special::None) j["special"] = to_string(r.special);
    if (r.equilibriumX) j["equilibriumX"] = true;
    if (r.equilibriumY) j["equilibriumY"] = true;
    bp.push_back(j);
  }
  o["breakpoints"] = bp;
  Json pe = Json::array();
  for (const auto& p : a.pseudo_eqs) {
    Json j = Json::object();
    j["chart"] = p.loc.chart;
    j["s"] = p.loc.s;
    j["point"] = to_json(p.point);
    j["stability"] = to_string(p.stability);
    j["region"] = to_string(p.region);
    pe.push_back(j);
  }
  o["pseudo_equilibria"] = pe;
  Json ex = Json::array(), ey = Json::array();
  for (auto p : a.equilibriaX) ex.push_back(to_json(p));
  for (auto p : a.equilibriaY) ey.push_back(to_json(p));
  o["equilibria_X"] = ex;
  o["equilibria_Y"] = ey;
  o["warnings"] = a.warnings;
  return o;
}

Json to_json(const OmegaReport& r) {
  Json o = Json::object();
  o["verdict"] = r.tag();
  const auto& e = r.evidence;
  Json ev = Json::object();
  if (!e.note.empty()) ev["note"] = e.note;
  if (e.limit_point) ev["limit_point"] = to_json(*e.limit_point);
  if (e.distance >= 0) ev["distance"] = e.distance;
  if (e.terminal) ev["terminal"] = event_json(*e.terminal);
  if (e.period > 0) {
    ev["period"] = e.period;
    ev["signature"] = e.signature;
    ev["cycle_s"] = e.cycle_s;
    ev["rehit"] = e.rehit;
    ev["cycle_time"] = e.cycle_time;
    ev["invariance_fails"] = e.invariance_fails;
    ev["properness_fails"] = e.properness_fails;
  }
  if (e.vertex) ev["vertex"] = to_json(*e.vertex);
  if (e.lambda) ev["lambda"] = to_json(*e.lambda);
  if (e.sliding_visits || e.escaping_visits) {
    ev["sliding_visits"] = e.sliding_visits;
    ev["escaping_visits"] = e.escaping_visits;
  }
  o["evidence"] = ev;
  return o;
}

Json to_json(const LambdaRegion& L) {
  Json o = Json::object();
  o["kind"] = to_string(L.kind);
  o["hub"] = to_json(L.hub);
  o["area"] = L.area();
  o["max_gap"] = L.max_gap;
  if (L.kind != LambdaRegion::Kind::Circuit) {
    o["chart"] = L.chart;
    o["tangency_s"] = L.tangency_s;
    o["q_e_plus"] = L.q_e_plus;
    o["q_e_minus"] = L.q_e_minus;
    o["p_s"] = L.p_s;
    o["p_e"] = L.p_e;
    o["sigma"] = Json::array({L.sigma_lo, L.sigma_hi});
  } else {
    o["script"] = L.script;
    o["period"] = L.period;
    o["curve_only"] = L.curve_only;
  }
  o["outer_vertices"] = L.outer.pts.size();
  o["holes"] = L.holes.size();
  return o;
}

Json to_json(const ChaosConditions& c) {
  Json o = Json::object();
  o["double_tangency"] = c.double_tangency;
  o["parabolic_or_hyperbolic"] = c.parabolic_or_hyperbolic;
  o["no_crossing_in_K"] = c.no_crossing_in_K;
  o["two_sided_visits_witness"] = c.two_sided_visits_witness;
  if (c.tangency) o["tangency"] = Json::array({c.tangency->chart, c.tangency->s});
  if (!c.note.empty()) o["note"] = c.note;
  o["all"] = c.all();
  return o;
}

Json to_json(const LinearChaosReport& r) {
  Json o = Json::object();
  o["coincident"] = r.coincident;
  o["coincidence_value"] = r.coincidence_value;
  o["direction"] = r.direction;
  o["opposite_a12"] = r.opposite_a12;
  o["geometric_coincident"] = r.geometric_coincident;
  o["consistent"] = r.consistent;
  o["all"] = r.all();
  return o;
}

Json to_json(const Theorem2Report& r) {
  Json o = Json::object();
  o["a"] = r.a;
  o["b"] = r.b;
  o["c"] = r.c;
  o["d"] = r.d;
  o["coverage"] = Json::object({{"h", r.coverage.h},
                                {"interior", r.coverage.interior},
                                {"covered", r.coverage.covered},
                                {"fraction", r.coverage.fraction()}});
  Json s = Json::array();
  for (const auto& p : r.samples) {
    Json j = Json::object();
    j["q"] = to_json(p.q);
    j["periodic"] = p.periodic;
    j["closure_gap"] = p.closure_gap;
    j["recurrent"] = p.recurrent;
    j["to_hub"] = p.to_hub;
    j["from_hub"] = p.from_hub;
    s.push_back(j);
  }
  o["samples"] = s;
  o["pass"] = r.pass();
  return o;
}

Json to_json(const MinimalityReport& r) {
  Json o = Json::object();
  o["samples"] = r.samples.size();
  Json a = Json::array(), b = Json::array();
  for (auto p : r.unreachable_to_hub) a.push_back(to_json(p));
  for (auto p : r.unreachable_from_hub) b.push_back(to_json(p));
  o["unreachable_to_hub"] = a;
  o["unreachable_from_hub"] = b;
  o["pass"] = r.pass();
  return o;
}

Json trajectory_summary(const Trajectory& traj) {
  Json o = Json::object();
  o["arcs"] = traj.arcs.size();
  o["visits"] = traj.visits.size();
  o["t_end"] = traj.t_end();
  o["terminal"] = event_json(traj.terminal);
  Json log = Json::array();
  for (const auto& e : traj.policy_log) log.push_back(event_json(e));
  o["policy_log"] = log;
  return o;
}

}  // namespace filippov
