#include "filippov/sigma.hpp"

#include <algorithm>
#include <cmath>

#include "filippov/errors.hpp"
#include "filippov/roots.hpp"

namespace filippov {

std::string to_string(RegionKind k) {
  switch (k) {
    case RegionKind::Sewing: return "Sewing";
    case RegionKind::Sliding: return "Sliding";
    case RegionKind::Escaping: return "Escaping";
    case RegionKind::TangencyX: return "TangencyX";
    case RegionKind::TangencyY: return "TangencyY";
    case RegionKind::DoubleTangency: return "DoubleTangency";
  }
  return "?";
}

std::string to_string(Visibility v) {
  switch (v) {
    case Visibility::NotTangent: return "NotTangent";
    case Visibility::Visible: return "Visible";
    case Visibility::Invisible: return "Invisible";
  }
  return "?";
}

std::string to_string(DoubleKind k) {
  switch (k) {
    case DoubleKind::None: return "None";
    case DoubleKind::Elliptic: return "Elliptic";
    case DoubleKind::Parabolic: return "Parabolic";
    case DoubleKind::Hyperbolic: return "Hyperbolic";
  }
  return "?";
}

std::string to_string(Special s) {
  switch (s) {
    case Special::None: return "None";
    case Special::TypeI: return "TypeI";
    case Special::TypeII: return "TypeII";
  }
  return "?";
}

std::string to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    case Stability::SemiStable: return "semi-stable";
  }
  return "?";
}

std::string to_string(Extension::Kind k) {
  switch (k) {
    case Extension::Kind::RegularFlowThrough: return "RegularFlowThrough";
    case Extension::Kind::ExtendedPseudoEquilibrium: return "ExtendedPseudoEquilibrium";
    case Extension::Kind::NotExtendable: return "NotExtendable";
  }
  return "?";
}

RegionKind region_from_signs(double a, double b) {
  if (a == 0.0 && b == 0.0) return RegionKind::DoubleTangency;
  if (a == 0.0) return RegionKind::TangencyX;
  if (b == 0.0) return RegionKind::TangencyY;
  if ((a > 0) == (b > 0)) return RegionKind::Sewing;
  return a < 0 ? RegionKind::Sliding : RegionKind::Escaping;
}

Visibility visibility(Side side, ContactOrder c) {
  if (c.infinite() || c.n == 1) return Visibility::NotTangent;
  if (c.n % 2 == 1) return Visibility::Visible;
  const bool invisible = side == Side::X ? c.sign < 0 : c.sign > 0;
  return invisible ? Visibility::Invisible : Visibility::Visible;
}

bool departs(const PiecewiseSystem& sys, Side side, Vec2 p, const Tolerances& tol) {
  const ContactOrder c = contact_order_at(sys, side, p, tol);
  if (c.infinite()) return false;
  return side == Side::X ? c.sign > 0 : c.sign < 0;
}

namespace {

double neighbour_offset(const SigmaChart& c) { return 1e-5 * std::max(1.0, c.beta - c.alpha); }

RegionKind region_at(const PiecewiseSystem& sys, Vec2 p) {
  return region_from_signs(sys.lie(Side::X, 1, p), sys.lie(Side::Y, 1, p));
}

Vec2 formula(double a, double b, Vec2 X, Vec2 Y) { return (a * Y - b * X) / (a - b); }

double speed_of(const SigmaChart& c, double s, Vec2 Z) {
  const Vec2 t = c.tangent(s);
  return dot(Z, t) / dot(t, t);
}

}  // namespace

SigmaPointReport classify_point(const PiecewiseSystem& sys, SigmaLoc loc, const Tolerances& tol) {
  SigmaPointReport r;
  r.loc = loc;
  r.point = sys.curve().point(loc);
  const Vec2 p = r.point;
  r.Xf = sys.lie(Side::X, 1, p);
  r.Yf = sys.lie(Side::Y, 1, p);
  const bool tanX = std::abs(r.Xf) <= tol.tan, tanY = std::abs(r.Yf) <= tol.tan;
  r.equilibriumX = norm(sys.X()(p)) <= tol.tan;
  r.equilibriumY = norm(sys.Y()(p)) <= tol.tan;

  auto order = [&](Side side, bool eq) {
    const ContactOrder c = contact_order_at(sys, side, p, tol);
    if (c.infinite() && !eq)
      throw MaxOrderExceeded(std::string(to_string(side)) + ": all Lie derivatives up to order " +
                             std::to_string(tol.max_order) + " vanish at s = " +
                             std::to_string(loc.s));
    return c;
  };
  r.orderX = order(Side::X, r.equilibriumX);
  r.orderY = order(Side::Y, r.equilibriumY);
  r.visX = visibility(Side::X, r.orderX);
  r.visY = visibility(Side::Y, r.orderY);

  if (tanX && tanY) r.region = RegionKind::DoubleTangency;
  else if (tanX) r.region = RegionKind::TangencyX;
  else if (tanY) r.region = RegionKind::TangencyY;
  else r.region = region_from_signs(r.Xf, r.Yf);

  if (r.region == RegionKind::DoubleTangency && !r.equilibriumX && !r.equilibriumY) {
    const bool invX = r.visX == Visibility::Invisible, invY = r.visY == Visibility::Invisible;
    const bool visEvenX = r.visX == Visibility::Visible && r.orderX.n % 2 == 0;
    const bool visEvenY = r.visY == Visibility::Visible && r.orderY.n % 2 == 0;
    if (invX && invY) r.dbl = DoubleKind::Elliptic;
    else if (visEvenX && visEvenY) r.dbl = DoubleKind::Hyperbolic;
    else if (visEvenX != visEvenY) r.dbl = DoubleKind::Parabolic;

    // neighbourhood on the curve decides type I / type II
    const SigmaChart& c = sys.curve().chart(loc.chart);
    const double d = neighbour_offset(c);
    bool sewing_both = true, attracts_sliding = false;
    for (int dir : {-1, 1}) {
      const double s = loc.s + dir * d;
      if (!c.contains_param(s)) continue;
      const Vec2 q = c.point(s);
      const double a = sys.lie(Side::X, 1, q), b = sys.lie(Side::Y, 1, q);
      const RegionKind k = region_from_signs(a, b);
      if (k != RegionKind::Sewing) sewing_both = false;
      if (k == RegionKind::Sliding) {
        const double v = speed_of(c, s, formula(a, b, sys.X()(q), sys.Y()(q)));
        if (v * dir < 0) attracts_sliding = true;
      }
    }
    const bool oddX = r.orderX.n % 2 == 1, oddY = r.orderY.n % 2 == 1;
    if (r.dbl == DoubleKind::Elliptic && sewing_both) r.special = Special::TypeI;
    else if (((invX && oddY) || (invY && oddX)) && attracts_sliding) r.special = Special::TypeII;
  }
  return r;
}

const SigmaInterval* SigmaPartition::find(int chart, double s) const {
  for (const auto& iv : intervals)
    if (iv.chart == chart && s >= iv.lo && s <= iv.hi) return &iv;
  return nullptr;
}

const SigmaBreakpoint* SigmaPartition::breakpoint_near(int chart, double s, double tol) const {
  const SigmaBreakpoint* best = nullptr;
  for (const auto& b : breakpoints)
    if (b.chart == chart && !b.endpoint && std::abs(b.s - s) <= tol &&
        (!best || std::abs(b.s - s) < std::abs(best->s - s)))
      best = &b;
  return best;
}

SigmaPartition partition_sigma(const PiecewiseSystem& sys, const Tolerances& tol) {
  SigmaPartition part;
  const auto tx = tangencies(sys, Side::X, tol);
  const auto ty = tangencies(sys, Side::Y, tol);
  for (int k = 0; k < sys.curve().chart_count(); ++k) {
    const SigmaChart& c = sys.curve().chart(k);
    if (tx[k].size() > 1 || ty[k].size() > 1)
      throw HypothesisViolation("more than one tangency point of " +
                                std::string(tx[k].size() > 1 ? "X" : "Y") + " on chart " +
                                std::to_string(k));
    const double merge = 1e-8 * std::max(1.0, c.beta - c.alpha);
    std::vector<SigmaBreakpoint> bps{{k, c.alpha, true, false, false},
                                     {k, c.beta, true, false, false}};
    auto add = [&](double s, bool isX) {
      for (auto& b : bps)
        if (std::abs(b.s - s) <= merge) {
          (isX ? b.tanX : b.tanY) = true;
          return;
        }
      bps.push_back({k, s, false, isX, !isX});
    };
    for (double s : tx[k]) add(s, true);
    for (double s : ty[k]) add(s, false);
    std::sort(bps.begin(), bps.end(), [](auto& a, auto& b) { return a.s < b.s; });
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      const double lo = bps[i].s, hi = bps[i + 1].s;
      const RegionKind kind = region_at(sys, c.point(0.5 * (lo + hi)));
      for (double frac : {0.3183098861837907, 0.7071067811865476}) {
        const RegionKind k2 = region_at(sys, c.point(lo + frac * (hi - lo)));
        if (k2 != kind)
          throw HypothesisViolation("region kind changes inside (" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + ") on chart " + std::to_string(k));
      }
      part.intervals.push_back({k, lo, hi, kind});
    }
    part.breakpoints.insert(part.breakpoints.end(), bps.begin(), bps.end());
  }
  return part;
}

Vec2 filippov_field_at(const PiecewiseSystem& sys, Vec2 p) {
  const double a = sys.lie(Side::X, 1, p), b = sys.lie(Side::Y, 1, p);
  if (!((a < 0 && b > 0) || (a > 0 && b < 0)))
    throw NotSlidingOrEscaping("point is not in a sliding or escaping region (X.f = " +
                               std::to_string(a) + ", Y.f = " + std::to_string(b) + ")");
  return formula(a, b, sys.X()(p), sys.Y()(p));
}

Vec2 filippov_field(const PiecewiseSystem& sys, SigmaLoc loc) {
  return filippov_field_at(sys, sys.curve().point(loc));
}

double sliding_speed(const PiecewiseSystem& sys, SigmaLoc loc) {
  return speed_of(sys.curve().chart(loc.chart), loc.s, filippov_field(sys, loc));
}

namespace {

// d/ds of the first Lie derivative along the chart
double lie_ds(const PiecewiseSystem& sys, Side side, const SigmaChart& c, double s) {
  const Poly2& g = sys.lie(side, 1);
  const Vec2 p = c.point(s);
  return dot(Vec2{g.dx()(p), g.dy()(p)}, c.tangent(s));
}

// Neville extrapolation to h = 0 of the sliding speed at s + dir*h
std::optional<double> richardson(const PiecewiseSystem& sys, const SigmaChart& c, int chart,
                                 double s, int dir) {
  const double hs[] = {1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  std::vector<double> H, V;
  for (double h : hs) {
    const double t = s + dir * h;
    if (!c.contains_param(t)) continue;
    try {
      V.push_back(sliding_speed(sys, {chart, t}));
      H.push_back(h);
    } catch (const NotSlidingOrEscaping&) {
    }
  }
  if (V.empty()) return std::nullopt;
  const std::size_t n = std::min<std::size_t>(V.size(), 3);
  std::vector<double> P(V.begin(), V.begin() + n);
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i)
      P[i] = (H[i] * P[i + 1] - H[i + m] * P[i]) / (H[i] - H[i + m]);
  return P[0];
}

}  // namespace

Extension extend_filippov(const PiecewiseSystem& sys, SigmaLoc loc, const Tolerances& tol) {
  Extension e;
  const SigmaChart& c = sys.curve().chart(loc.chart);
  const Vec2 p = c.point(loc.s);
  const double a = sys.lie(Side::X, 1, p), b = sys.lie(Side::Y, 1, p);
  const double d = neighbour_offset(c);

  std::optional<double> symbolic;
  double zero_tol = tol.tan;
  if (std::abs(a - b) > tol.tan) {
    symbolic = speed_of(c, loc.s, formula(a, b, sys.X()(p), sys.Y()(p)));
  } else {
    const double da = lie_ds(sys, Side::X, c, loc.s), db = lie_ds(sys, Side::Y, c, loc.s);
    if (std::abs(da - db) > tol.tan)
      symbolic = speed_of(c, loc.s, formula(da, db, sys.X()(p), sys.Y()(p)));
    else
      zero_tol = 1e-6;  // extrapolation floor
  }

  // near-side speeds tell an attractor/repeller of the 1-d flow from a pass
  double near_below = 0.0, near_above = 0.0;
  for (int dir : {-1, 1}) {
    const double s = loc.s + dir * d;
    if (!c.contains_param(s)) continue;
    const RegionKind k = region_at(sys, c.point(s));
    if (k != RegionKind::Sliding && k != RegionKind::Escaping) continue;
    const auto v = symbolic ? symbolic : richardson(sys, c, loc.chart, loc.s, dir);
    (dir < 0 ? e.speed_below : e.speed_above) = v;
    (dir < 0 ? near_below : near_above) = sliding_speed(sys, {loc.chart, s});
  }

  auto zero = [&](double v) { return std::abs(v) <= zero_tol; };
  if (e.speed_below && e.speed_above) {
    const double lo = *e.speed_below, hi = *e.speed_above;
    if ((near_below > 0) != (near_above > 0)) {
      e.kind = Extension::Kind::NotExtendable;
    } else if (zero(lo) && zero(hi)) {
      e.kind = Extension::Kind::ExtendedPseudoEquilibrium;
    } else if (!zero(lo) && !zero(hi) && (lo > 0) == (hi > 0)) {
      e.kind = Extension::Kind::RegularFlowThrough;
      e.direction = lo > 0 ? 1 : -1;
    }
  } else if (const auto& v = e.speed_below ? e.speed_below : e.speed_above; v && zero(*v)) {
    e.kind = Extension::Kind::ExtendedPseudoEquilibrium;
  }
  return e;
}

std::vector<PseudoEquilibrium> pseudo_equilibria(const PiecewiseSystem& sys,
                                                 const SigmaPartition& part,
                                                 const Tolerances& tol) {
  std::vector<PseudoEquilibrium> out;
  for (const auto& iv : part.intervals) {
    if (iv.kind != RegionKind::Sliding && iv.kind != RegionKind::Escaping) continue;
    const SigmaChart& c = sys.curve().chart(iv.chart);
    // numerator of the sliding speed: smooth across the interval
    auto q = [&](double s) {
      const Vec2 p = c.point(s);
      const double a = sys.lie(Side::X, 1, p), b = sys.lie(Side::Y, 1, p);
      return dot(a * sys.Y()(p) - b * sys.X()(p), c.tangent(s)) / (a - b);
    };
    const double len = iv.hi - iv.lo;
    const double pad = 1e-7 * len;
    const double h = 1e-6 * std::max(1.0, len);
    const ScalarRoots r = scalar_roots(
        q, [&](double s) { return (q(s + h) - q(s - h)) / (2 * h); }, iv.lo + pad, iv.hi - pad,
        tol.tan, tol.root, 4000);
    if (r.non_isolated)
      throw HypothesisViolation("sliding field vanishes along a whole " + to_string(iv.kind) +
                                " interval");
    for (double s : r.roots) {
      const double d = 1e-5 * std::max(1.0, len);
      const double vl = q(std::max(iv.lo + pad, s - d)), vr = q(std::min(iv.hi - pad, s + d));
      PseudoEquilibrium pe;
      pe.loc = {iv.chart, s};
      pe.point = c.point(s);
      pe.region = iv.kind;
      if (vl > 0 && vr < 0) pe.stability = Stability::Attracting;
      else if (vl < 0 && vr > 0) pe.stability = Stability::Repelling;
      else pe.stability = Stability::SemiStable;
      out.push_back(pe);
    }
  }
  return out;
}

SigmaAnalysis analyze(const PiecewiseSystem& sys, const Tolerances& tol) {
  SigmaAnalysis a;
  a.warnings = check_hypotheses(sys, tol);
  a.partition = partition_sigma(sys, tol);
  for (const auto& b : a.partition.breakpoints)
    if (!b.endpoint) a.breakpoint_reports.push_back(classify_point(sys, {b.chart, b.s}, tol));
  a.pseudo_eqs = pseudo_equilibria(sys, a.partition, tol);
  try {
    a.equilibriaX = equilibria(sys.X(), sys.K(), tol.root);
  } catch (const NonIsolatedEquilibria&) {
  }
  try {
    a.equilibriaY = equilibria(sys.Y(), sys.K(), tol.root);
  } catch (const NonIsolatedEquilibria&) {
  }
  return a;
}

}  // namespace filippov
