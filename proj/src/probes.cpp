#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "filippov/errors.hpp"
#include "filippov/limitset.hpp"

namespace filippov {

namespace {

constexpr double kRec = 1e-6;  // closure and recurrence radius

double uniform01(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

// Backward chain from q through sewing crossings to the hub or one of its
// escaping slide windows. With `timed` the slide time is computed as well.
Route route_impl(const HybridModel& model, const SigmaSite& hub, Vec2 q, int max_links, bool timed) {
  const PiecewiseSystem& sys = model.system();
  const Tolerances& tol = model.tol();
  Route route;
  if (std::abs(sys.f(q)) <= tol.on_sigma) return route;
  Side side = sys.f(q) > 0 ? Side::X : Side::Y;
  Vec2 p = q;
  double T = 0.0;
  for (int link = 0; link < max_links; ++link) {
    const PolyField back = -sys.field(side);
    const FlowResult r = integrate_flow(back, sys.curve().f(), side == Side::X ? 1 : -1, sys.K(), p,
                                        0.0, 200.0, true, tol);
    if (r.stop != FlowStop::HitSigma && r.stop != FlowStop::Graze) return route;
    T += r.t;
    const auto loc = sys.curve().locate(r.p, 1e-6);
    if (!loc) return route;
    const Choice leave = side == Side::X ? Choice::X : Choice::Y;
    if (distance(sys.curve().point(*loc), hub.point) <= kRec) {
      if (side == Side::X ? !hub.canX : !hub.canY) return route;
      route.found = true;
      route.first = Decision{Option{leave, 0}, std::nullopt};
      route.time = T;
      return route;
    }
    for (const SlideWindow& w : hub.slides) {
      if (w.kind != RegionKind::Escaping || loc->chart != hub.loc.chart) continue;
      const double ahead = (loc->s - hub.loc.s) * w.dir, room = (w.s_end - loc->s) * w.dir;
      if (ahead <= 1e-9 || room <= 1e-9) continue;
      route.found = true;
      route.first = Decision{Option{Choice::Slide, w.dir}, ExitPlan{side, loc->s}};
      if (timed) {
        const auto sr = model.slide(hub.loc, w.dir, 0.0, 1e4, loc->s);
        if (sr.stop != HybridModel::SlideResult::Stop::Target) {
          route.found = false;
          return route;
        }
        T += sr.arc.t1;
      }
      route.time = T;
      return route;
    }
    const SigmaInterval* iv = model.partition().find(loc->chart, loc->s);
    if (!iv || iv->kind != RegionKind::Sewing) return route;
    side = side == Side::X ? Side::Y : Side::X;
    p = sys.curve().point(*loc);
  }
  return route;
}

bool cell_reached(const HybridModel& model, const SigmaSite& hub, Vec2 c) {
  return route_impl(model, hub, c, 40, false).found;
}

struct Raster {
  Box box;
  int nx = 0, ny = 0;
  double h = 0;
  std::vector<char> edge;  // cells touched by the boundary (and neighbours)
  Vec2 center(int i, int j) const { return {box.xmin + (i + 0.5) * h, box.ymin + (j + 0.5) * h}; }
};

Raster rasterize(const LambdaRegion& region, double h) {
  Raster r;
  r.box = region.bbox();
  r.h = h;
  r.nx = static_cast<int>(std::ceil(r.box.width() / h));
  r.ny = static_cast<int>(std::ceil(r.box.height() / h));
  r.edge.assign(static_cast<std::size_t>(r.nx) * r.ny, 0);
  auto mark = [&](Vec2 p) {
    const int i = static_cast<int>(std::floor((p.x - r.box.xmin) / h));
    const int j = static_cast<int>(std::floor((p.y - r.box.ymin) / h));
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const int a = i + di, b = j + dj;
        if (a >= 0 && a < r.nx && b >= 0 && b < r.ny) r.edge[static_cast<std::size_t>(b) * r.nx + a] = 1;
      }
  };
  auto walk = [&](const Polygon& poly) {
    for (std::size_t k = 0; k < poly.pts.size(); ++k) {
      const Vec2 a = poly.pts[k], b = poly.pts[(k + 1) % poly.pts.size()];
      const int m = 1 + static_cast<int>(4.0 * distance(a, b) / h);
      for (int t = 0; t <= m; ++t) mark(a + (b - a) * (double(t) / m));
    }
  };
  walk(region.outer);
  for (const auto& hole : region.holes) walk(hole);
  return r;
}

SigmaSite hub_site(const HybridModel& model, Vec2 hub) {
  const auto loc = model.system().curve().locate(hub, 1e-6);
  if (!loc) throw std::invalid_argument("hub is not on the switching curve");
  return model.site(*loc, model.tol().tan);
}

}  // namespace

Route route_from_hub(const HybridModel& model, const SigmaSite& hub, Vec2 q, int max_links) {
  Route r = route_impl(model, hub, q, max_links, true);
  if (!r.found) return r;
  const Trajectory tr =
      simulate(model, Start{hub.point, 0.0, r.first}, r.time, Policy::stay_sliding());
  r.gap = distance(tr.terminal.point, q);
  return r;
}

ReachResult reaches_forward(const HybridModel& model, Vec2 p, SigmaLoc target, int depth,
                            double t_segment) {
  SimOptions so;
  so.stop_at_branch = true;
  std::vector<SigmaLoc> expanded;
  ReachResult best;
  // depth-first search over branch choices, stopping at the first witness
  struct Frame {
    Start start;
    int depth;
    bool sliding, escaping;
  };
  std::vector<Frame> stack{{Start{p}, 0, false, false}};
  while (!stack.empty()) {
    Frame fr = std::move(stack.back());
    stack.pop_back();
    const Trajectory tr = simulate(model, fr.start, t_segment, Policy::stay_sliding(), so);
    bool s = fr.sliding, e = fr.escaping;
    for (const SigmaVisit& v : tr.visits) {
      s = s || v.region == RegionKind::Sliding;
      e = e || v.region == RegionKind::Escaping;
      if (v.loc.chart == target.chart && std::abs(v.loc.s - target.s) <= kRec) {
        best.reached = true;
        best.time = v.t;
        best.two_sided = s && e;
        return best;
      }
    }
    if (!tr.pending || fr.depth >= depth) continue;
    const SigmaSite& site = *tr.pending;
    bool seen = false;
    for (const auto& x : expanded)
      seen = seen || (x.chart == site.loc.chart && std::abs(x.s - site.loc.s) <= model.tol().dedup);
    if (seen) continue;
    expanded.push_back(site.loc);
    const auto opts = site.options();
    for (auto it = opts.rbegin(); it != opts.rend(); ++it)
      stack.push_back({Start{site.point, tr.t_end(), Decision{*it, std::nullopt}}, fr.depth + 1, s, e});
  }
  return best;
}

CoverageGrid coverage_grid(const HybridModel& model, const LambdaRegion& region, double h) {
  const SigmaSite hub = hub_site(model, region.hub);
  const Raster r = rasterize(region, h);
  std::size_t interior = 0, covered = 0;
#pragma omp parallel for schedule(dynamic) reduction(+ : interior, covered)
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) {
      if (r.edge[static_cast<std::size_t>(j) * r.nx + i]) continue;
      const Vec2 c = r.center(i, j);
      if (!region.contains(c)) continue;
      ++interior;
      if (cell_reached(model, hub, c)) ++covered;
    }
  return {h, interior, covered};
}

CoverageGrid coverage_grid_serial(const HybridModel& model, const LambdaRegion& region, double h) {
  const SigmaSite hub = hub_site(model, region.hub);
  const Raster r = rasterize(region, h);
  CoverageGrid g{h, 0, 0};
  for (int j = 0; j < r.ny; ++j)
    for (int i = 0; i < r.nx; ++i) {
      if (r.edge[static_cast<std::size_t>(j) * r.nx + i]) continue;
      const Vec2 c = r.center(i, j);
      if (!region.contains(c)) continue;
      ++g.interior;
      if (cell_reached(model, hub, c)) ++g.covered;
    }
  return g;
}

std::vector<Vec2> sample_region(const LambdaRegion& region, std::size_t n, std::uint64_t seed,
                                double margin) {
  std::mt19937_64 g(seed);
  std::vector<Vec2> out;
  if (region.curve_only) {
    // points on the polyline; callers wanting exact orbit points use the circuit
    const auto& v = region.outer.pts;
    while (out.size() < n) out.push_back(v[static_cast<std::size_t>(uniform01(g) * v.size()) % v.size()]);
    return out;
  }
  const Box b = region.bbox();
  std::size_t attempts = 0;
  while (out.size() < n) {
    if (++attempts > 1000000) throw ProbeBudgetExceeded("could not sample the region interior");
    const Vec2 p{b.xmin + uniform01(g) * b.width(), b.ymin + uniform01(g) * b.height()};
    if (region.contains(p) && region.boundary_distance(p) >= margin) out.push_back(p);
  }
  return out;
}

SampleProbe probe_point(const HybridModel& model, const LambdaRegion& lambda, Vec2 q) {
  if (!lambda.contains(q) && lambda.boundary_distance(q) > kRec)
    throw std::invalid_argument("probe point lies outside the region");
  const SigmaSite hub = hub_site(model, lambda.hub);
  SampleProbe sp;
  sp.q = q;
  const ReachResult to = reaches_forward(model, q, hub.loc);
  sp.to_hub = to.reached;
  const Route from = route_from_hub(model, hub, q);
  sp.from_hub = from.found && from.gap <= kRec;
  sp.closure_gap = from.gap;
  sp.periodic = sp.to_hub && sp.from_hub;
  if (sp.periodic) {
    // both sides of the curve are visited along q -> hub -> q
    const Trajectory back = simulate(model, Start{hub.point, 0.0, from.first}, from.time,
                                     Policy::stay_sliding());
    bool s = to.two_sided, e = to.two_sided;
    SimOptions so;
    so.stop_at_branch = true;
    const Trajectory fwd = simulate(model, Start{q}, to.time + 1.0, Policy::stay_sliding(), so);
    for (const auto* tr : {&back, &fwd})
      for (const SigmaVisit& v : tr->visits) {
        s = s || v.region == RegionKind::Sliding;
        e = e || v.region == RegionKind::Escaping;
      }
    sp.recurrent = s && e;
  }
  return sp;
}

Theorem2Report theorem2_probes(const HybridModel& model, const LambdaRegion& lambda,
                               std::size_t n_samples, std::uint64_t seed, double grid_h) {
  Theorem2Report rep;
  const std::vector<Vec2> qs = sample_region(lambda, n_samples, seed);
  rep.samples.resize(qs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < qs.size(); ++i) rep.samples[i] = probe_point(model, lambda, qs[i]);
  rep.coverage = coverage_grid(model, lambda, grid_h);
  rep.a = rep.c = rep.d = !rep.samples.empty();
  bool all_to_hub = true;
  for (const auto& s : rep.samples) {
    rep.a = rep.a && s.periodic && s.closure_gap <= kRec;
    rep.c = rep.c && s.recurrent;
    all_to_hub = all_to_hub && s.to_hub;
  }
  rep.d = rep.c;
  // every sample reaches the hub, so its reachable set contains the hub's
  rep.b = all_to_hub && rep.coverage.fraction() >= 0.99;
  return rep;
}

MinimalityReport minimality_probe(const HybridModel& model, const LambdaRegion& region, Vec2 hub,
                                  std::size_t n_samples, std::uint64_t seed) {
  MinimalityReport rep;
  const SigmaSite hs = hub_site(model, hub);
  if (region.curve_only) {
    // exact points of the circuit at seeded times
    std::mt19937_64 g(seed);
    for (std::size_t i = 0; i < n_samples; ++i) {
      const double t = uniform01(g) * region.period;
      rep.samples.push_back(
          simulate(model, Start{hs.point}, t, Policy::scripted(region.script)).terminal.point);
    }
  } else {
    rep.samples = sample_region(region, n_samples, seed);
  }
  std::vector<char> to(rep.samples.size()), from(rep.samples.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const Vec2 q = rep.samples[i];
    to[i] = reaches_forward(model, q, hs.loc).reached;
    const Route r = route_from_hub(model, hs, q);
    from[i] = r.found && r.gap <= kRec;
  }
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    if (!to[i]) rep.unreachable_to_hub.push_back(rep.samples[i]);
    if (!from[i]) rep.unreachable_from_hub.push_back(rep.samples[i]);
  }
  return rep;
}

}  // namespace filippov
