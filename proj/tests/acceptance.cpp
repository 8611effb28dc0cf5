// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "filippov/io.hpp"
#include "filippov/limitset.hpp"
#include "filippov/models.hpp"
#include "filippov/scenarios.hpp"
#include "filippov/sigma.hpp"
#include "oracles.hpp"

using namespace filippov;

#ifndef FILIPPOV_DATA_DIR
#define FILIPPOV_DATA_DIR "data"
#endif

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

int failures = 0;

void criterion(int n, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && s >= limit_s) {
    o.ok = false;
    o.detail += " [over the " + std::to_string(int(limit_s)) + " s limit]";
  }
  failures += !o.ok;
  std::printf("criterion %d: %s  %s  (%.2f s)\n", n, o.ok ? "PASS" : "FAIL", o.detail.c_str(), s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// f = x, X and Y tangent to x = 0 at the same point (0, y0) with first Lie
// derivatives of equal sign elsewhere: the whole line is sewing.
PiecewiseSystem random_crossing(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1, 1), R(0.5, 2), D(-0.2, 0.2);
  const double y0 = U(rng);
  auto make = [&] {
    Mat2 A{{{D(rng), R(rng)}, {-R(rng), D(rng)}}};
    const Vec2 b{-A[0][1] * y0, U(rng)};
    return linear_field(A, b);
  };
  const PolyField X = make(), Y = make();
  const Box K{-5, 5, -5, 5};
  return PiecewiseSystem(SwitchingCurve(Poly2::x(), {SigmaChart::vertical_line(0, K.ymin, K.ymax)}), X, Y, K);
}

struct SweepResult {
  double max_f = 0, max_gap = 0, max_back = 0;
  std::size_t events = 0, arcs = 0;
  std::string violation;
};

SweepResult check_random_system(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const PiecewiseSystem sys = random_crossing(rng);
  std::uniform_real_distribution<double> px(0.2, 2), py(-2, 2);
  const HybridModel m(sys);
  const Trajectory tr = simulate(m, Start{{px(rng), py(rng)}}, 40, Policy::always_x());
  SweepResult r;
  for (const auto& ev : tr.events)
    if (ev.kind == EventKind::HitSigma) {
      r.max_f = std::max(r.max_f, std::abs(sys.f(ev.point)));
      ++r.events;
    }
  for (std::size_t k = 1; k < tr.arcs.size(); ++k)
    r.max_gap = std::max(r.max_gap, distance(tr.arcs[k - 1].end(), tr.arcs[k].start()));
  const Box wide{-50, 50, -50, 50};
  for (const Arc& a : tr.arcs) {
    if (a.mode == Mode::Slide || a.t1 <= a.t0) continue;
    const Side side = a.mode == Mode::FlowX ? Side::X : Side::Y;
    const FlowResult b =
        integrate_flow(sys.field(side), sys.curve().f(), 1, wide, a.end(), 0, a.t1 - a.t0, false, m.tol(), -1);
    r.max_back = std::max(r.max_back, distance(b.p, a.start()));
    ++r.arcs;
  }
  return r;
}

}  // namespace

int main() {
  const std::string data = FILIPPOV_DATA_DIR;

  criterion(1, 1.0, [] {
    Outcome o;
    double worst = 0;
    int n = 0;
    for (int i = 0; i <= 1000 && n < 1000; ++i) {
      const double y = -3 + 6.0 * i / 1000;
      if (std::abs(y + 1) < 1e-12) continue;
      for (const PiecewiseSystem& sys : {linear_center_center(), from_linear(center_center_spec())}) {
        const Vec2 z = filippov_field(sys, {0, y});
        worst = std::max({worst, std::abs(z.x), std::abs(z.y + y / 4)});
      }
      ++n;
    }
    o.ok = n == 1000 && worst <= 1e-9;
    o.detail = std::to_string(n) + " points, max error " + fmt("%.2e", worst);
    return o;
  });

  criterion(2, 1.0, [] {
    Outcome o;
    const PiecewiseSystem sys = three_zone();
    const SigmaPartition part = partition_sigma(sys);
    double worst = 0;
    int n = 0;
    for (const auto& iv : part.intervals) {
      if (iv.kind == RegionKind::Sewing) continue;
      const double x = sys.curve().point({iv.chart, 0.5 * (iv.lo + iv.hi)}).x;
      for (int i = 1; i < 500; ++i) {
        const double s = iv.lo + (iv.hi - iv.lo) * i / 500;
        if (std::abs(s) >= 1) continue;
        const Vec2 z = filippov_field(sys, {iv.chart, s});
        worst = std::max({worst, std::abs(z.x), std::abs(z.y - x)});
        ++n;
      }
    }
    o.ok = n > 0 && worst <= 1e-9;
    o.detail = std::to_string(n) + " points on the escaping and sliding segments, max error " + fmt("%.2e", worst);
    return o;
  });

  criterion(3, 0, [] {
    Outcome o;
    for (const PiecewiseSystem& sys : {linear_center_center(), from_linear(center_center_spec())}) {
      const SigmaAnalysis a = analyze(sys);
      int doubles = 0;
      for (const auto& r : a.breakpoint_reports)
        if (r.region == RegionKind::DoubleTangency) {
          ++doubles;
          o.ok = o.ok && distance(r.point, {0, -1}) <= 1e-8 && r.orderX.n == 2 && r.orderY.n == 2;
        }
      o.ok = o.ok && doubles == 1 && a.pseudo_eqs.size() == 1 &&
             distance(a.pseudo_eqs[0].point, {0, 0}) <= 1e-8;
      if (!a.pseudo_eqs.empty())
        o.detail = "tangency (0,-1) order 2/2, pseudo-equilibrium error " +
                   fmt("%.1e", distance(a.pseudo_eqs[0].point, {0, 0}));
    }
    o.detail += " (both orientations)";
    return o;
  });

  criterion(4, 0, [&] {
    Outcome o;
    std::mt19937_64 rng(23);
    int agree = 0, total = 0;
    for (const auto& name : scenario_names()) {
      const PiecewiseSystem sys = load_system(data + "/scenarios/" + name + ".json");
      for (const auto& iv : partition_sigma(sys).intervals) {
        const double pad = 1e-3 * (iv.hi - iv.lo);
        std::uniform_real_distribution<double> U(iv.lo + pad, iv.hi - pad);
        const auto want = iv.kind == RegionKind::Sliding    ? oracle::Hit::Sliding
                          : iv.kind == RegionKind::Escaping ? oracle::Hit::Escaping
                                                            : oracle::Hit::Sewing;
        for (int k = 0; k < 50; ++k) {
          agree += oracle::orbit_hit_pattern(sys, sys.curve().point({iv.chart, U(rng)})) == want;
          ++total;
        }
      }
    }
    o.ok = agree == total;
    o.detail = std::to_string(agree) + "/" + std::to_string(total) + " samples agree over " +
               std::to_string(scenario_names().size()) + " shipped scenarios";
    return o;
  });

  criterion(5, 1.0, [] {
    Outcome o;
    const LinearChaosReport r = linear_chaos_conditions(center_center_spec());
    o.ok = r.coincident && r.coincidence_value == "0" && r.opposite_a12;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> mag(1e-3, 1.0);
    int flipped = 0;
    for (int k = 0; k < 100; ++k) {
      LinearSpec s = center_center_spec();
      s.bp.x += (rng() & 1 ? 1 : -1) * mag(rng);
      flipped += !linear_chaos_conditions(s).coincident;
    }
    o.ok = o.ok && flipped == 100;
    o.detail = "(i) exact value " + r.coincidence_value + ", (iii) " + (r.opposite_a12 ? "true" : "false") +
               ", perturbations flipping (i): " + std::to_string(flipped) + "/100";
    return o;
  });

  criterion(6, 60.0, [] {
    Outcome o;
    const HybridModel m(linear_center_center());
    const LambdaRegion L = construct_lambda(m, -1.0);
    const Theorem2Report t = theorem2_probes(m, L, 20, 1);
    o.ok = L.max_gap <= 1e-6 && L.area() > 0.1 && t.a && t.c && t.d && t.coverage.fraction() >= 0.99;
    o.detail = "gap " + fmt("%.1e", L.max_gap) + ", area " + fmt("%.3f", L.area()) + ", (a) " +
               (t.a ? "ok" : "no") + " (c) " + (t.c ? "ok" : "no") + " (d) " + (t.d ? "ok" : "no") +
               ", coverage " + std::to_string(t.coverage.covered) + "/" + std::to_string(t.coverage.interior);
    return o;
  });

  criterion(7, 60.0, [] {
    Outcome o;
    const HybridModel tz(three_zone());
    const LambdaRegion R = circuit_region(tz, {0, 0.0}, "X", "Y");
    const MinimalityReport a = minimality_probe(tz, R, {-1, 0}, 20, 1);
    const HybridModel cc(linear_center_center());
    const LambdaRegion L = construct_lambda(cc, -1.0);
    const MinimalityReport b = minimality_probe(cc, L, {0, -1}, 20, 1);
    o.ok = a.pass() && b.pass();
    o.detail = std::string("three-zone hub (-1,0): ") + (a.pass() ? "pass" : "fail") +
               ", center-center hub (0,-1): " + (b.pass() ? "pass" : "fail") + ", 20 samples each";
    return o;
  });

  criterion(8, 0, [] {
    Outcome o;
    constexpr int kSystems = 200;
    std::vector<SweepResult> res(kSystems);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < kSystems; ++i) res[i] = check_random_system(1000 + i);
    SweepResult tot;
    for (const auto& r : res) {
      tot.max_f = std::max(tot.max_f, r.max_f);
      tot.max_gap = std::max(tot.max_gap, r.max_gap);
      tot.max_back = std::max(tot.max_back, r.max_back);
      tot.events += r.events;
      tot.arcs += r.arcs;
    }
    o.ok = tot.events > 0 && tot.max_f <= 1e-9 && tot.max_gap <= 1e-8 && tot.max_back <= 1e-6;
    o.detail = std::to_string(tot.events) + " events, max |f| " + fmt("%.1e", tot.max_f) + ", max gap " +
               fmt("%.1e", tot.max_gap) + ", " + std::to_string(tot.arcs) + " arcs re-integrated, max return " +
               fmt("%.1e", tot.max_back);
    return o;
  });

  criterion(9, 0, [] {
    Outcome o;
    int runs = 0;
    for (const auto& name : scenario_names()) {
      ScenarioOverrides ov;
      ov.minimality = false;
      const ScenarioResult a = run_scenario(name, ov), b = run_scenario(name, ov);
      ov.tol = Tolerances{}.scaled(0.5);
      const ScenarioResult h = run_scenario(name, ov);
      bool same = a.log == b.log && a.runs.size() == b.runs.size() && a.runs.size() == h.runs.size();
      for (std::size_t k = 0; same && k < a.runs.size(); ++k)
        same = a.runs[k].report.tag() == b.runs[k].report.tag() && a.runs[k].report.tag() == h.runs[k].report.tag();
      if (!same) o.detail += name + " differs; ";
      o.ok = o.ok && same && a.exit_code == 0 && h.exit_code == 0;
      runs += int(a.runs.size());
    }
    o.detail += std::to_string(runs) + " runs reproduce byte-identical logs and keep their verdicts at half tolerances";
    return o;
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
