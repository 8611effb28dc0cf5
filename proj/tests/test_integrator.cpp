#include <cmath>

#include "doctest.h"
#include "filippov/integrator.hpp"
#include "filippov/models.hpp"
#include "oracles.hpp"

using namespace filippov;

TEST_CASE("smooth flow matches the closed-form linear flow") {
  const Mat2 A{{{-0.1, -1}, {1, -0.1}}};
  const Vec2 b{0.3, -0.2};
  const PolyField F = linear_field(A, b);
  const Box K{-50, 50, -50, 50};
  for (double T : {0.5, 3.0, 10.0}) {
    const FlowResult r = integrate_flow(F, Poly2::x(), 1, K, {2, 1}, 0, T, false, Tolerances{});
    REQUIRE(r.stop == FlowStop::TimeUp);
    CHECK(r.t == doctest::Approx(T));
    CHECK(distance(r.p, oracle::affine_flow(A, b, {2, 1}, T)) <= 1e-8);
  }
}

TEST_CASE("backward integration inverts forward integration") {
  const PolyField F{Poly2::affine(0, 1, 0), Poly2({{1, 0, -1.0}, {3, 0, -0.3}})};  // Duffing-like
  const Box K{-10, 10, -10, 10};
  const FlowResult fw = integrate_flow(F, Poly2::x(), 1, K, {1, 0}, 0, 4, false, Tolerances{});
  const FlowResult bw = integrate_flow(F, Poly2::x(), 1, K, fw.p, 0, 4, false, Tolerances{}, -1);
  CHECK(distance(bw.p, {1, 0}) <= 1e-8);
}

TEST_CASE("switching events are located on the curve") {
  // X = rotation on f = x >= 0 leaves through x = 0
  const PolyField X{Poly2::y().scaled(-1), Poly2::x()};
  const FlowResult r =
      integrate_flow(X, Poly2::x(), 1, Box{-5, 5, -5, 5}, {1, 0}, 0, 10, true, Tolerances{});
  REQUIRE(r.stop == FlowStop::HitSigma);
  CHECK(std::abs(r.p.x) <= 1e-9);
  CHECK(r.p.y == doctest::Approx(1).epsilon(1e-8));
  CHECK(r.t == doctest::Approx(M_PI / 2).epsilon(1e-8));
}

TEST_CASE("leaving K stops the flow") {
  const PolyField X{Poly2::constant(1), Poly2::constant(0)};
  const FlowResult r =
      integrate_flow(X, Poly2::x(), 1, Box{-1, 1, -1, 1}, {0.5, 0}, 0, 10, true, Tolerances{});
  CHECK(r.stop == FlowStop::ExitK);
  CHECK(r.p.x == doctest::Approx(1).epsilon(1e-8));
}

TEST_CASE("stay-sliding run reaches the pseudo-equilibrium") {
  const HybridModel m(linear_center_center());
  const Trajectory tr = simulate(m, Start{{2, 0}}, 500, Policy::stay_sliding());
  CHECK(tr.terminal.kind == EventKind::ReachPseudoEq);
  CHECK(distance(tr.terminal.point, {0, 0}) <= 1e-8);
  CHECK(check_trajectory(m, tr).empty());
  // the sliding arc follows y' = -y/4
  bool slid = false;
  for (const Arc& a : tr.arcs) {
    if (a.mode != Mode::Slide) continue;
    slid = true;
    const double y0 = a.start().y;
    for (const Sample& s : a.samples) {
      CHECK(std::abs(s.p.x) <= 1e-9);
      const double want = y0 * std::exp(-(s.t - a.t0) / 4);
      CHECK(std::abs(s.p.y - want) <= 1e-6 * std::abs(want) + 1e-7);
    }
  }
  CHECK(slid);
}

TEST_CASE("trajectories are continuous and legal") {
  const HybridModel m(linear_center_center());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const Trajectory tr = simulate(m, Start{{2, 0}}, 200, Policy::seeded_random(seed));
    CHECK(check_trajectory(m, tr).empty());
    for (std::size_t k = 1; k < tr.arcs.size(); ++k)
      CHECK(distance(tr.arcs[k - 1].end(), tr.arcs[k].start()) <= 1e-8);
    for (const auto& ev : tr.events)
      if (ev.kind == EventKind::HitSigma) CHECK(std::abs(m.system().f(ev.point)) <= 1e-9);
  }
}

TEST_CASE("simulation is deterministic for a fixed seed") {
  const HybridModel m(linear_center_center());
  const Trajectory a = simulate(m, Start{{2, 0}}, 300, Policy::seeded_random(9));
  const Trajectory b = simulate(m, Start{{2, 0}}, 300, Policy::seeded_random(9));
  REQUIRE(a.arcs.size() == b.arcs.size());
  for (std::size_t k = 0; k < a.arcs.size(); ++k) {
    CHECK(a.arcs[k].mode == b.arcs[k].mode);
    CHECK(a.arcs[k].end() == b.arcs[k].end());
  }
  REQUIRE(a.policy_log.size() == b.policy_log.size());
  for (std::size_t k = 0; k < a.policy_log.size(); ++k) CHECK(a.policy_log[k].detail == b.policy_log[k].detail);
}

TEST_CASE("policies") {
  CHECK(Policy::parse("always-x", 0).kind() == Policy::Kind::AlwaysX);
  CHECK(Policy::parse("random", 4).describe() == "random:4");
  CHECK(Policy::parse("X,S,Y", 0).kind() == Policy::Kind::Scripted);
}

TEST_CASE("always-x on the three-zone system crosses the strip") {
  const HybridModel m(three_zone());
  const Trajectory tr = simulate(m, Start{{-1, 0}}, 50, Policy::scripted("X"));
  CHECK(tr.terminal.kind == EventKind::TimeBudget);
  CHECK(check_trajectory(m, tr).empty());
  int x_arcs = 0;
  for (const Arc& a : tr.arcs) x_arcs += a.mode == Mode::FlowX;
  CHECK(x_arcs > 5);
}

TEST_CASE("relay runs never slide when crossing") {
  const HybridModel m(relay_template());
  const Trajectory tr = simulate(m, Start{{5, 0}}, 200, Policy::always_x());
  CHECK(check_trajectory(m, tr).empty());
  CHECK(tr.arcs.size() > 20);
}

TEST_CASE("branch tree enumerates both exits at the tangency") {
  const HybridModel m(linear_center_center());
  BranchOptions opt;
  opt.t_segment = 30;
  const BranchNode root = branch_tree(m, {2, 0}, 2, opt);
  CHECK(root.children.size() >= 2);
}
