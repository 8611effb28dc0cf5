#include <cmath>
#include <random>

#include "doctest.h"
#include "filippov/errors.hpp"
#include "filippov/limitset.hpp"
#include "filippov/models.hpp"

using namespace filippov;

namespace {

const Poly2 x = Poly2::x(), y = Poly2::y();
Poly2 c(double v) { return Poly2::constant(v); }

PiecewiseSystem on_line(double x0, PolyField X, PolyField Y, Box K) {
  return PiecewiseSystem(SwitchingCurve(x - c(x0), {SigmaChart::vertical_line(x0, K.ymin, K.ymax)}), X, Y,
                         K);
}

OmegaReport classify(const PiecewiseSystem& sys, Vec2 p0, double T, Policy pol) {
  const HybridModel m(sys);
  return classify_omega(m, simulate(m, Start{p0}, T, pol));
}

}  // namespace

// ---------------------------------------------------------------------------
// taxonomy fixtures, one per verdict

TEST_CASE("equilibrium of X") {
  const Poly2 u = x - c(3);
  const PiecewiseSystem sys = on_line(0, {-u - y, u - y}, {c(1), c(0)}, {-2, 6, -4, 4});
  const OmegaReport r = classify(sys, {3, 1}, 60, Policy::always_x());
  CHECK(r.tag() == "EquilibriumX");
  REQUIRE(r.evidence.limit_point);
  CHECK(distance(*r.evidence.limit_point, {3, 0}) <= 1e-6);
}

TEST_CASE("periodic orbit of X") {
  const Poly2 u = x - c(3), r2 = u * u + y * y;
  const PiecewiseSystem sys = on_line(0, {u - y - u * r2, u + y - y * r2}, {c(1), c(0)}, {-2, 6, -4, 4});
  const OmegaReport r = classify(sys, {3.5, 0}, 80, Policy::always_x());
  CHECK(r.tag() == "PeriodicOrbitX");
}

TEST_CASE("homoclinic graph of X") {
  // x' = y, y' = x - x^2 - y H with H = y^2/2 - x^2/2 + x^3/3: orbits inside
  // the loop spiral out onto the homoclinic orbit of the saddle at the origin
  const Poly2 H = y * y * c(0.5) - x * x * c(0.5) + x * x * x * c(1.0 / 3);
  const PiecewiseSystem sys = on_line(-1.5, {y, x - x * x - y * H}, {c(1), c(0)}, {-1.5, 2.5, -2, 2});
  const OmegaReport r = classify(sys, {0.5, 0}, 400, Policy::always_x());
  CHECK(r.tag() == "GraphXorY");
}

TEST_CASE("pseudo-equilibrium") {
  const OmegaReport r = classify(linear_center_center(), {2, 0}, 500, Policy::stay_sliding());
  CHECK(r.tag() == "PseudoEquilibrium");
  REQUIRE(r.evidence.limit_point);
  CHECK(distance(*r.evidence.limit_point, {0, 0}) <= 1e-8);
}

TEST_CASE("crossing pseudo-cycle of the relay") {
  const OmegaReport r = classify(relay_template(), {5, 0}, 400, Policy::always_x());
  CHECK(r.tag() == "PseudoCycle(Crossing)");
  CHECK(r.evidence.rehit <= 1e-6);
}

TEST_CASE("tangent pseudo-cycle through two folds") {
  const PiecewiseSystem sys = fold_fold_connection();
  const OmegaReport r = classify(sys, {0, fold_fold_a(sys)}, 200, Policy::always_x());
  CHECK(r.tag() == "PseudoCycle(Tangent)");
}

TEST_CASE("mild pseudo-cycles") {
  SUBCASE("type I: three-zone outer circuit") {
    const OmegaReport r = classify(three_zone(), {-1, 0}, 100, Policy::scripted("X"));
    CHECK(r.tag() == "MildPseudoCycle(I)");
    CHECK(r.evidence.period == 4);
    CHECK(r.evidence.invariance_fails);
    CHECK_FALSE(r.evidence.properness_fails);
  }
  SUBCASE("type II: figure eight through a hyperbolic double tangency") {
    const PiecewiseSystem sys = on_line(0, {-y, x - c(1)}, {-y, x + c(1)}, {-3, 3, -3, 3});
    const OmegaReport r = classify(sys, {0, 0}, 100, Policy::scripted("XY"));
    CHECK(r.tag() == "MildPseudoCycle(II)");
    CHECK_FALSE(r.evidence.invariance_fails);
    CHECK(r.evidence.properness_fails);
  }
  SUBCASE("type III: three-zone circuit alternating Y and X") {
    const OmegaReport r = classify(three_zone(), {-1, 0}, 100, Policy::scripted("Y,X"));
    CHECK(r.tag() == "MildPseudoCycle(III)");
    CHECK(r.evidence.period == 6);
  }
}

TEST_CASE("pseudo-graph through the pseudo-equilibrium") {
  const OmegaReport r = classify(linear_center_center(), {2, 0}, 1500, Policy::scripted("SX"));
  CHECK(r.tag() == "PseudoGraph");
  REQUIRE(r.evidence.vertex);
  CHECK(distance(*r.evidence.vertex, {0, 0}) <= 1e-6);
}

TEST_CASE("tangency type I and type II") {
  SUBCASE("elliptic double tangency between sewing segments") {
    const PiecewiseSystem sys = on_line(0, {-y, c(1)}, {y * c(-2), c(-1)}, {-2, 2, -2, 2});
    const OmegaReport r = classify(sys, {0, 0}, 10, Policy::always_x());
    CHECK(r.tag() == "TangencyTypeI");
  }
  SUBCASE("sliding into an invisible fold against a cusp") {
    const PiecewiseSystem sys = on_line(0, {y, c(-1)}, {y * y, c(1)}, {-2, 2, -2, 2});
    const OmegaReport r = classify(sys, {0, -0.5}, 10, Policy::stay_sliding());
    CHECK(r.tag() == "TangencyTypeII");
    REQUIRE(r.evidence.limit_point);
    CHECK(distance(*r.evidence.limit_point, {0, 0}) <= 1e-8);
  }
}

TEST_CASE("chaotic type III under random exits") {
  const HybridModel m(linear_center_center());
  const Trajectory tr = simulate(m, Start{{2, 0}}, 400, Policy::seeded_random(7));
  const OmegaReport r = classify_omega(m, tr);
  CHECK(r.tag() == "ChaoticTypeIII");
  CHECK(r.evidence.sliding_visits >= 3);
  CHECK(r.evidence.escaping_visits >= 3);
  REQUIRE(r.evidence.lambda);
  CHECK(r.evidence.lambda->area() > 0.1);
}

TEST_CASE("verdicts are exclusive and stable under seeds") {
  const HybridModel m(linear_center_center());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto a = classify_omega(m, simulate(m, Start{{2, 0}}, 400, Policy::seeded_random(seed)));
    const auto b = classify_omega(m, simulate(m, Start{{2, 0}}, 400, Policy::seeded_random(seed)));
    CHECK(a.tag() == b.tag());
    CHECK(a.tag() != "Undetermined");
  }
}

// ---------------------------------------------------------------------------
// return sequences

TEST_CASE("return sequence of the relay cycle") {
  const HybridModel m(relay_template());
  const Trajectory tr = simulate(m, Start{{5, 0}}, 100, Policy::always_x());
  const ReturnSequence rs = return_sequence(tr);
  REQUIRE(rs.events.size() > 4);
  for (const auto& e : rs.events) CHECK(std::abs(m.system().f(e.point)) <= 1e-9);
  CHECK(signature_token(rs.events[2]).find("Sewing") != std::string::npos);
}

// ---------------------------------------------------------------------------
// chaos

TEST_CASE("chaos conditions of the center-center system") {
  const ChaosConditions cc = chaos_conditions(HybridModel(linear_center_center()));
  CHECK(cc.double_tangency);
  CHECK(cc.parabolic_or_hyperbolic);
  CHECK(cc.no_crossing_in_K);
  CHECK(cc.two_sided_visits_witness);
  const ChaosConditions cz = chaos_conditions(HybridModel(three_zone()));
  CHECK_FALSE(cz.all());
}

TEST_CASE("linear chaos conditions are exact") {
  const LinearChaosReport r = linear_chaos_conditions(center_center_spec());
  CHECK(r.coincident);
  CHECK(r.coincidence_value == "0");
  CHECK(r.opposite_a12);
  CHECK(r.consistent);
  LinearSpec s = center_center_spec();
  s.bp.x += 1e-3;
  const LinearChaosReport p = linear_chaos_conditions(s);
  CHECK_FALSE(p.coincident);
  CHECK(p.consistent);
}

TEST_CASE("lambda region of the center-center system") {
  const HybridModel m(linear_center_center());
  const LambdaRegion L = construct_lambda(m, -1.0);
  CHECK(L.kind == LambdaRegion::Kind::Parabolic);
  CHECK(L.max_gap <= 1e-6);
  CHECK(L.area() > 0.1);
  CHECK(L.holes.size() == 1);
  for (Vec2 q : sample_region(L, 20, 1)) CHECK(L.contains(q));
  CHECK_FALSE(L.contains({3.5, 3.5}));
  CHECK(L.sigma_lo < -1);
  CHECK(L.sigma_hi > -1);
}

TEST_CASE("construct_lambda rejects an elliptic tangency") {
  const PiecewiseSystem sys = on_line(0, {-y, c(1)}, {y * c(-2), c(-1)}, {-2, 2, -2, 2});
  CHECK_THROWS_AS(construct_lambda(HybridModel(sys), 0.0), NotChaoticConfiguration);
}

TEST_CASE("polygon area and containment") {
  Polygon sq{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
  CHECK(sq.signed_area() == doctest::Approx(4));
  CHECK(sq.contains({1, 1}));
  CHECK_FALSE(sq.contains({3, 1}));
}

// ---------------------------------------------------------------------------
// probes

TEST_CASE("coverage kernel matches its serial reference") {
  const HybridModel m(linear_center_center());
  const LambdaRegion L = construct_lambda(m, -1.0);
  const CoverageGrid a = coverage_grid(m, L, 0.04), b = coverage_grid_serial(m, L, 0.04);
  CHECK(a.interior == b.interior);
  CHECK(a.covered == b.covered);
  CHECK(a.interior > 50);
  CHECK(a.fraction() >= 0.99);
}

TEST_CASE("probe points") {
  const HybridModel m(linear_center_center());
  const LambdaRegion L = construct_lambda(m, -1.0);
  CHECK_THROWS_AS(probe_point(m, L, {3.5, 3.5}), std::invalid_argument);
  const auto pts = sample_region(L, 4, 3);
  REQUIRE(pts.size() == 4);
  for (Vec2 q : pts) {
    const SampleProbe p = probe_point(m, L, q);
    CHECK(p.periodic);
    CHECK(p.recurrent);
  }
  const Route r = route_from_hub(m, m.site({0, -1}, 1e-9), pts[0]);
  CHECK(r.found);
  CHECK(r.gap <= 1e-6);
}

TEST_CASE("minimality on a crossing cycle") {
  const HybridModel m(relay_template());
  const Trajectory tr = simulate(m, Start{{5, 0}}, 400, Policy::always_x());
  const SigmaVisit hub = tr.visits.back();
  const LambdaRegion C = cycle_region(m, hub.loc, "X");
  CHECK(C.curve_only);
  const MinimalityReport r = minimality_probe(m, C, hub.point, 8, 2);
  CHECK(r.pass());
}

TEST_CASE("minimality of the three-zone circuit region") {
  const HybridModel m(three_zone());
  const LambdaRegion R = circuit_region(m, {0, 0.0}, "X", "Y");
  CHECK(R.area() > 1);
  const MinimalityReport r = minimality_probe(m, R, {-1, 0}, 10, 3);
  CHECK(r.pass());
}
