#include <cmath>
#include <random>

#include "doctest.h"
#include "filippov/errors.hpp"
#include "filippov/models.hpp"
#include "filippov/sigma.hpp"
#include "oracles.hpp"

using namespace filippov;

namespace {

PiecewiseSystem line_system(PolyField X, PolyField Y, Box K = {-2, 2, -2, 2}) {
  return PiecewiseSystem(SwitchingCurve(Poly2::x(), {SigmaChart::vertical_line(0, K.ymin, K.ymax)}), X,
                         Y, K);
}

PolyField constant(double a, double b) { return {Poly2::constant(a), Poly2::constant(b)}; }

// side of f visited by the orbit of F through p for small |t| (both directions)
struct Excursion {
  int forward = 0, backward = 0;  // sign of f after +t and -t
};
Excursion excursion(const PiecewiseSystem& sys, const PolyField& F, Vec2 p, double t = 0.05) {
  auto rhs = [&](Vec2 q) { return oracle::eval_field(F, q); };
  auto neg = [&](Vec2 q) { return -oracle::eval_field(F, q); };
  const double a = sys.f(oracle::rk4(rhs, p, t, 2000)), b = sys.f(oracle::rk4(neg, p, t, 2000));
  return {(a > 0) - (a < 0), (b > 0) - (b < 0)};
}

}  // namespace

TEST_CASE("center-center partition, tangency and pseudo-equilibrium") {
  const PiecewiseSystem sys = linear_center_center();
  const SigmaAnalysis a = analyze(sys);
  REQUIRE(a.partition.intervals.size() == 2);
  CHECK(a.partition.intervals[0].kind == RegionKind::Sliding);
  CHECK(a.partition.intervals[1].kind == RegionKind::Escaping);
  CHECK(a.partition.intervals[0].hi == doctest::Approx(-1).epsilon(1e-9));

  REQUIRE(a.breakpoint_reports.size() == 1);
  const auto& r = a.breakpoint_reports[0];
  CHECK(distance(r.point, {0, -1}) <= 1e-8);
  CHECK(r.region == RegionKind::DoubleTangency);
  CHECK(r.orderX.n == 2);
  CHECK(r.orderY.n == 2);
  CHECK(r.visX == Visibility::Visible);
  CHECK(r.visY == Visibility::Invisible);
  CHECK(r.dbl == DoubleKind::Parabolic);

  REQUIRE(a.pseudo_eqs.size() == 1);
  CHECK(distance(a.pseudo_eqs[0].point, {0, 0}) <= 1e-8);
  CHECK(a.pseudo_eqs[0].stability == Stability::Attracting);
  CHECK(a.warnings.empty());
}

TEST_CASE("center-center with f = x: second Lie derivatives at the tangency") {
  const PiecewiseSystem sys = from_linear(center_center_spec());
  CHECK(sys.lie(Side::X, 2, {0, -1}) == doctest::Approx(-1.5));
  CHECK(sys.lie(Side::Y, 2, {0, -1}) == doctest::Approx(-1.0));
  CHECK(sys.lie(Side::X, 1, {0, -1}) == doctest::Approx(0).scale(1e-12));
  // the orientation flip swaps the sliding and escaping labels only
  const SigmaPartition p = partition_sigma(sys);
  REQUIRE(p.intervals.size() == 2);
  CHECK(p.intervals[0].kind == RegionKind::Escaping);
  CHECK(p.intervals[1].kind == RegionKind::Sliding);
}

TEST_CASE("Filippov field closed forms") {
  SUBCASE("center-center: (0, -y/4)") {
    const PiecewiseSystem sys = linear_center_center();
    for (double y : {-6.5, -3.0, -1.5, -0.999, 0.0, 0.7, 3.9}) {
      const Vec2 z = filippov_field(sys, {0, y});
      CHECK(std::abs(z.x) <= 1e-9);
      CHECK(std::abs(z.y + y / 4) <= 1e-9);
    }
  }
  SUBCASE("three-zone: (0, x) on the escaping and sliding segments") {
    const PiecewiseSystem sys = three_zone();
    for (int c = 0; c < 2; ++c) {
      const double x = c == 0 ? -1 : 1;
      for (double y : {-0.9, -0.5, -0.1}) {
        const Vec2 z = filippov_field(sys, {c, y});
        CHECK(std::abs(z.x) <= 1e-9);
        CHECK(std::abs(z.y - x) <= 1e-9);
      }
      CHECK_THROWS_AS(filippov_field(sys, {c, 0.5}), NotSlidingOrEscaping);
    }
  }
  SUBCASE("symmetric normal components cancel") {
    const double c = 0.37;
    const PiecewiseSystem sys = line_system(constant(-1, c), constant(1, c));
    const Vec2 z = filippov_field(sys, {0, 0.3});
    CHECK(z.x == doctest::Approx(0));
    CHECK(z.y == doctest::Approx(c));
  }
}

TEST_CASE("sliding field is tangent and a convex combination") {
  std::mt19937_64 rng(17);
  for (const PiecewiseSystem& sys : {linear_center_center(), three_zone(), relay_template()}) {
    const SigmaPartition part = partition_sigma(sys);
    for (const auto& iv : part.intervals) {
      if (iv.kind == RegionKind::Sewing) continue;
      std::uniform_real_distribution<double> U(iv.lo, iv.hi);
      for (int k = 0; k < 50; ++k) {
        const SigmaLoc loc{iv.chart, U(rng)};
        const Vec2 p = sys.curve().point(loc);
        const Vec2 z = filippov_field(sys, loc);
        CHECK(std::abs(dot(z, sys.curve().gradient(p))) <= 1e-9);
        const Vec2 X = sys.eval(Side::X, p), Y = sys.eval(Side::Y, p);
        const double Xf = sys.lie(Side::X, 1, p), Yf = sys.lie(Side::Y, 1, p);
        const double lam = Yf / (Yf - Xf);
        CHECK(lam > 0);
        CHECK(lam < 1);
        CHECK(distance(z, X * lam + Y * (1 - lam)) <= 1e-9 * (1 + norm(X) + norm(Y)));
      }
    }
  }
}

TEST_CASE("partition agrees with the orbit-hitting oracle") {
  std::mt19937_64 rng(23);
  for (const PiecewiseSystem& sys :
       {linear_center_center(), three_zone(), relay_template(), fold_fold_connection()}) {
    const SigmaPartition part = partition_sigma(sys);
    for (const auto& iv : part.intervals) {
      // keep clear of the breakpoints, where the pattern degenerates
      const double pad = 1e-3 * (iv.hi - iv.lo);
      std::uniform_real_distribution<double> U(iv.lo + pad, iv.hi - pad);
      for (int k = 0; k < 50; ++k) {
        const Vec2 p = sys.curve().point({iv.chart, U(rng)});
        const auto hit = oracle::orbit_hit_pattern(sys, p);
        const auto want = iv.kind == RegionKind::Sliding    ? oracle::Hit::Sliding
                          : iv.kind == RegionKind::Escaping ? oracle::Hit::Escaping
                                                            : oracle::Hit::Sewing;
        CHECK(hit == want);
      }
    }
  }
}

TEST_CASE("visibility agrees with the local orbit through the tangency") {
  const PiecewiseSystem sys = linear_center_center();
  const Vec2 t{0, -1};
  // X visible: its orbit stays on its own side (f > 0) on both time sides
  const auto ex = excursion(sys, sys.X(), t);
  CHECK(ex.forward == 1);
  CHECK(ex.backward == 1);
  // Y invisible: its orbit stays on the X side as well
  const auto ey = excursion(sys, sys.Y(), t);
  CHECK(ey.forward == 1);
  CHECK(ey.backward == 1);
}

TEST_CASE("double-tangency taxonomy over fold-fold linear examples") {
  // X = (kx (y - 0.2)^nx, mx), Y = (ky (y - 0.2)^ny, my), f = x: both fields
  // are tangent at (0, 0.2) with order nx + 1 and ny + 1.
  int checked = 0;
  for (int nx : {1, 2})
    for (int ny : {1, 2})
      for (double kx : {-1.0, 1.0})
        for (double mx : {-1.0, 1.0})
          for (double ky : {-1.0, 1.0})
            for (double my : {-1.0, 1.0}) {
              auto pow_poly = [](int n) {
                Poly2 p = Poly2::constant(1);
                for (int k = 0; k < n; ++k) p = p * Poly2::affine(0, 1, -0.2);
                return p;
              };
              const PolyField X{pow_poly(nx).scaled(kx), Poly2::constant(mx)};
              const PolyField Y{pow_poly(ny).scaled(ky), Poly2::constant(my)};
              const PiecewiseSystem sys = line_system(X, Y);
              const SigmaPointReport r = classify_point(sys, {0, 0.2});
              CHECK(r.orderX.n == nx + 1);
              CHECK(r.orderY.n == ny + 1);
              // independent visibility from the orbit itself
              const Vec2 t{0, 0.2};
              const auto ex = excursion(sys, X, t), ey = excursion(sys, Y, t);
              const bool visEvenX = ex.forward == 1 && ex.backward == 1;
              const bool invX = ex.forward == -1 && ex.backward == -1;
              const bool visEvenY = ey.forward == -1 && ey.backward == -1;
              const bool invY = ey.forward == 1 && ey.backward == 1;
              DoubleKind want = DoubleKind::None;
              if (invX && invY) want = DoubleKind::Elliptic;
              else if (visEvenX && visEvenY) want = DoubleKind::Hyperbolic;
              else if (visEvenX != visEvenY) want = DoubleKind::Parabolic;
              CHECK(r.dbl == want);
              if (nx == 1) CHECK((r.visX == Visibility::Invisible) == invX);
              if (ny == 1) CHECK((r.visY == Visibility::Invisible) == invY);
              ++checked;
            }
  CHECK(checked == 64);
}

TEST_CASE("extend_filippov cases") {
  SUBCASE("flow-through at the center-center tangency") {
    const PiecewiseSystem sys = linear_center_center();
    const Extension e = extend_filippov(sys, {0, -1});
    CHECK(e.kind == Extension::Kind::RegularFlowThrough);
    CHECK(e.direction == 1);
    // oracle: the Filippov field just off the boundary on each side
    CHECK(filippov_field(sys, {0, -1 - 1e-4}).y > 0);
    CHECK(filippov_field(sys, {0, -1 + 1e-4}).y > 0);
  }
  SUBCASE("equilibrium of X on the boundary") {
    // X = (-y, y) vanishes at the origin, the lower end of the sliding set
    const PiecewiseSystem sys = line_system({Poly2::y().scaled(-1), Poly2::y()}, constant(1, 1));
    const Extension e = extend_filippov(sys, {0, 0});
    CHECK(e.kind == Extension::Kind::ExtendedPseudoEquilibrium);
  }
  SUBCASE("attracting point of the one-dimensional dynamics") {
    // fold-fold, sliding above and escaping below, sliding speed -y
    const PolyField X{Poly2::y().scaled(-1), Poly2::affine(0, -1, -1)};
    const PolyField Y{Poly2::y(), Poly2::affine(0, -1, 1)};
    const PiecewiseSystem sys = line_system(X, Y);
    const Extension e = extend_filippov(sys, {0, 0});
    CHECK(e.kind == Extension::Kind::NotExtendable);
  }
}

TEST_CASE("pseudo-equilibria") {
  CHECK(pseudo_equilibria(three_zone(), partition_sigma(three_zone())).empty());
  const PiecewiseSystem flat = line_system(constant(-1, 0), constant(1, 0));
  CHECK_THROWS_AS(pseudo_equilibria(flat, partition_sigma(flat)), HypothesisViolation);
}

TEST_CASE("departs follows visibility") {
  const PiecewiseSystem sys = linear_center_center();
  const Tolerances tol;
  CHECK(departs(sys, Side::X, {0, -1}, tol));
  CHECK_FALSE(departs(sys, Side::Y, {0, -1}, tol));
  // escaping segment: both leave; sliding segment: neither does
  CHECK(departs(sys, Side::X, {0, 1}, tol));
  CHECK(departs(sys, Side::Y, {0, 1}, tol));
  CHECK_FALSE(departs(sys, Side::X, {0, -3}, tol));
  CHECK_FALSE(departs(sys, Side::Y, {0, -3}, tol));
}
