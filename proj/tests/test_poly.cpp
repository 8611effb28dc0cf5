#include <random>

#include "doctest.h"
#include "filippov/poly.hpp"
#include "filippov/system.hpp"

using namespace filippov;

namespace {

Poly2 random_poly(std::mt19937_64& rng, int deg) {
  std::uniform_real_distribution<double> c(-2, 2);
  std::vector<Monomial<double>> t;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) t.push_back({i, j, c(rng)});
  return Poly2(t);
}

// small integer coefficients so rational arithmetic stays tiny
RationalPoly2 random_rpoly(std::mt19937_64& rng, int deg) {
  std::uniform_int_distribution<int> c(-5, 5);
  std::vector<Monomial<Rational>> t;
  for (int i = 0; i <= deg; ++i)
    for (int j = 0; i + j <= deg; ++j) t.push_back({i, j, Rational(c(rng), 1 + (i + j) % 3)});
  return RationalPoly2(t);
}

}  // namespace

TEST_CASE("canonical form merges and drops terms") {
  Poly2 p({{1, 0, 2.0}, {0, 1, 1.0}, {1, 0, -2.0}, {0, 0, 3.0}});
  REQUIRE(p.terms().size() == 2);
  CHECK(p.terms()[0].i == 0);
  CHECK(p.terms()[0].c == 3.0);
  CHECK(p.coeff(1, 0) == 0.0);
  CHECK(p.degree() == 1);
  CHECK((p - p).is_zero());
}

TEST_CASE("evaluation and products") {
  const Poly2 x = Poly2::x(), y = Poly2::y();
  const Poly2 p = x * x - y * Poly2::constant(3) + Poly2::constant(1);
  CHECK(p(2.0, 1.0) == doctest::Approx(2.0));
  CHECK((p * p)(0.5, -1.0) == doctest::Approx(p(0.5, -1.0) * p(0.5, -1.0)));
}

TEST_CASE("derivatives match central differences") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Poly2 p = random_poly(rng, 4);
    const double x = 0.3 * trial - 3, y = 0.7 - 0.1 * trial, h = 1e-5;
    CHECK(p.dx()(x, y) == doctest::Approx((p(x + h, y) - p(x - h, y)) / (2 * h)).epsilon(1e-6));
    CHECK(p.dy()(x, y) == doctest::Approx((p(x, y + h) - p(x, y - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("Lie derivative equals the derivative of f along the flow") {
  // X.f(p) = d/dt f(phi_t(p)) at t = 0; compare with a difference quotient
  // of an RK4 step taken from p
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const PolyField X{random_poly(rng, 2), random_poly(rng, 2)};
    const Poly2 f = random_poly(rng, 3);
    const Vec2 p{0.1 * trial - 1, 0.5};
    auto step = [&](double h) {
      auto F = [&](Vec2 q) { return X(q); };
      const Vec2 k1 = F(p), k2 = F(p + k1 * (h / 2)), k3 = F(p + k2 * (h / 2)), k4 = F(p + k3 * h);
      return p + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6);
    };
    const double h = 1e-4;
    const double fd = (f(step(h)) - f(step(-h))) / (2 * h);
    CHECK(lie_derivative(X, f, 1)(p) == doctest::Approx(fd).epsilon(1e-6));
    // second order: d2/dt2 f(phi_t)
    const double fd2 = (f(step(h)) - 2 * f(p) + f(step(-h))) / (h * h);
    CHECK(lie_derivative(X, f, 2)(p) == doctest::Approx(fd2).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("Leibniz rule holds exactly over the rationals") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const RationalPolyField X{random_rpoly(rng, 2), random_rpoly(rng, 2)};
    const RationalPoly2 g = random_rpoly(rng, 2), h = random_rpoly(rng, 3);
    CHECK(lie_step(X, g * h) == lie_step(X, g) * h + g * lie_step(X, h));
  }
}

TEST_CASE("Lie derivatives of the center-center example") {
  // X = (-y - 1, x) style centers: X.f for f = -x
  const Poly2 f = -Poly2::x();
  const PolyField X{Poly2::affine(-0.5, -1, -1), Poly2::affine(1, 0.5, 2)};
  const auto tower = lie_tower(X, f, 3);
  CHECK(tower[0] == Poly2::affine(0.5, 1, 1));
  // X^2.f = <X, grad(X.f)> = 0.5 u + v
  CHECK(tower[1] == Poly2::affine(0.75, 0, 1.5));
  CHECK(tower[1](0.0, -1.0) == 1.5);
}

TEST_CASE("rational conversion is exact") {
  const Poly2 p({{1, 2, 0.1}, {0, 0, -3.5}});
  const RationalPoly2 r = to_rational(p);
  CHECK(r.coeff(0, 0) == Rational(-7, 2));
  CHECK(static_cast<double>(r.coeff(1, 2)) == 0.1);
}
