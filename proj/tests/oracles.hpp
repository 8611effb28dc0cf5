#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's integrator or Lie-derivative code.

#include <array>
#include <cmath>
#include <functional>
#include <random>

#include "filippov/system.hpp"

namespace oracle {

using filippov::Box;
using filippov::Mat2;
using filippov::PiecewiseSystem;
using filippov::PolyField;
using filippov::Vec2;

inline Vec2 eval_field(const PolyField& F, Vec2 p) { return {F.u(p.x, p.y), F.v(p.x, p.y)}; }

// classic fixed-step RK4
inline Vec2 rk4(const std::function<Vec2(Vec2)>& F, Vec2 p, double T, int steps) {
  const double h = T / steps;
  for (int k = 0; k < steps; ++k) {
    const Vec2 k1 = F(p);
    const Vec2 k2 = F(p + k1 * (h / 2));
    const Vec2 k3 = F(p + k2 * (h / 2));
    const Vec2 k4 = F(p + k3 * h);
    p = p + (k1 + 2.0 * k2 + 2.0 * k3 + k4) * (h / 6);
  }
  return p;
}

// exp(A t) by scaling and squaring of a long double Taylor series
inline std::array<std::array<long double, 2>, 2> expm(const Mat2& A, double t) {
  using M = std::array<std::array<long double, 2>, 2>;
  auto mul = [](const M& a, const M& b) {
    M c{};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
  };
  long double nrm = 0;
  for (auto& r : A)
    for (double v : r) nrm = std::max<long double>(nrm, std::fabs(v * t));
  int sq = 0;
  while (nrm > 0.25) {
    nrm /= 2;
    ++sq;
  }
  const long double scale = std::ldexp(1.0L, -sq) * t;
  M B{{{A[0][0] * scale, A[0][1] * scale}, {A[1][0] * scale, A[1][1] * scale}}};
  M E{{{1, 0}, {0, 1}}}, term = E;
  for (int k = 1; k < 30; ++k) {
    term = mul(term, B);
    for (auto& r : term)
      for (auto& v : r) v /= k;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) E[i][j] += term[i][j];
  }
  for (int k = 0; k < sq; ++k) E = mul(E, E);
  return E;
}

// x' = A x + b from x0 for time t (A invertible)
inline Vec2 affine_flow(const Mat2& A, Vec2 b, Vec2 x0, double t) {
  const long double det = (long double)A[0][0] * A[1][1] - (long double)A[0][1] * A[1][0];
  const long double sx = (A[1][1] * b.x - A[0][1] * b.y) / det;  // A^-1 b
  const long double sy = (-A[1][0] * b.x + A[0][0] * b.y) / det;
  const auto E = expm(A, t);
  const long double zx = x0.x + sx, zy = x0.y + sy;
  return {double(E[0][0] * zx + E[0][1] * zy - sx), double(E[1][0] * zx + E[1][1] * zy - sy)};
}

// Region label from the hit pattern of short orbits started just off the
// curve: a field "arrives" when its forward orbit from its own side reaches
// f = 0 within T. Sliding: both arrive. Escaping: neither does (both leave).
enum class Hit { Sewing, Sliding, Escaping, Unclear };

inline Hit orbit_hit_pattern(const PiecewiseSystem& sys, Vec2 p, double delta = 1e-7,
                             double T = 1e-3, int steps = 400) {
  const Vec2 g{sys.curve().fx()(p), sys.curve().fy()(p)};
  const Vec2 n = g / filippov::norm(g);
  auto arrives = [&](const PolyField& F, double sign) {
    Vec2 q = p + n * (sign * delta);
    const double h = T / steps;
    for (int k = 0; k < steps; ++k) {
      q = rk4([&](Vec2 z) { return eval_field(F, z); }, q, h, 1);
      if (sign * sys.f(q) <= 0) return true;
    }
    return false;
  };
  const bool x = arrives(sys.X(), +1), y = arrives(sys.Y(), -1);
  // both leave or both arrive; one in one out is crossing
  if (x && y) return Hit::Sliding;
  if (!x && !y) return Hit::Escaping;
  return Hit::Sewing;
}

}  // namespace oracle
