#pragma once

#include <algorithm>
#include <cmath>

#include "filippov/poly.hpp"

namespace filippov {

/// Closed interval with outward rounding by one ulp per operation, enough to
/// keep the subdivision search conservative in double precision.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  constexpr Interval() = default;
  constexpr Interval(double v) : lo(v), hi(v) {}  // NOLINT: implicit by design
  constexpr Interval(double l, double h) : lo(l), hi(h) {}

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool strictly_inside(const Interval& o) const { return o.lo < lo && hi < o.hi; }

  static Interval widen(double l, double h) {
    return {std::nextafter(l, -INFINITY), std::nextafter(h, INFINITY)};
  }
  Interval operator+(const Interval& o) const { return widen(lo + o.lo, hi + o.hi); }
  Interval operator-(const Interval& o) const { return widen(lo - o.hi, hi - o.lo); }
  Interval operator-() const { return {-hi, -lo}; }
  Interval operator*(const Interval& o) const {
    const double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return widen(std::min({a, b, c, d}), std::max({a, b, c, d}));
  }
  Interval& operator+=(const Interval& o) { return *this = *this + o; }
};

/// Natural interval extension of p over the box X x Y.
inline Interval eval(const Poly2& p, const Interval& X, const Interval& Y) {
  return p(X, Y);
}

}  // namespace filippov
