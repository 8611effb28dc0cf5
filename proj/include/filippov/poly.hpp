#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "filippov/geometry.hpp"

namespace filippov {

using Rational = boost::multiprecision::cpp_rational;

template <class T>
double to_double(const T& v) {
  return static_cast<double>(v);
}

template <class T>
struct Monomial {
  int i = 0;  // power of x
  int j = 0;  // power of y
  T c{};
  bool operator==(const Monomial&) const = default;
};

/// Bivariate polynomial sum c_ij x^i y^j in canonical form: terms sorted by
/// (i, j), no repeated exponents, no zero coefficients.
template <class T>
class BasicPoly2 {
 public:
  using Coeff = T;

  BasicPoly2() = default;
  explicit BasicPoly2(const std::vector<Monomial<T>>& terms) {
    std::map<std::pair<int, int>, T> acc;
    for (const auto& t : terms) acc[{t.i, t.j}] += t.c;
    assign(acc);
  }

  static BasicPoly2 constant(const T& c) { return BasicPoly2({{0, 0, c}}); }
  static BasicPoly2 x() { return BasicPoly2({{1, 0, T(1)}}); }
  static BasicPoly2 y() { return BasicPoly2({{0, 1, T(1)}}); }
  static BasicPoly2 monomial(int i, int j, const T& c) { return BasicPoly2({{i, j, c}}); }
  /// a*x + b*y + c
  static BasicPoly2 affine(const T& a, const T& b, const T& c) {
    return BasicPoly2({{1, 0, a}, {0, 1, b}, {0, 0, c}});
  }

  const std::vector<Monomial<T>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.i + t.j);
    return d;
  }
  T coeff(int i, int j) const {
    for (const auto& t : terms_)
      if (t.i == i && t.j == j) return t.c;
    return T(0);
  }

  BasicPoly2 dx() const {
    std::vector<Monomial<T>> out;
    for (const auto& t : terms_)
      if (t.i > 0) out.push_back({t.i - 1, t.j, t.c * T(t.i)});
    return BasicPoly2(out);
  }
  BasicPoly2 dy() const {
    std::vector<Monomial<T>> out;
    for (const auto& t : terms_)
      if (t.j > 0) out.push_back({t.i, t.j - 1, t.c * T(t.j)});
    return BasicPoly2(out);
  }

  template <class U>
  U operator()(const U& xv, const U& yv) const {
    if (terms_.empty()) return U(0);
    const int d = degree();
    std::vector<U> px(d + 1, U(1)), py(d + 1, U(1));
    for (int k = 1; k <= d; ++k) {
      px[k] = px[k - 1] * xv;
      py[k] = py[k - 1] * yv;
    }
    U acc(0);
    for (const auto& t : terms_) acc += coeff_as<U>(t.c) * px[t.i] * py[t.j];
    return acc;
  }
  double operator()(Vec2 p) const { return (*this)(p.x, p.y); }

  BasicPoly2 operator+(const BasicPoly2& o) const { return combine(o, T(1)); }
  BasicPoly2 operator-(const BasicPoly2& o) const { return combine(o, T(-1)); }
  BasicPoly2 operator-() const { return scaled(T(-1)); }
  BasicPoly2 operator*(const BasicPoly2& o) const {
    std::map<std::pair<int, int>, T> acc;
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) acc[{a.i + b.i, a.j + b.j}] += a.c * b.c;
    BasicPoly2 r;
    r.assign(acc);
    return r;
  }
  BasicPoly2 scaled(const T& k) const {
    std::vector<Monomial<T>> out;
    for (const auto& t : terms_) out.push_back({t.i, t.j, t.c * k});
    return BasicPoly2(out);
  }
  bool operator==(const BasicPoly2& o) const { return terms_ == o.terms_; }

  template <class U>
  BasicPoly2<U> cast() const {
    std::vector<Monomial<U>> out;
    for (const auto& t : terms_) out.push_back({t.i, t.j, static_cast<U>(t.c)});
    return BasicPoly2<U>(out);
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
      if (!first) os << " + ";
      first = false;
      os << t.c;
      if (t.i > 0) os << "*x" << (t.i > 1 ? "^" + std::to_string(t.i) : "");
      if (t.j > 0) os << "*y" << (t.j > 1 ? "^" + std::to_string(t.j) : "");
    }
    return os.str();
  }

 private:
  template <class U>
  static U coeff_as(const T& c) {
    if constexpr (std::is_same_v<U, T>) {
      return c;
    } else if constexpr (std::is_same_v<U, double>) {
      return to_double(c);
    } else {
      return U(to_double(c));
    }
  }

  void assign(const std::map<std::pair<int, int>, T>& acc) {
    terms_.clear();
    for (const auto& [k, c] : acc)
      if (c != T(0)) terms_.push_back({k.first, k.second, c});
  }

  BasicPoly2 combine(const BasicPoly2& o, const T& sign) const {
    std::map<std::pair<int, int>, T> acc;
    for (const auto& t : terms_) acc[{t.i, t.j}] += t.c;
    for (const auto& t : o.terms_) acc[{t.i, t.j}] += sign * t.c;
    BasicPoly2 r;
    r.assign(acc);
    return r;
  }

  std::vector<Monomial<T>> terms_;
};

template <class T>
BasicPoly2<T> operator*(const T& k, const BasicPoly2<T>& p) {
  return p.scaled(k);
}

using Poly2 = BasicPoly2<double>;
using RationalPoly2 = BasicPoly2<Rational>;

/// Planar polynomial vector field (u, v).
template <class T>
struct BasicPolyField {
  BasicPoly2<T> u;
  BasicPoly2<T> v;

  Vec2 operator()(Vec2 p) const { return {u(p.x, p.y), v(p.x, p.y)}; }
  bool is_zero() const { return u.is_zero() && v.is_zero(); }
  BasicPolyField operator-() const { return {-u, -v}; }
  bool operator==(const BasicPolyField&) const = default;

  template <class U>
  BasicPolyField<U> cast() const {
    return {u.template cast<U>(), v.template cast<U>()};
  }
};

using PolyField = BasicPolyField<double>;
using RationalPolyField = BasicPolyField<Rational>;

/// One application of the field as a derivation: <field, grad g>.
template <class T>
BasicPoly2<T> lie_step(const BasicPolyField<T>& field, const BasicPoly2<T>& g) {
  return field.u * g.dx() + field.v * g.dy();
}

/// X^order.f with X^1.f = <X, grad f> and X^i.f = <grad X^{i-1}.f, X>.
template <class T>
BasicPoly2<T> lie_derivative(const BasicPolyField<T>& field, const BasicPoly2<T>& f,
                             int order) {
  BasicPoly2<T> g = f;
  for (int k = 0; k < order; ++k) g = lie_step(field, g);
  return g;
}

/// All Lie derivatives X^1.f .. X^max_order.f.
template <class T>
std::vector<BasicPoly2<T>> lie_tower(const BasicPolyField<T>& field, const BasicPoly2<T>& f,
                                     int max_order) {
  std::vector<BasicPoly2<T>> out;
  out.reserve(max_order);
  BasicPoly2<T> g = f;
  for (int k = 0; k < max_order; ++k) {
    g = lie_step(field, g);
    out.push_back(g);
  }
  return out;
}

/// Exact conversion of a double-precision polynomial into rationals.
inline RationalPoly2 to_rational(const Poly2& p) {
  std::vector<Monomial<Rational>> out;
  for (const auto& t : p.terms()) out.push_back({t.i, t.j, Rational(t.c)});
  return RationalPoly2(out);
}

inline RationalPolyField to_rational(const PolyField& f) {
  return {to_rational(f.u), to_rational(f.v)};
}

}  // namespace filippov
