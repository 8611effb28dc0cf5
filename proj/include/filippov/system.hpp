#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "filippov/curve.hpp"
#include "filippov/geometry.hpp"
#include "filippov/poly.hpp"
#include "filippov/tolerances.hpp"

namespace filippov {

enum class Side { X, Y };

inline const char* to_string(Side s) { return s == Side::X ? "X" : "Y"; }

/// Tangency predicted by a closed form (linear systems), kept for cross-checks.
struct PredictedTangency {
  Side side;
  Vec2 point;
};

/// Z = X on f >= 0, Z = Y on f <= 0, studied inside the box K.
class PiecewiseSystem {
 public:
  PiecewiseSystem() = default;
  PiecewiseSystem(SwitchingCurve curve, PolyField X, PolyField Y, Box K);

  const SwitchingCurve& curve() const { return curve_; }
  const PolyField& X() const { return X_; }
  const PolyField& Y() const { return Y_; }
  const PolyField& field(Side s) const { return s == Side::X ? X_ : Y_; }
  const Box& K() const { return K_; }

  double f(Vec2 p) const { return curve_.f()(p); }
  Vec2 eval(Side s, Vec2 p) const { return field(s)(p); }

  /// X^order.f for 1 <= order <= kMaxOrder, computed once at construction.
  const Poly2& lie(Side s, int order) const;
  double lie(Side s, int order, Vec2 p) const { return lie(s, order)(p); }

  std::vector<PredictedTangency> predicted_tangencies;
  std::string name;

  bool operator==(const PiecewiseSystem& o) const {
    return curve_ == o.curve_ && X_ == o.X_ && Y_ == o.Y_ && K_ == o.K_;
  }

  static constexpr int kMaxOrder = 12;

 private:
  SwitchingCurve curve_;
  PolyField X_, Y_;
  Box K_;
  std::vector<Poly2> lieX_, lieY_;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

/// X(p) = A+ p + b+ on x >= 0, Y(p) = A- p + b- on x <= 0.
struct LinearSpec {
  Mat2 Ap{};
  Mat2 Am{};
  Vec2 bp{};
  Vec2 bm{};
};

PiecewiseSystem from_linear(const LinearSpec& spec, Box K = {-5, 5, -5, 5});

/// Relay feedback x' = A x + B sgn(<C, x>).
PiecewiseSystem from_relay(const Mat2& A, Vec2 B, Vec2 C, Box K = {-5, 5, -5, 5});

PolyField linear_field(const Mat2& A, Vec2 b);

constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

struct ContactOrder {
  int n = kInfiniteOrder;  // kInfiniteOrder when every probed order vanished
  int sign = 0;
  bool infinite() const { return n == kInfiniteOrder; }
  bool operator==(const ContactOrder&) const = default;
};

/// First non-vanishing Lie derivative of f along `field` at p.
ContactOrder contact_order_at(const PolyField& field, const Poly2& f, Vec2 p, int max_order,
                              double tan);
/// Same, through the system cache.
ContactOrder contact_order_at(const PiecewiseSystem& sys, Side side, Vec2 p,
                              const Tolerances& tol);
/// Throws MaxOrderExceeded when all orders up to max_order vanish.
ContactOrder contact_order(const PolyField& field, const SwitchingCurve& curve, SigmaLoc loc,
                           int max_order, double tan);

/// Common zeros of the field inside K, certified by interval subdivision with
/// a Krawczyk uniqueness test. Throws NonIsolatedEquilibria on zero curves.
std::vector<Vec2> equilibria(const PolyField& field, const Box& K, double root = 1e-10);

/// Isolated zeros of s -> g(sigma(s)) on one chart.
struct ChartRoots {
  std::vector<double> roots;
  bool non_isolated = false;
};
ChartRoots chart_roots(const Poly2& g, const SigmaChart& chart, double tan, double root,
                       int grid = 4000);

/// Tangency parameters of one field on every chart.
std::vector<std::vector<double>> tangencies(const PiecewiseSystem& sys, Side side,
                                            const Tolerances& tol);

/// Hypothesis checks (finite equilibria, at most one tangency per field and
/// chart, parametrization consistency). Returns human-readable warnings.
std::vector<std::string> check_hypotheses(const PiecewiseSystem& sys, const Tolerances& tol);

}  // namespace filippov
