#pragma once

#include <optional>
#include <string>
#include <vector>

#include "filippov/geometry.hpp"
#include "filippov/poly.hpp"

namespace filippov {

enum class ChartKind { VerticalLine, Circle, ExplicitParametric };

std::string to_string(ChartKind k);

/// Parametrization s -> sigma(s), s in [alpha, beta], of one connected
/// component of the switching curve inside K. The order of points along the
/// curve is the order of s.
struct SigmaChart {
  ChartKind kind = ChartKind::VerticalLine;
  double x0 = 0.0;               // VerticalLine: sigma(s) = (x0, s)
  Vec2 center{};                 // Circle: center + radius (cos s, sin s)
  double radius = 1.0;
  std::vector<double> px, py;    // ExplicitParametric: sum px[k] s^k, sum py[k] s^k
  double alpha = -1.0;
  double beta = 1.0;

  static SigmaChart vertical_line(double x0, double alpha, double beta);
  static SigmaChart circle(Vec2 center, double radius, double alpha, double beta);
  static SigmaChart parametric(std::vector<double> px, std::vector<double> py, double alpha,
                               double beta);

  Vec2 point(double s) const;
  Vec2 tangent(double s) const;  // d sigma / ds
  /// Parameter of the nearest chart point (Newton refinement for parametric).
  double project(Vec2 p) const;
  bool contains_param(double s, double slack = 0.0) const {
    return s >= alpha - slack && s <= beta + slack;
  }
  bool operator==(const SigmaChart&) const = default;
};

struct SigmaLoc {
  int chart = 0;
  double s = 0.0;
  bool operator==(const SigmaLoc&) const = default;
};

class SwitchingCurve {
 public:
  SwitchingCurve() = default;
  SwitchingCurve(Poly2 f, std::vector<SigmaChart> charts);

  const Poly2& f() const { return f_; }
  const Poly2& fx() const { return fx_; }
  const Poly2& fy() const { return fy_; }
  const std::vector<SigmaChart>& charts() const { return charts_; }
  const SigmaChart& chart(int k) const { return charts_.at(k); }
  int chart_count() const { return static_cast<int>(charts_.size()); }

  Vec2 gradient(Vec2 p) const { return {fx_(p), fy_(p)}; }
  Vec2 point(SigmaLoc loc) const { return chart(loc.chart).point(loc.s); }

  /// Chart and parameter of a point lying within `tol` of the curve.
  std::optional<SigmaLoc> locate(Vec2 p, double tol) const;

  /// Problems with the parametrization: |f(sigma(s))| above `on_sigma` or a
  /// vanishing gradient. Empty when consistent.
  std::vector<std::string> check(double on_sigma, int samples = 257) const;

  bool operator==(const SwitchingCurve& o) const {
    return f_ == o.f_ && charts_ == o.charts_;
  }

 private:
  Poly2 f_, fx_, fy_;
  std::vector<SigmaChart> charts_;
};

}  // namespace filippov
