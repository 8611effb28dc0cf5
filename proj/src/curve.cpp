#include "filippov/curve.hpp"

#include <cmath>
#include <limits>

#include "filippov/errors.hpp"

namespace filippov {

std::string to_string(ChartKind k) {
  switch (k) {
    case ChartKind::VerticalLine: return "vertical-line";
    case ChartKind::Circle: return "circle";
    case ChartKind::ExplicitParametric: return "explicit-parametric";
  }
  return "?";
}

SigmaChart SigmaChart::vertical_line(double x0, double alpha, double beta) {
  SigmaChart c;
  c.kind = ChartKind::VerticalLine;
  c.x0 = x0;
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

SigmaChart SigmaChart::circle(Vec2 center, double radius, double alpha, double beta) {
  SigmaChart c;
  c.kind = ChartKind::Circle;
  c.center = center;
  c.radius = radius;
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

SigmaChart SigmaChart::parametric(std::vector<double> px, std::vector<double> py,
                                  double alpha, double beta) {
  SigmaChart c;
  c.kind = ChartKind::ExplicitParametric;
  c.px = std::move(px);
  c.py = std::move(py);
  c.alpha = alpha;
  c.beta = beta;
  return c;
}

namespace {

double horner(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double horner_d(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) acc = acc * s + static_cast<double>(k) * c[k];
  return acc;
}

double horner_dd(const std::vector<double>& c, double s) {
  double acc = 0.0;
  for (std::size_t k = c.size(); k-- > 2;)
    acc = acc * s + static_cast<double>(k * (k - 1)) * c[k];
  return acc;
}

}  // namespace

Vec2 SigmaChart::point(double s) const {
  switch (kind) {
    case ChartKind::VerticalLine: return {x0, s};
    case ChartKind::Circle: return center + radius * Vec2{std::cos(s), std::sin(s)};
    case ChartKind::ExplicitParametric: return {horner(px, s), horner(py, s)};
  }
  return {};
}

Vec2 SigmaChart::tangent(double s) const {
  switch (kind) {
    case ChartKind::VerticalLine: return {0.0, 1.0};
    case ChartKind::Circle: return radius * Vec2{-std::sin(s), std::cos(s)};
    case ChartKind::ExplicitParametric: return {horner_d(px, s), horner_d(py, s)};
  }
  return {};
}

double SigmaChart::project(Vec2 p) const {
  switch (kind) {
    case ChartKind::VerticalLine: return p.y;
    case ChartKind::Circle: {
      double a = std::atan2(p.y - center.y, p.x - center.x);
      // pick the branch of the angle closest to the chart's range
      const double mid = 0.5 * (alpha + beta);
      while (a < mid - M_PI) a += 2.0 * M_PI;
      while (a > mid + M_PI) a -= 2.0 * M_PI;
      return a;
    }
    case ChartKind::ExplicitParametric: {
      // coarse scan then Newton on d/ds |sigma(s) - p|^2 / 2
      double best = alpha, best_d = std::numeric_limits<double>::infinity();
      const int n = 512;
      for (int k = 0; k <= n; ++k) {
        const double s = alpha + (beta - alpha) * k / n;
        const double d = distance(point(s), p);
        if (d < best_d) { best_d = d; best = s; }
      }
      double s = best;
      for (int it = 0; it < 50; ++it) {
        const Vec2 r = point(s) - p;
        const Vec2 t = tangent(s);
        const Vec2 tt{horner_dd(px, s), horner_dd(py, s)};
        const double g = dot(r, t);
        const double h = dot(t, t) + dot(r, tt);
        if (h <= 0.0) break;
        const double step = g / h;
        s -= step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(s))) break;
      }
      return s;
    }
  }
  return 0.0;
}

SwitchingCurve::SwitchingCurve(Poly2 f, std::vector<SigmaChart> charts)
    : f_(std::move(f)), charts_(std::move(charts)) {
  if (f_.is_zero()) throw DegenerateSwitching("switching function is identically zero");
  if (charts_.empty()) throw DegenerateSwitching("switching curve has no chart");
  fx_ = f_.dx();
  fy_ = f_.dy();
}

std::optional<SigmaLoc> SwitchingCurve::locate(Vec2 p, double tol) const {
  std::optional<SigmaLoc> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (int k = 0; k < chart_count(); ++k) {
    const auto& c = charts_[k];
    const double s = c.project(p);
    if (!c.contains_param(s, tol)) continue;
    const double d = distance(c.point(s), p);
    if (d <= tol && d < best_d) {
      best_d = d;
      best = SigmaLoc{k, s};
    }
  }
  return best;
}

std::vector<std::string> SwitchingCurve::check(double on_sigma, int samples) const {
  std::vector<std::string> issues;
  for (int k = 0; k < chart_count(); ++k) {
    const auto& c = charts_[k];
    if (!(c.alpha < c.beta)) {
      issues.push_back("chart " + std::to_string(k) + ": empty parameter range");
      continue;
    }
    for (int i = 0; i < samples; ++i) {
      const double s = c.alpha + (c.beta - c.alpha) * i / (samples - 1);
      const Vec2 p = c.point(s);
      const double fv = f_(p);
      if (std::abs(fv) > on_sigma * std::max(1.0, norm(gradient(p)))) {
        issues.push_back("chart " + std::to_string(k) + ": |f(sigma(" + std::to_string(s) +
                         "))| = " + std::to_string(std::abs(fv)));
        break;
      }
      if (norm(gradient(p)) < 1e-12) {
        issues.push_back("chart " + std::to_string(k) + ": grad f vanishes at s = " +
                         std::to_string(s));
        break;
      }
    }
  }
  return issues;
}

}  // namespace filippov
