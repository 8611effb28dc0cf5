#include "filippov/system.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "filippov/errors.hpp"
#include "filippov/interval.hpp"
#include "filippov/roots.hpp"

namespace filippov {

PiecewiseSystem::PiecewiseSystem(SwitchingCurve curve, PolyField X, PolyField Y, Box K)
    : curve_(std::move(curve)), X_(std::move(X)), Y_(std::move(Y)), K_(K) {
  lieX_ = lie_tower(X_, curve_.f(), kMaxOrder);
  lieY_ = lie_tower(Y_, curve_.f(), kMaxOrder);
}

const Poly2& PiecewiseSystem::lie(Side s, int order) const {
  if (order < 1 || order > kMaxOrder)
    throw std::out_of_range("Lie derivative order " + std::to_string(order));
  return (s == Side::X ? lieX_ : lieY_)[order - 1];
}

PolyField linear_field(const Mat2& A, Vec2 b) {
  return {Poly2::affine(A[0][0], A[0][1], b.x), Poly2::affine(A[1][0], A[1][1], b.y)};
}

namespace {

// Parameter range of the line t -> t*d through the origin inside K.
std::pair<double, double> clip_line(Vec2 d, const Box& K) {
  double lo = -INFINITY, hi = INFINITY;
  auto clip = [&](double dir, double mn, double mx) {
    if (std::abs(dir) < 1e-300) {
      if (mn > 0.0 || mx < 0.0) lo = INFINITY;  // origin outside the slab
      return;
    }
    double a = mn / dir, b = mx / dir;
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  };
  clip(d.x, K.xmin, K.xmax);
  clip(d.y, K.ymin, K.ymax);
  if (!(lo < hi)) throw DegenerateSwitching("switching line misses K");
  return {lo, hi};
}

}  // namespace

PiecewiseSystem from_linear(const LinearSpec& spec, Box K) {
  SwitchingCurve curve(Poly2::x(), {SigmaChart::vertical_line(0.0, K.ymin, K.ymax)});
  PiecewiseSystem sys(std::move(curve), linear_field(spec.Ap, spec.bp),
                      linear_field(spec.Am, spec.bm), K);
  // X^1.f = a11 x + a12 y + b1 vanishes on x = 0 at y = -b1/a12
  if (spec.Ap[0][1] != 0.0)
    sys.predicted_tangencies.push_back({Side::X, {0.0, -spec.bp.x / spec.Ap[0][1]}});
  if (spec.Am[0][1] != 0.0)
    sys.predicted_tangencies.push_back({Side::Y, {0.0, -spec.bm.x / spec.Am[0][1]}});
  return sys;
}

PiecewiseSystem from_relay(const Mat2& A, Vec2 B, Vec2 C, Box K) {
  const double n = norm(C);
  if (n == 0.0) throw DegenerateSwitching("relay output vector C is zero");
  const Vec2 d{C.y / n, -C.x / n};
  const auto [lo, hi] = clip_line(d, K);
  SwitchingCurve curve(Poly2::affine(C.x, C.y, 0.0),
                       {SigmaChart::parametric({0.0, d.x}, {0.0, d.y}, lo, hi)});
  return PiecewiseSystem(std::move(curve), linear_field(A, B), linear_field(A, -B), K);
}

ContactOrder contact_order_at(const PolyField& field, const Poly2& f, Vec2 p, int max_order,
                              double tan) {
  Poly2 g = f;
  for (int n = 1; n <= max_order; ++n) {
    g = lie_step(field, g);
    const double v = g(p);
    if (std::abs(v) > tan) return {n, v > 0 ? 1 : -1};
  }
  return {};
}

ContactOrder contact_order_at(const PiecewiseSystem& sys, Side side, Vec2 p,
                              const Tolerances& tol) {
  const int m = std::min(tol.max_order, PiecewiseSystem::kMaxOrder);
  for (int n = 1; n <= m; ++n) {
    const double v = sys.lie(side, n, p);
    if (std::abs(v) > tol.tan) return {n, v > 0 ? 1 : -1};
  }
  return {};
}

ContactOrder contact_order(const PolyField& field, const SwitchingCurve& curve, SigmaLoc loc,
                           int max_order, double tan) {
  const ContactOrder c = contact_order_at(field, curve.f(), curve.point(loc), max_order, tan);
  if (c.infinite())
    throw MaxOrderExceeded("all Lie derivatives up to order " + std::to_string(max_order) +
                           " vanish; possible infinite-order contact");
  return c;
}

// ---------------------------------------------------------------------------
// equilibria

namespace {

struct IBox {
  Interval x, y;
  double width() const { return std::max(x.width(), y.width()); }
};

struct Jac {
  Poly2 ux, uy, vx, vy;
};

bool newton(const PolyField& F, const Jac& J, Vec2& p, int iters = 60) {
  for (int k = 0; k < iters; ++k) {
    const Vec2 r = F(p);
    const double a = J.ux(p), b = J.uy(p), c = J.vx(p), d = J.vy(p);
    const double det = a * d - b * c;
    if (!std::isfinite(det) || std::abs(det) < 1e-300) return false;
    const Vec2 step{(d * r.x - b * r.y) / det, (-c * r.x + a * r.y) / det};
    p = p - step;
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    if (norm(step) <= 1e-15 * (1.0 + norm(p))) return true;
  }
  return norm(F(p)) < 1e-12;
}

enum class Krawczyk { NoRoot, Unique, Unknown };

Krawczyk krawczyk(const PolyField& F, const Jac& J, const IBox& B) {
  const double mx = B.x.mid(), my = B.y.mid();
  const double a = J.ux(mx, my), b = J.uy(mx, my), c = J.vx(mx, my), d = J.vy(mx, my);
  const double det = a * d - b * c;
  if (!std::isfinite(det) || std::abs(det) < 1e-14 * (std::abs(a * d) + std::abs(b * c) + 1e-300))
    return Krawczyk::Unknown;
  // C = inverse of the point Jacobian
  const double c11 = d / det, c12 = -b / det, c21 = -c / det, c22 = a / det;
  const Interval fu = F.u(Interval(mx), Interval(my));
  const Interval fv = F.v(Interval(mx), Interval(my));
  const Interval Jux = J.ux(B.x, B.y), Juy = J.uy(B.x, B.y);
  const Interval Jvx = J.vx(B.x, B.y), Jvy = J.vy(B.x, B.y);
  // M = I - C J(B)
  const Interval m11 = Interval(1.0) - (Interval(c11) * Jux + Interval(c12) * Jvx);
  const Interval m12 = Interval(0.0) - (Interval(c11) * Juy + Interval(c12) * Jvy);
  const Interval m21 = Interval(0.0) - (Interval(c21) * Jux + Interval(c22) * Jvx);
  const Interval m22 = Interval(1.0) - (Interval(c21) * Juy + Interval(c22) * Jvy);
  const Interval dx = B.x - Interval(mx), dy = B.y - Interval(my);
  const Interval kx = Interval(mx) - (Interval(c11) * fu + Interval(c12) * fv) + m11 * dx + m12 * dy;
  const Interval ky = Interval(my) - (Interval(c21) * fu + Interval(c22) * fv) + m21 * dx + m22 * dy;
  if (kx.hi < B.x.lo || kx.lo > B.x.hi || ky.hi < B.y.lo || ky.lo > B.y.hi) return Krawczyk::NoRoot;
  if (kx.strictly_inside(B.x) && ky.strictly_inside(B.y)) return Krawczyk::Unique;
  return Krawczyk::Unknown;
}

// Split slightly off centre so that roots at dyadic points (the origin, say)
// do not sit on box faces at every level.
constexpr double kSplit = 0.4937;

}  // namespace

std::vector<Vec2> equilibria(const PolyField& F, const Box& K, double root) {
  if (F.is_zero()) throw NonIsolatedEquilibria("field vanishes identically");
  const Jac J{F.u.dx(), F.u.dy(), F.v.dx(), F.v.dy()};
  const double min_w = std::max(root, 1e-13 * K.diameter());
  constexpr std::size_t kMaxLevelBoxes = 40000;

  std::vector<Vec2> found;
  std::vector<IBox> tiny;  // unresolved boxes at the resolution floor
  std::vector<IBox> level{{Interval(K.xmin, K.xmax), Interval(K.ymin, K.ymax)}};
  while (!level.empty()) {
    if (level.size() > kMaxLevelBoxes)
      throw NonIsolatedEquilibria("common zero set of the field is not finite in K");
    std::vector<IBox> next;
    for (const IBox& B : level) {
      const Interval U = F.u(B.x, B.y), V = F.v(B.x, B.y);
      if (!U.contains(0.0) || !V.contains(0.0)) continue;
      // inflate for the uniqueness test so boundary roots are still certified
      const double ex = 0.05 * B.x.width(), ey = 0.05 * B.y.width();
      const IBox Bi{Interval(B.x.lo - ex, B.x.hi + ex), Interval(B.y.lo - ey, B.y.hi + ey)};
      const Krawczyk k = krawczyk(F, J, Bi);
      if (k == Krawczyk::NoRoot) continue;
      if (k == Krawczyk::Unique) {
        Vec2 p{B.x.mid(), B.y.mid()};
        if (newton(F, J, p)) found.push_back(p);
        continue;
      }
      if (B.width() <= min_w) {
        tiny.push_back(B);
        continue;
      }
      if (B.x.width() >= B.y.width()) {
        const double s = B.x.lo + kSplit * B.x.width();
        next.push_back({Interval(B.x.lo, s), B.y});
        next.push_back({Interval(s, B.x.hi), B.y});
      } else {
        const double s = B.y.lo + kSplit * B.y.width();
        next.push_back({B.x, Interval(B.y.lo, s)});
        next.push_back({B.x, Interval(s, B.y.hi)});
      }
    }
    level = std::move(next);
  }

  // degenerate (singular) roots: cluster the floor boxes
  std::vector<int> owner(tiny.size(), -1);
  int clusters = 0;
  for (std::size_t i = 0; i < tiny.size(); ++i) {
    if (owner[i] >= 0) continue;
    owner[i] = clusters;
    std::vector<std::size_t> stack{i};
    double xlo = tiny[i].x.lo, xhi = tiny[i].x.hi, ylo = tiny[i].y.lo, yhi = tiny[i].y.hi;
    while (!stack.empty()) {
      const std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < tiny.size(); ++b) {
        if (owner[b] >= 0) continue;
        const double gap = std::max({tiny[b].x.lo - tiny[a].x.hi, tiny[a].x.lo - tiny[b].x.hi,
                                     tiny[b].y.lo - tiny[a].y.hi, tiny[a].y.lo - tiny[b].y.hi});
        if (gap <= min_w) {
          owner[b] = clusters;
          stack.push_back(b);
          xlo = std::min(xlo, tiny[b].x.lo);
          xhi = std::max(xhi, tiny[b].x.hi);
          ylo = std::min(ylo, tiny[b].y.lo);
          yhi = std::max(yhi, tiny[b].y.hi);
        }
      }
    }
    if (std::max(xhi - xlo, yhi - ylo) > 1e4 * min_w)
      throw NonIsolatedEquilibria("zero set of the field contains a curve segment near (" +
                                  std::to_string(0.5 * (xlo + xhi)) + ", " +
                                  std::to_string(0.5 * (ylo + yhi)) + ")");
    Vec2 c{0.5 * (xlo + xhi), 0.5 * (ylo + yhi)};
    Vec2 p = c;
    if (newton(F, J, p) && distance(p, c) < 1e3 * min_w) c = p;
    found.push_back(c);
    ++clusters;
  }

  std::vector<Vec2> out;
  const double merge = std::max(1e-8, 100.0 * min_w);
  for (const Vec2& p : found) {
    if (!K.contains(p, root)) continue;
    bool dup = false;
    for (const Vec2& q : out) dup = dup || distance(p, q) < merge;
    if (!dup) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](Vec2 a, Vec2 b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  return out;
}

// ---------------------------------------------------------------------------
// roots along a chart

ChartRoots chart_roots(const Poly2& g, const SigmaChart& chart, double tan, double root,
                       int grid) {
  const Poly2 gx = g.dx(), gy = g.dy();
  const ScalarRoots r = scalar_roots(
      [&](double s) { return g(chart.point(s)); },
      [&](double s) {
        const Vec2 p = chart.point(s);
        return dot(Vec2{gx(p), gy(p)}, chart.tangent(s));
      },
      chart.alpha, chart.beta, tan, root, grid);
  return {r.roots, r.non_isolated};
}

std::vector<std::vector<double>> tangencies(const PiecewiseSystem& sys, Side side,
                                            const Tolerances& tol) {
  std::vector<std::vector<double>> out;
  for (const auto& c : sys.curve().charts()) {
    const ChartRoots cr = chart_roots(sys.lie(side, 1), c, tol.tan, tol.root);
    if (cr.non_isolated)
      throw HypothesisViolation(std::string(to_string(side)) +
                                " is tangent to the switching curve along a whole chart");
    out.push_back(cr.roots);
  }
  return out;
}

std::vector<std::string> check_hypotheses(const PiecewiseSystem& sys, const Tolerances& tol) {
  std::vector<std::string> w = sys.curve().check(tol.on_sigma);
  for (Side s : {Side::X, Side::Y}) {
    try {
      (void)equilibria(sys.field(s), sys.K(), tol.root);
    } catch (const NonIsolatedEquilibria& e) {
      w.push_back(std::string(to_string(s)) + ": " + e.what());
    }
    try {
      const auto t = tangencies(sys, s, tol);
      for (std::size_t k = 0; k < t.size(); ++k)
        if (t[k].size() > 1)
          w.push_back(std::string(to_string(s)) + " has " + std::to_string(t[k].size()) +
                      " tangency points on chart " + std::to_string(k));
    } catch (const HypothesisViolation& e) {
      w.push_back(e.what());
    }
  }
  return w;
}

}  // namespace filippov
