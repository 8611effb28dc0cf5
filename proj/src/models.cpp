#include "filippov/models.hpp"

#include <cmath>

#include "filippov/errors.hpp"
#include "filippov/integrator.hpp"

namespace filippov {

LinearSpec center_center_spec() {
  LinearSpec s;
  s.Ap = {{{-0.5, -1.0}, {1.0, 0.5}}};
  s.bp = {-1.0, 2.0};
  s.Am = {{{1.0, 1.0}, {-2.0, -1.0}}};
  s.bm = {1.0, -2.0};
  return s;
}

PiecewiseSystem linear_center_center(Box K) {
  const LinearSpec s = center_center_spec();
  SwitchingCurve curve(-Poly2::x(), {SigmaChart::vertical_line(0.0, K.ymin, K.ymax)});
  PiecewiseSystem sys(std::move(curve), linear_field(s.Ap, s.bp), linear_field(s.Am, s.bm), K);
  sys.name = "linear-center-center";
  return sys;
}

PiecewiseSystem three_zone(Box K) {
  const Poly2 x = Poly2::x(), y = Poly2::y(), one = Poly2::constant(1.0);
  SwitchingCurve curve(x * x - one, {SigmaChart::vertical_line(-1.0, K.ymin, K.ymax),
                                     SigmaChart::vertical_line(1.0, K.ymin, K.ymax)});
  PolyField X{-y - one, x};
  PolyField Y{y.scaled(-2.0), x};
  PiecewiseSystem sys(std::move(curve), X, Y, K);
  sys.name = "three-zone";
  return sys;
}

Mat2 relay_template_A() { return {{{0.0, 1.0}, {-1.0, -0.2}}}; }
Vec2 relay_template_B() { return {0.0, 1.0}; }
Vec2 relay_template_C() { return {0.2, 1.0}; }

PiecewiseSystem relay_template() {
  PiecewiseSystem sys = from_relay(relay_template_A(), relay_template_B(), relay_template_C(),
                                   {-10, 10, -10, 10});
  sys.name = "relay-template";
  return sys;
}

namespace {

constexpr double kMu = 0.1, kOmega = 1.0, kE1 = 1.0;

PiecewiseSystem fold_fold_with(double e2) {
  const Mat2 A{{{kMu, -kOmega}, {kOmega, kMu}}};
  // X = A (p - e), Y(p) = -X(-p) = A p + A e
  const Vec2 Ae{kMu * kE1 - kOmega * e2, kOmega * kE1 + kMu * e2};
  const Box K{-6, 6, -6, 6};
  SwitchingCurve curve(Poly2::x(), {SigmaChart::vertical_line(0.0, K.ymin, K.ymax)});
  return PiecewiseSystem(std::move(curve), linear_field(A, -Ae), linear_field(A, Ae), K);
}

double fold_of(double e2) { return e2 - kMu * kE1 / kOmega; }

// landing height of the X-orbit leaving the X fold, plus the fold height
double shot(double e2) {
  const PiecewiseSystem sys = fold_fold_with(e2);
  Tolerances tol;
  tol.flow = 1e-13;
  const Vec2 start{0.0, fold_of(e2)};
  const FlowResult r =
      integrate_flow(sys.X(), sys.curve().f(), 1, sys.K(), start, 0.0, 50.0, true, tol);
  if (r.stop != FlowStop::HitSigma) throw Error("fold-fold shot did not return to the curve");
  return r.p.y + fold_of(e2);
}

}  // namespace

PiecewiseSystem fold_fold_connection() {
  double lo = -1.5, hi = 0.0;
  double flo = shot(lo);
  for (int it = 0; it < 100 && hi - lo > 1e-15; ++it) {
    const double m = 0.5 * (lo + hi);
    const double fm = shot(m);
    if ((fm > 0) == (flo > 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  PiecewiseSystem sys = fold_fold_with(0.5 * (lo + hi));
  sys.name = "fold-fold-connection";
  return sys;
}

double fold_fold_a(const PiecewiseSystem& sys) {
  // X^1.f = X_1 is affine; its zero on x = 0
  const Poly2& u = sys.X().u;
  return -u.coeff(0, 0) / u.coeff(0, 1);
}

}  // namespace filippov
