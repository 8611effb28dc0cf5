#pragma once

#include <algorithm>
#include <cmath>

#include "filippov/geometry.hpp"

namespace filippov {

inline double err_component(double e, double y0, double y1, double atol, double rtol) {
  return e / (atol + rtol * std::max(std::abs(y0), std::abs(y1)));
}

inline double err_norm(double e, double y0, double y1, double atol, double rtol) {
  return std::abs(err_component(e, y0, y1, atol, rtol));
}

inline double err_norm(Vec2 e, Vec2 y0, Vec2 y1, double atol, double rtol) {
  const double a = err_component(e.x, y0.x, y1.x, atol, rtol);
  const double b = err_component(e.y, y0.y, y1.y, atol, rtol);
  return std::sqrt(0.5 * (a * a + b * b));
}

/// One Dormand-Prince 5(4) step. Returns the 5th-order solution and writes
/// the embedded error estimate.
template <class State, class Rhs>
State dopri5_step(const Rhs& rhs, const State& y, double h, State& err) {
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  const State k1 = rhs(y);
  const State k2 = rhs(y + h * (a21 * k1));
  const State k3 = rhs(y + h * (a31 * k1 + a32 * k2));
  const State k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const State k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const State k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const State y1 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const State k7 = rhs(y1);
  err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return y1;
}

struct OdeOptions {
  double atol = 1e-12;
  double rtol = 1e-12;
  double h_min = 1e-12;
  double h_max = 0.05;
  double h_init = 1e-3;
};

/// Adaptive stepper state: proposes the next step from the last error.
struct StepControl {
  double h;
  explicit StepControl(double h0) : h(h0) {}
  // returns the factor for the next step from a normalised error
  static double factor(double err) {
    if (err == 0.0) return 5.0;
    return std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
  }
};

}  // namespace filippov
