#pragma once

#include "filippov/system.hpp"

namespace filippov {

/// Coefficients of the linear center-center example (tangencies of both
/// fields at (0,-1), centers at (-2,0) and (-1,0)).
LinearSpec center_center_spec();

/// The center-center pair with X on x <= 0 (f = -x), the orientation whose
/// escaping segment is y > -1 and whose X-tangency is visible.
PiecewiseSystem linear_center_center(Box K = {-5, 4, -7, 4});

/// Three-zone system: X = (-y-1, x) where x^2 >= 1, Y = (-2y, x) inside;
/// the curve is the two lines x = -1 and x = 1.
PiecewiseSystem three_zone(Box K = {-3, 3, -3, 3});

/// Relay feedback x' = A x + B sgn(C x) with a lightly damped oscillator.
PiecewiseSystem relay_template();
Mat2 relay_template_A();
Vec2 relay_template_B();
Vec2 relay_template_C();

/// Two visible folds joined by an X-arc and a Y-arc (point-symmetric focus
/// pair), with a pseudo-saddle at the origin between the folds.
PiecewiseSystem fold_fold_connection();
/// Fold of X at (0, a), a < 0; the Y fold is at (0, -a).
double fold_fold_a(const PiecewiseSystem& sys);

}  // namespace filippov
