#pragma once

#include <functional>
#include <vector>

namespace filippov {

struct ScalarRoots {
  std::vector<double> roots;
  bool non_isolated = false;  // |h| <= zero_tol over the whole interval
};

/// Zeros of h on [lo, hi] from a uniform grid: sign changes refined by
/// bisection, and touching zeros found as sign changes of dh where |h| is
/// within zero_tol.
ScalarRoots scalar_roots(const std::function<double(double)>& h,
                         const std::function<double(double)>& dh, double lo, double hi,
                         double zero_tol, double root_tol, int grid);

/// Bisection on a bracketing interval, to width root_tol.
double bisect_root(const std::function<double(double)>& h, double lo, double hi,
                   double root_tol);

}  // namespace filippov
