#include "filippov/roots.hpp"

#include <algorithm>
#include <cmath>

namespace filippov {

double bisect_root(const std::function<double(double)>& h, double lo, double hi,
                   double root_tol) {
  double flo = h(lo);
  if (flo == 0.0) return lo;
  for (int it = 0; it < 200 && hi - lo > root_tol; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    const double fm = h(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (flo > 0)) {
      lo = m;
      flo = fm;
    } else {
      hi = m;
    }
  }
  return 0.5 * (lo + hi);
}

ScalarRoots scalar_roots(const std::function<double(double)>& h,
                         const std::function<double(double)>& dh, double lo, double hi,
                         double zero_tol, double root_tol, int grid) {
  ScalarRoots out;
  std::vector<double> S(grid + 1), H(grid + 1);
  double hmax = 0.0;
  for (int k = 0; k <= grid; ++k) {
    S[k] = lo + (hi - lo) * k / grid;
    H[k] = h(S[k]);
    hmax = std::max(hmax, std::abs(H[k]));
  }
  if (hmax <= zero_tol) {
    out.non_isolated = true;
    return out;
  }
  const double fine = std::min(root_tol, 1e-14 * std::max(1.0, std::abs(hi - lo)));
  std::vector<double> r;
  for (int k = 0; k <= grid; ++k) {
    if (H[k] == 0.0) {
      r.push_back(S[k]);
      continue;
    }
    if (k < grid && H[k + 1] != 0.0 && (H[k] > 0) != (H[k + 1] > 0))
      r.push_back(bisect_root(h, S[k], S[k + 1], fine));
    if (k > 0 && k < grid && std::abs(H[k]) <= std::abs(H[k - 1]) &&
        std::abs(H[k]) <= std::abs(H[k + 1]) && (H[k - 1] > 0) == (H[k] > 0) &&
        (H[k] > 0) == (H[k + 1] > 0)) {
      const double d0 = dh(S[k - 1]), d1 = dh(S[k + 1]);
      if ((d0 > 0) != (d1 > 0)) {
        const double s = bisect_root(dh, S[k - 1], S[k + 1], fine);
        if (std::abs(h(s)) <= zero_tol) r.push_back(s);
      }
    }
  }
  std::sort(r.begin(), r.end());
  const double merge = std::max(1e-9, 100.0 * root_tol) * std::max(1.0, hi - lo);
  for (double s : r)
    if (out.roots.empty() || s - out.roots.back() > merge) out.roots.push_back(s);
  return out;
}

}  // namespace filippov
