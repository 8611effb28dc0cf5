#include <cmath>

#include "filippov/errors.hpp"
#include "filippov/integrator.hpp"
#include "filippov/ode.hpp"

namespace filippov {

namespace {

// bisection for a sign change of g(phi(tau)) on [lo, hi]; `lo_pos` is the
// sign of g at lo
template <class G>
double bisect_tau(const G& g, double lo, double hi, bool lo_pos) {
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (lo + hi);
    if (m <= lo || m >= hi) break;
    if ((g(m) > 0) == lo_pos) lo = m;
    else hi = m;
  }
  return hi;
}

}  // namespace

FlowResult integrate_flow(const PolyField& field, const Poly2& f, int side_sign, const Box& K,
                          Vec2 p0, double t0, double t_max, bool stop_on_sigma,
                          const Tolerances& tol, int direction) {
  const Poly2 Ff = lie_step(field, f);
  const Poly2 FFf = lie_step(field, Ff);
  const double sgn = direction >= 0 ? 1.0 : -1.0;
  auto rhs = [&](Vec2 p) { return sgn * field(p); };
  auto g = [&](Vec2 q) { return side_sign * f(q); };
  auto d = [&](Vec2 q) { return sgn * side_sign * Ff(q); };

  FlowResult r;
  r.samples.push_back({t0, p0});
  if (!K.contains(p0, 1e-12)) {
    r.stop = FlowStop::ExitK;
    r.t = t0;
    r.p = p0;
    return r;
  }
  const OdeOptions o{tol.flow, tol.flow, 1e-12, 0.05, 1e-3};
  const double ignore = 1e-8;  // touches this close to the start are the start itself
  const double t_end = t0 + t_max;
  bool armed = g(p0) > 2 * tol.graze;
  double t = t0, h = o.h_init;
  Vec2 p = p0;

  auto finish = [&](FlowStop s, double te, Vec2 pe) {
    r.stop = s;
    r.t = te;
    r.p = pe;
    r.samples.push_back({te, pe});
    return r;
  };

  while (true) {
    if (t >= t_end) {
      r.stop = FlowStop::TimeUp;
      r.t = t;
      r.p = p;
      return r;
    }
    const double hh = std::min({h, o.h_max, t_end - t});
    Vec2 err;
    const Vec2 y1 = dopri5_step(rhs, p, hh, err);
    const double e = err_norm(err, p, y1, o.atol, o.rtol);
    if (!(e <= 1.0)) {
      h = hh * (std::isfinite(e) ? StepControl::factor(e) : 0.2);
      if (h < o.h_min)
        throw StiffnessFailure("step size underflow at t = " + std::to_string(t));
      continue;
    }
    auto phi = [&](double tau) {
      Vec2 er;
      return tau == 0.0 ? p : dopri5_step(rhs, p, tau, er);
    };

    if (stop_on_sigma) {
      const double g0 = g(p), g1 = g(y1), d0 = d(p), d1 = d(y1);
      std::optional<double> tc;
      if (g0 > 0 && g1 <= 0) {
        tc = bisect_tau([&](double tau) { return g(phi(tau)); }, 0.0, hh, true);
      } else if (armed && d0 < 0 && d1 > 0) {
        const double tm = bisect_tau([&](double tau) { return d(phi(tau)); }, 0.0, hh, false);
        const Vec2 m = phi(tm);
        const double gm = g(m);
        if (t + tm - t0 > ignore) {
          if (std::abs(gm) <= tol.graze) return finish(FlowStop::Graze, t + tm, m);
          if (gm < 0 && g0 > 0)
            tc = bisect_tau([&](double tau) { return g(phi(tau)); }, 0.0, tm, true);
        }
      }
      if (tc) {
        const Vec2 q = phi(*tc);
        const double v = d(q), w = side_sign * FFf(q);
        if (v < 0 && w > 0 && v * v / (2 * w) <= tol.graze) {
          // shallow dip below the curve: report the touch at the minimum
          auto psi = [&](double tau) {
            Vec2 er;
            return tau == 0.0 ? q : dopri5_step(rhs, q, tau, er);
          };
          double T = 2.0 * (-v / w) + 1e-14;
          for (int k = 0; k < 8 && d(psi(T)) <= 0; ++k) T *= 2;
          const double tm = bisect_tau([&](double tau) { return d(psi(tau)); }, 0.0, T, false);
          const double te = t + *tc + tm;
          if (te - t0 > ignore) return finish(FlowStop::Graze, te, psi(tm));
        } else if (K.contains(q, 1e-9)) {
          return finish(FlowStop::HitSigma, t + *tc, q);
        }
      }
    }

    if (!K.contains(y1)) {
      const double te = bisect_tau([&](double tau) { return K.margin(phi(tau)); }, 0.0, hh, true);
      return finish(FlowStop::ExitK, t + te, phi(te));
    }
    t += hh;
    p = y1;
    r.samples.push_back({t, p});
    if (g(p) > 2 * tol.graze) armed = true;
    h = hh * StepControl::factor(e);
  }
}

Arc integrate_arc(const PolyField& field, const Poly2& f, const Box& K, Vec2 start, double t_max,
                  bool stop_on_sigma, const Tolerances& tol) {
  int side = f(start) > 0 ? 1 : -1;
  if (std::abs(f(start)) <= tol.on_sigma) {
    const ContactOrder c = contact_order_at(field, f, start, tol.max_order, tol.tan);
    if (!c.infinite()) side = c.sign;
  }
  const FlowResult fr = integrate_flow(field, f, side, K, start, 0.0, t_max, stop_on_sigma, tol);
  Arc a;
  a.mode = side > 0 ? Mode::FlowX : Mode::FlowY;
  a.t0 = 0.0;
  a.t1 = fr.t;
  a.samples = fr.samples;
  a.entry = {EventKind::Start, 0.0, start, std::nullopt, 0, ""};
  EventKind k = EventKind::TimeBudget;
  if (fr.stop == FlowStop::HitSigma) k = EventKind::HitSigma;
  else if (fr.stop == FlowStop::Graze) k = EventKind::Graze;
  else if (fr.stop == FlowStop::ExitK) k = EventKind::ExitK;
  a.exit = {k, fr.t, fr.p, std::nullopt, 0, ""};
  return a;
}

}  // namespace filippov
