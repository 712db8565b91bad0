#ifndef MHDSTAB_ODE_HPP
#define MHDSTAB_ODE_HPP

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhdstab {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  double h_init = 1e-2;
  double h_max = 0.0;  // 0 means unbounded
  long max_steps = 2'000'000;
};

struct IntegrationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Adaptive Dormand-Prince 5(4) over a fixed-size Eigen state.  The observer
/// is called after every accepted step as observer(x, y) and may modify y in
/// place (used for re-orthonormalization and early-exit checks); it returns
/// false to stop the integration at the current x.
template <class State, class Rhs, class Observer>
double ode45(Rhs&& f, State& y, double x0, double x1, const OdeOptions& opt,
             Observer&& observer) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // embedded 4th-order weights
  static constexpr double e1 = 5179.0 / 57600, e3 = 7571.0 / 16695,
                          e4 = 393.0 / 640, e5 = -92097.0 / 339200,
                          e6 = 187.0 / 2100, e7 = 1.0 / 40;

  const double dir = (x1 >= x0) ? 1.0 : -1.0;
  const double span = std::abs(x1 - x0);
  if (span == 0.0) return x0;

  double x = x0;
  double h = dir * std::min(opt.h_init, span);
  State k1 = f(x, y);

  for (long step = 0; step < opt.max_steps; ++step) {
    if (dir * (x + h - x1) > 0.0) h = x1 - x;

    State y2 = y + h * a21 * k1;
    State k2 = f(x + c2 * h, y2);
    State y3 = y + h * (a31 * k1 + a32 * k2);
    State k3 = f(x + c3 * h, y3);
    State y4 = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    State k4 = f(x + c4 * h, y4);
    State y5 = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    State k5 = f(x + c5 * h, y5);
    State y6 = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    State k6 = f(x + h, y6);
    State ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    State k7 = f(x + h, ynew);
    State ylow = y + h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 +
                          e7 * k7);

    // scaled rms error over components
    double err2 = 0.0;
    const int n = static_cast<int>(y.size());
    for (int i = 0; i < n; ++i) {
      const double sc =
          opt.atol + opt.rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
      const double e = std::abs(ynew(i) - ylow(i)) / sc;
      err2 += e * e;
    }
    const double err = std::sqrt(err2 / n);

    if (err <= 1.0 || std::abs(h) <= 1e-14 * span) {
      x += h;
      y = ynew;
      if (!observer(x, y)) return x;
      if (dir * (x - x1) >= 0.0) return x;
      // the observer may have modified y, so do not reuse the FSAL slope
      k1 = f(x, y);
    }
    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h *= fac;
    if (opt.h_max > 0.0 && std::abs(h) > opt.h_max) h = dir * opt.h_max;
    if (std::abs(h) < 1e-15 * std::max(1.0, std::abs(x)))
      throw IntegrationFailure("ode45: step size underflow");
  }
  throw IntegrationFailure("ode45: max step count exceeded");
}

template <class State, class Rhs>
double ode45(Rhs&& f, State& y, double x0, double x1,
             const OdeOptions& opt = {}) {
  return ode45(std::forward<Rhs>(f), y, x0, x1, opt,
               [](double, State&) { return true; });
}

}  // namespace mhdstab

#endif
