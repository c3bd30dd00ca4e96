#pragma once

// Adaptive embedded Runge-Kutta (Cash-Karp 4/5) for scalar initial value
// problems, with first-crossing event detection.  Leakage currents span
// many decades across the temperature range, so fixed steps are not an
// option; the crossing itself is refined by bisection on the bracketing
// step.

#include <cmath>
#include <functional>
#include <limits>

#include "cqsedram/errors.hpp"

namespace cqsedram {

struct OdeSettings {
    double rel_tol = 1e-6;
    double abs_tol = 1e-12;
    double horizon = 1e4;        // seconds; past this the event is "never"
    double initial_step = 1e-9;  // seconds
};

namespace detail {

// One Cash-Karp step; returns 5th-order solution and the 4th/5th-order
// error estimate.
template <typename F>
void cash_karp_step(const F& f, double t, double y, double h, double& y5,
                    double& err) {
    const double k1 = f(t, y);
    const double k2 = f(t + h / 5.0, y + h * (k1 / 5.0));
    const double k3 = f(t + 3.0 * h / 10.0, y + h * (3.0 * k1 / 40.0 + 9.0 * k2 / 40.0));
    const double k4 = f(t + 3.0 * h / 5.0,
                        y + h * (3.0 * k1 / 10.0 - 9.0 * k2 / 10.0 + 6.0 * k3 / 5.0));
    const double k5 = f(t + h, y + h * (-11.0 * k1 / 54.0 + 5.0 * k2 / 2.0 -
                                        70.0 * k3 / 27.0 + 35.0 * k4 / 27.0));
    const double k6 =
        f(t + 7.0 * h / 8.0,
          y + h * (1631.0 * k1 / 55296.0 + 175.0 * k2 / 512.0 + 575.0 * k3 / 13824.0 +
                   44275.0 * k4 / 110592.0 + 253.0 * k5 / 4096.0));
    y5 = y + h * (37.0 * k1 / 378.0 + 250.0 * k3 / 621.0 + 125.0 * k4 / 594.0 +
                  512.0 * k6 / 1771.0);
    const double y4 = y + h * (2825.0 * k1 / 27648.0 + 18575.0 * k3 / 48384.0 +
                               13525.0 * k4 / 55296.0 + 277.0 * k5 / 14336.0 +
                               k6 / 4.0);
    err = std::fabs(y5 - y4);
}

}  // namespace detail

// Integrates dy/dt = f(t, y) from y(0) = y0 until event(y) crosses zero
// from positive to non-positive.  Returns the crossing time, or +inf if
// the event does not occur within settings.horizon.
template <typename F, typename E>
double integrate_to_event(const F& f, const E& event, double y0,
                          const OdeSettings& settings = {}) {
    if (event(y0) <= 0.0) return 0.0;

    double t = 0.0;
    double y = y0;
    double h = settings.initial_step;
    const double h_min = 1e-300;

    while (t < settings.horizon) {
        if (h < h_min || !std::isfinite(h)) {
            throw NumericError("integrate_to_event: step underflow at t=" +
                               std::to_string(t));
        }
        if (t + h > settings.horizon) h = settings.horizon - t;

        double y_next, err;
        detail::cash_karp_step(f, t, y, h, y_next, err);
        const double scale =
            settings.abs_tol + settings.rel_tol * std::max(std::fabs(y), std::fabs(y_next));
        if (err > scale && h > h_min) {
            double shrink = 0.9 * std::pow(scale / (err + 1e-300), 0.25);
            h *= std::max(0.1, std::min(0.9, shrink));
            continue;
        }

        if (!std::isfinite(y_next)) {
            throw NumericError("integrate_to_event: non-finite state");
        }

        if (event(y_next) <= 0.0) {
            // Bracketed; bisect on the step length.
            double lo = 0.0, hi = h;
            for (int i = 0; i < 80; ++i) {
                const double mid = 0.5 * (lo + hi);
                double y_mid, e_mid;
                detail::cash_karp_step(f, t, y, mid, y_mid, e_mid);
                if (event(y_mid) <= 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return t + 0.5 * (lo + hi);
        }

        // Stalled dynamics: if y barely moves and the field is ~0 the
        // event will never fire; bail out to the horizon sentinel.
        const double rate = std::fabs(f(t, y_next));
        const double gap = std::fabs(event(y_next));
        if (rate <= 0.0 || gap / rate > settings.horizon) {
            return std::numeric_limits<double>::infinity();
        }

        t += h;
        y = y_next;
        if (err > 0.0) {
            const double grow = 0.9 * std::pow(scale / err, 0.2);
            h *= std::min(5.0, std::max(0.2, grow));
        } else {
            h *= 5.0;
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace cqsedram
