#include <doctest.h>

#include <cmath>
#include <limits>

#include "cqsedram/ode.hpp"

using namespace cqsedram;

TEST_CASE("constant-current discharge matches the linear analytic time") {
    // dy/dt = -I/C from 1.1 V to 0.55 V: t = C * dV / I.
    for (int k = 0; k < 10; ++k) {
        const double i = std::pow(10.0, -18.0 + 1.5 * k);
        const double c = 1e-15;
        auto f = [&](double, double) { return -i / c; };
        auto ev = [](double y) { return y - 0.55; };
        OdeSettings s;
        s.horizon = 1e30;
        s.initial_step = 1e-4 * c / i;
        const double t = integrate_to_event(f, ev, 1.1, s);
        const double expected = c * 0.55 / i;
        CHECK(t == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("exponential decay crossing matches the closed form") {
    const double tau = 3.7e-3;
    auto f = [&](double, double y) { return -y / tau; };
    const double target = 1.1 * std::exp(-2.0);
    auto ev = [&](double y) { return y - target; };
    OdeSettings s;
    s.initial_step = tau * 1e-4;
    const double t = integrate_to_event(f, ev, 1.1, s);
    CHECK(t == doctest::Approx(2.0 * tau).epsilon(1e-4));
}

TEST_CASE("event already satisfied returns zero") {
    auto f = [](double, double) { return -1.0; };
    auto ev = [](double y) { return y - 2.0; };
    CHECK(integrate_to_event(f, ev, 1.0) == 0.0);
}

TEST_CASE("stalled dynamics return the +inf sentinel") {
    auto f = [](double, double) { return 0.0; };
    auto ev = [](double y) { return y - 0.5; };
    OdeSettings s;
    s.horizon = 1.0;
    const double t = integrate_to_event(f, ev, 1.0, s);
    CHECK(std::isinf(t));
}

TEST_CASE("horizon bound is honored") {
    // Slow decay that would cross far beyond the horizon.
    auto f = [](double, double) { return -1e-9; };
    auto ev = [](double y) { return y - 0.5; };
    OdeSettings s;
    s.horizon = 10.0;
    CHECK(std::isinf(integrate_to_event(f, ev, 1.0, s)));
}
