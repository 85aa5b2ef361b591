#pragma once

// Adaptive Dormand-Prince 5(4) integrator over fixed-size complex state
// vectors. Kept self-contained: the coefficient systems are tiny (2-4
// components) and the observers need access to every accepted step for
// winding/zero tracking.

#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "qhj/error.hpp"

namespace qhj {

template <std::size_t N>
using State = std::array<std::complex<double>, N>;

struct OdeOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double initial_step = 1e-3;
    double min_step = 1e-14;
};

namespace detail {

template <std::size_t N>
double error_norm(const State<N>& err, const State<N>& y0, const State<N>& y1,
                  double rtol, double atol) {
    double acc = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double e = std::abs(err[i]) / scale;
        acc += e * e;
    }
    return std::sqrt(acc / N);
}

} // namespace detail

// Integrates dy/dt = f(t, y) from t0 to t1, calling observe(t, y) after
// every accepted step (including the initial state). Throws StepFailure
// when the controller cannot meet the tolerance.
template <std::size_t N, typename F, typename Observer>
State<N> integrate_adaptive(F&& f, State<N> y, double t0, double t1,
                            const OdeOptions& opt, Observer&& observe) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) {
        observe(t0, y);
        return y;
    }
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(opt.initial_step, std::abs(t1 - t0));
    observe(t, y);

    State<N> k1 = f(t, y);
    while (dir * (t1 - t) > 0) {
        if (dir * (t + h - t1) > 0) h = t1 - t;

        State<N> y2, y3, y4, y5, y6, ynew, yerr;
        for (std::size_t i = 0; i < N; ++i) y2[i] = y[i] + h * a21 * k1[i];
        State<N> k2 = f(t + c2 * h, y2);
        for (std::size_t i = 0; i < N; ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        State<N> k3 = f(t + c3 * h, y3);
        for (std::size_t i = 0; i < N; ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        State<N> k4 = f(t + c4 * h, y4);
        for (std::size_t i = 0; i < N; ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        State<N> k5 = f(t + c5 * h, y5);
        for (std::size_t i = 0; i < N; ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                a65 * k5[i]);
        State<N> k6 = f(t + h, y6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                  b6 * k6[i]);
        State<N> k7 = f(t + h, ynew);
        for (std::size_t i = 0; i < N; ++i)
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);

        double err = detail::error_norm(yerr, y, ynew, opt.rtol, opt.atol);
        if (err <= 1.0) { // NaN compares false and rejects the step
            t += h;
            y = ynew;
            k1 = k7; // FSAL
            observe(t, y);
        }
        double factor = 0.2;
        if (std::isfinite(err)) factor = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        factor = std::min(5.0, std::max(0.2, factor));
        h *= factor;
        if (std::abs(h) < opt.min_step)
            throw Error(ErrorCode::step_failure,
                        "adaptive step underflow at t=" + std::to_string(t));
    }
    return y;
}

template <std::size_t N, typename F>
State<N> integrate_adaptive(F&& f, const State<N>& y0, double t0, double t1,
                            const OdeOptions& opt = {}) {
    return integrate_adaptive<N>(std::forward<F>(f), y0, t0, t1, opt,
                                 [](double, const State<N>&) {});
}

} // namespace qhj
