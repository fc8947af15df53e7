#pragma once

// Independent adaptive Runge-Kutta (Dormand-Prince 5(4)) oracle used by the
// ODE tests. Deliberately avoids the matrix-exponential path under test.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using vec = std::vector<double>;

inline vec axpy(const vec& a, double s, const vec& b) {
    vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
    return r;
}

/// Integrates y' = f(y) from y0 over [0,T] with adaptive step control.
inline vec integrate(const std::function<vec(const vec&)>& f, vec y, double T,
                     double tol = 1e-12) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (T == 0) return y;
    double t = 0, h = std::min(1e-3, T);
    while (t < T) {
        if (t + h > T) h = T - t;
        vec k1 = f(y);
        vec k2 = f(axpy(y, h * a21, k1));
        vec y3(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) y3[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        vec k3 = f(y3);
        vec y4(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y4[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        vec k4 = f(y4);
        vec y5(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y5[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        vec k5 = f(y5);
        vec y6(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            y6[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        vec k6 = f(y6);
        vec ynew(y.size());
        for (std::size_t i = 0; i < y.size(); ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        vec k7 = f(ynew);
        double err = 0, scale = 1;
        for (std::size_t i = 0; i < y.size(); ++i) {
            double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
            err = std::max(err, std::abs(e));
            scale = std::max(scale, std::abs(ynew[i]));
        }
        double bound = tol * scale;
        if (err <= bound || h < 1e-12) {
            t += h;
            y = std::move(ynew);
        }
        double factor = err > 0 ? 0.9 * std::pow(bound / err, 0.2) : 2.0;
        h *= std::min(4.0, std::max(0.1, factor));
    }
    return y;
}

} // namespace oracle
