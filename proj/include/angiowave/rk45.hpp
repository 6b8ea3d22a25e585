#pragma once

// Embedded Dormand-Prince 4(5) pair with FSAL, PI-free step control and
// cubic Hermite dense output between accepted steps.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace angio::rk {

template <std::size_t N>
using Vec = std::array<double, N>;

template <std::size_t N>
inline Vec<N> axpy(const Vec<N>& y, double a, const Vec<N>& x) {
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + a * x[i];
    return r;
}

/// Cubic Hermite interpolant on an accepted step [0,h], theta in [0,1].
template <std::size_t N>
inline Vec<N> hermite(const Vec<N>& y0, const Vec<N>& f0, const Vec<N>& y1, const Vec<N>& f1,
                      double h, double theta) {
    const double t = theta, t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    Vec<N> r;
    for (std::size_t i = 0; i < N; ++i)
        r[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
    return r;
}

struct AdaptiveOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double h_init = 1e-4;
    double h_min = 1e-14;
    double h_max = 0.1;
    std::size_t max_steps = 2000000;
};

enum class DriveStatus { ReachedEnd, Stopped, MinStepUnderflow, MaxSteps };

/// One accepted step of the pair. The callback sees the step endpoints and
/// slopes (for dense output) and returns false to stop the drive.
template <std::size_t N>
struct StepView {
    double t0, t1;
    const Vec<N>&y0, &y1;
    const Vec<N>&f0, &f1;
};

template <std::size_t N, class F, class Cb>
DriveStatus drive(F&& field, Vec<N> y, double t_end, const AdaptiveOptions& opt, Cb&& on_step) {
    double t = 0.0;
    double h = opt.h_init;
    Vec<N> f0 = field(y);
    for (std::size_t attempt = 0; attempt < opt.max_steps; ++attempt) {
        if (t >= t_end) return DriveStatus::ReachedEnd;
        h = std::min(h, t_end - t);
        h = std::min(h, opt.h_max);

        Vec<N> k2, k3, k4, k5, k6, y5, k7;
        {
            Vec<N> tmp;
            for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (1.0 / 5) * f0[i];
            k2 = field(tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (3.0 / 40 * f0[i] + 9.0 / 40 * k2[i]);
            k3 = field(tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (44.0 / 45 * f0[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
            k4 = field(tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (19372.0 / 6561 * f0[i] - 25360.0 / 2187 * k2[i] +
                                     64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
            k5 = field(tmp);
            for (std::size_t i = 0; i < N; ++i)
                tmp[i] = y[i] + h * (9017.0 / 3168 * f0[i] - 355.0 / 33 * k2[i] +
                                     46732.0 / 5247 * k3[i] + 49.0 / 176 * k4[i] -
                                     5103.0 / 18656 * k5[i]);
            k6 = field(tmp);
            for (std::size_t i = 0; i < N; ++i)
                y5[i] = y[i] + h * (35.0 / 384 * f0[i] + 500.0 / 1113 * k3[i] +
                                    125.0 / 192 * k4[i] - 2187.0 / 6784 * k5[i] +
                                    11.0 / 84 * k6[i]);
            k7 = field(y5);
        }

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e4 = y[i] + h * (5179.0 / 57600 * f0[i] + 7571.0 / 16695 * k3[i] +
                                          393.0 / 640 * k4[i] - 92097.0 / 339200 * k5[i] +
                                          187.0 / 2100 * k6[i] + 1.0 / 40 * k7[i]);
            const double sc = opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            const double d = (y5[i] - e4) / sc;
            err += d * d;
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            StepView<N> view{t, t + h, y, y5, f0, k7};
            if (!on_step(view)) return DriveStatus::Stopped;
            t += h;
            y = y5;
            f0 = k7;  // FSAL
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h *= fac;
        if (h < opt.h_min) return DriveStatus::MinStepUnderflow;
    }
    return DriveStatus::MaxSteps;
}

}  // namespace angio::rk
